//! Small named networks used throughout the documentation and tests.

use num_bigint::BigInt;

use crate::network::{DirectedNetwork, VertexId};
use crate::Rational;

/// Shorthand for `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Directed 3-cycle `a -> b -> c -> a` with weights `q1, q2, q3`.
///
/// Vertices: a = 0, b = 1, c = 2. Edges: 0 = a->b, 1 = b->c, 2 = c->a.
/// No boundary.
pub fn three_cycle_weights(q1: Rational, q2: Rational, q3: Rational) -> DirectedNetwork {
    DirectedNetwork::new(3, vec![(0, 1, q1), (1, 2, q2), (2, 0, q3)], []).expect("valid")
}

/// [`three_cycle_weights`] with all three weights equal to `q`.
pub fn three_cycle(q: Rational) -> DirectedNetwork {
    three_cycle_weights(q.clone(), q.clone(), q)
}

/// Vertex labels of [`cycle_with_legs`].
#[derive(Debug, Clone, Copy)]
pub struct CycleLegsLabels {
    pub a1: VertexId,
    pub a2: VertexId,
    /// Lower-left cycle vertex (entered from `a2`).
    pub u: VertexId,
    /// Lower-right cycle vertex (exits to `b2`).
    pub v: VertexId,
    /// Top cycle vertex (entered from `a1`, exits to `b1`).
    pub c: VertexId,
    pub b1: VertexId,
    pub b2: VertexId,
}

/// A 3-cycle `u -> v -> c -> u` with legs `a1 -> c -> b1` and
/// `a2 -> u`, `v -> b2`; boundary `{b1, b2}`.
///
/// Edge `i` carries weight `q[i]` (`q1..q7` in order):
/// u->v, v->c, c->u, a1->c, c->b1, a2->u, v->b2.
pub fn cycle_with_legs_weights(q: [Rational; 7]) -> (DirectedNetwork, CycleLegsLabels) {
    let labels = CycleLegsLabels {
        a1: VertexId(0),
        a2: VertexId(1),
        u: VertexId(2),
        v: VertexId(3),
        c: VertexId(4),
        b1: VertexId(5),
        b2: VertexId(6),
    };
    let [q1, q2, q3, q4, q5, q6, q7] = q;
    let l = labels;
    let edges = vec![
        (l.u.0, l.v.0, q1),
        (l.v.0, l.c.0, q2),
        (l.c.0, l.u.0, q3),
        (l.a1.0, l.c.0, q4),
        (l.c.0, l.b1.0, q5),
        (l.a2.0, l.u.0, q6),
        (l.v.0, l.b2.0, q7),
    ];
    let net = DirectedNetwork::new(7, edges, [l.b1.0, l.b2.0]).expect("valid");
    (net, labels)
}

/// [`cycle_with_legs_weights`] with every weight equal to `q`.
pub fn cycle_with_legs(q: Rational) -> (DirectedNetwork, CycleLegsLabels) {
    cycle_with_legs_weights(std::array::from_fn(|_| q.clone()))
}
