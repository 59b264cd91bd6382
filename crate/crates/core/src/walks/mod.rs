//! Walk matrices `W = (I - Q)^{-1}`, hitting matrices `X`, their minors and
//! the loop-erased enumeration oracles.

pub mod grid;
pub mod oracle;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{spectral_radius_bound, Matrix, Scalar, ScalarMatrix, ScalarValue, Series, TOLERANCES};
use crate::network::{DirectedNetwork, VertexId};
use crate::Rational;

pub use oracle::{admissible_families, le_constrained_sum, lindstrom_sum, OracleMode, OracleSum, WalkFamily};

/// How a walk matrix is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkMode {
    /// `(I - tQ)^{-1}` as power series in `t` truncated at the given order.
    Series(usize),
    /// `(I - Q)^{-1}` as an exact rational matrix, guarded by a spectral
    /// radius bound.
    Numeric,
}

/// Weighted adjacency matrix: `Q(a, b)` is the total weight of edges `a -> b`.
pub fn adjacency(net: &DirectedNetwork) -> Matrix<Rational> {
    let n = net.vertex_count();
    let mut q = Matrix::<Rational>::zeros(n, n);
    for e in net.edges() {
        let v = q.get(e.tail.0, e.head.0) + &e.weight;
        q.set(e.tail.0, e.head.0, v);
    }
    q
}

fn as_float(m: &Matrix<Rational>) -> Matrix<f64> {
    m.map(|x| x.to_f64().unwrap_or(f64::INFINITY))
}

fn check_convergent(q: &Matrix<Rational>) -> Result<()> {
    let bound = spectral_radius_bound(&as_float(q))?.bound;
    if bound < 1.0 - TOLERANCES.divergence_margin {
        Ok(())
    } else {
        Err(Error::Divergent { radius: bound })
    }
}

/// `I - tQ` with every entry a series of the given order.
fn identity_minus_tq(q: &Matrix<Rational>, order: usize) -> Matrix<Series> {
    Matrix::from_fn(q.rows(), q.cols(), |i, j| {
        let one = if i == j {
            Rational::from_integer(1.into())
        } else {
            <Rational as Zero>::zero()
        };
        Series::new(vec![one, -q.get(i, j).clone()], order)
    })
}

/// `I - Q`.
fn identity_minus(q: &Matrix<Rational>) -> Matrix<Rational> {
    Matrix::identity(q.rows()).minus(q).expect("square")
}

/// Walk matrix in exact rational form. Fails with [`Error::Divergent`] when
/// the walk series need not converge.
pub fn walk_matrix_exact(net: &DirectedNetwork) -> Result<Matrix<Rational>> {
    let q = adjacency(net);
    check_convergent(&q)?;
    identity_minus(&q).inverse()
}

/// Walk matrix as power series: entry `(a, b)` has coefficient `c_m` equal
/// to the total weight of walks `a -> b` of length `m`.
pub fn walk_matrix_series(net: &DirectedNetwork, order: usize) -> Result<Matrix<Series>> {
    identity_minus_tq(&adjacency(net), order).inverse()
}

pub fn walk_matrix(net: &DirectedNetwork, mode: WalkMode) -> Result<ScalarMatrix> {
    Ok(match mode {
        WalkMode::Series(order) => ScalarMatrix::Series(walk_matrix_series(net, order)?),
        WalkMode::Numeric => ScalarMatrix::Rational(walk_matrix_exact(net)?),
    })
}

/// The network with each boundary vertex `b` split into a source (keeping id
/// `b`, outgoing edges only) and a sink `n + i` for the `i`-th boundary
/// vertex (incoming edges only). Walks into a sink are exactly the walks
/// counted by the hitting matrix.
fn split_adjacency(net: &DirectedNetwork) -> (Matrix<Rational>, Vec<usize>) {
    let n = net.vertex_count();
    let boundary = net.boundary();
    let mut sink_of = vec![usize::MAX; n];
    for (i, b) in boundary.iter().enumerate() {
        sink_of[b.0] = n + i;
    }
    let size = n + boundary.len();
    let mut q = Matrix::<Rational>::zeros(size, size);
    for e in net.edges() {
        let head = if net.is_boundary(e.head) {
            sink_of[e.head.0]
        } else {
            e.head.0
        };
        let v = q.get(e.tail.0, head) + &e.weight;
        q.set(e.tail.0, head, v);
    }
    let sinks = boundary.iter().map(|b| sink_of[b.0]).collect();
    (q, sinks)
}

/// Columns `sinks` of `(I - M)^{-1}`, restricted to the first `n` rows.
fn split_columns<T: Scalar>(i_minus_q: &Matrix<T>, sinks: &[usize], n: usize) -> Result<Matrix<T>> {
    let size = i_minus_q.rows();
    let rhs = Matrix::from_fn(
        size,
        sinks.len(),
        |i, j| if i == sinks[j] { T::one() } else { T::zero() },
    );
    let full = i_minus_q.solve(&rhs)?;
    full.submatrix(&(0..n).collect::<Vec<_>>(), &(0..sinks.len()).collect::<Vec<_>>())
}

/// Interior vertices that cannot reach the boundary along nonzero-weight
/// edges, in increasing order.
pub fn absorbing_interior(net: &DirectedNetwork) -> Vec<VertexId> {
    let n = net.vertex_count();
    let mut incoming = vec![Vec::new(); n];
    for e in net.edges() {
        if !Zero::is_zero(&e.weight) {
            incoming[e.head.0].push(e.tail.0);
        }
    }
    let mut reaches = vec![false; n];
    let mut stack: Vec<usize> = net.boundary().into_iter().map(|v| v.0).collect();
    for &b in &stack {
        reaches[b] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in &incoming[v] {
            if !reaches[u] {
                reaches[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).filter(|&v| !reaches[v]).map(VertexId).collect()
}

/// Hitting matrix `X` with rows indexed by all vertices and columns by the
/// boundary vertices in increasing order.
///
/// Computed from the source/sink split; the boundary block is checked
/// against `I - X_{∂,∂} = (I - Q) / (I - Q_{int,int})`.
pub fn hitting_matrix(net: &DirectedNetwork) -> Result<Matrix<Rational>> {
    if let Some(v) = absorbing_interior(net).first() {
        return Err(Error::AbsorbingInterior { vertex: v.0 });
    }
    let q = adjacency(net);
    let interior: Vec<usize> = net.interior().into_iter().map(|v| v.0).collect();
    check_convergent(&q.submatrix(&interior, &interior)?)?;
    let n = net.vertex_count();
    let (split, sinks) = split_adjacency(net);
    let x = split_columns(&identity_minus(&split), &sinks, n)?;
    let boundary: Vec<usize> = net.boundary().into_iter().map(|v| v.0).collect();
    let schur = identity_minus(&q).schur_complement(&interior)?;
    let block = x.submatrix(&boundary, &(0..boundary.len()).collect::<Vec<_>>())?;
    let expected = Matrix::identity(boundary.len()).minus(&schur)?;
    if block != expected {
        return Err(Error::InvariantViolation(
            "hitting matrix disagrees with the Schur complement form".into(),
        ));
    }
    Ok(x)
}

/// Hitting matrix as power series in `t` (every edge weight multiplied by
/// `t`), with the same Schur cross-check on the boundary block.
pub fn hitting_matrix_series(net: &DirectedNetwork, order: usize) -> Result<Matrix<Series>> {
    let n = net.vertex_count();
    let (split, sinks) = split_adjacency(net);
    let x = split_columns(&identity_minus_tq(&split, order), &sinks, n)?;
    let q = adjacency(net);
    let interior: Vec<usize> = net.interior().into_iter().map(|v| v.0).collect();
    let boundary: Vec<usize> = net.boundary().into_iter().map(|v| v.0).collect();
    let schur = identity_minus_tq(&q, order).schur_complement(&interior)?;
    let block = x.submatrix(&boundary, &(0..boundary.len()).collect::<Vec<_>>())?;
    let expected = Matrix::<Series>::identity(boundary.len()).minus(&schur)?;
    let at_order = |m: &Matrix<Series>| m.map(|s| s.with_order(order));
    if at_order(&block) != at_order(&expected) {
        return Err(Error::InvariantViolation(
            "series hitting matrix disagrees with the Schur complement form".into(),
        ));
    }
    Ok(x)
}

/// Column index of each vertex of `targets` in the hitting matrix.
pub fn boundary_columns(net: &DirectedNetwork, targets: &[VertexId]) -> Result<Vec<usize>> {
    let boundary = net.boundary();
    targets
        .iter()
        .map(|b| {
            net.check_vertex(*b)?;
            boundary.iter().position(|x| x == b).ok_or(Error::NotBoundary(b.0))
        })
        .collect()
}

fn check_indices(net: &DirectedNetwork, a: &[VertexId], b: &[VertexId]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for v in a.iter().chain(b) {
        net.check_vertex(*v)?;
    }
    Ok(())
}

/// `det W_{A,B}` (or `det X_{A,B}` with `hitting`) in the requested mode.
pub fn minor_via_walk_det(
    net: &DirectedNetwork,
    a: &[VertexId],
    b: &[VertexId],
    mode: WalkMode,
    hitting: bool,
) -> Result<ScalarValue> {
    check_indices(net, a, b)?;
    let rows: Vec<usize> = a.iter().map(|v| v.0).collect();
    let cols: Vec<usize> = if hitting {
        boundary_columns(net, b)?
    } else {
        b.iter().map(|v| v.0).collect()
    };
    Ok(match (mode, hitting) {
        (WalkMode::Numeric, false) => ScalarValue::Rational(walk_matrix_exact(net)?.submatrix(&rows, &cols)?.det()?),
        (WalkMode::Numeric, true) => ScalarValue::Rational(hitting_matrix(net)?.submatrix(&rows, &cols)?.det()?),
        (WalkMode::Series(n), false) => ScalarValue::Series(
            walk_matrix_series(net, n)?
                .submatrix(&rows, &cols)?
                .det()?
                .with_order(n),
        ),
        (WalkMode::Series(n), true) => ScalarValue::Series(
            hitting_matrix_series(net, n)?
                .submatrix(&rows, &cols)?
                .det()?
                .with_order(n),
        ),
    })
}
