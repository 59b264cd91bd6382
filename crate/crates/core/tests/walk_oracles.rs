mod common;

use common::{pick, positive_weight, random_network, rng, small_weight};
use rand::Rng;
use tpwalk::linalg::{ScalarValue, Series};
use tpwalk::walks::grid::GridLayout;
use tpwalk::walks::{le_constrained_sum, lindstrom_sum, minor_via_walk_det, OracleMode, WalkMode};
use tpwalk::{DirectedNetwork, VertexId};

const ORDER: usize = 10;

fn det_series(net: &DirectedNetwork, a: &[VertexId], b: &[VertexId], hitting: bool) -> Series {
    match minor_via_walk_det(net, a, b, WalkMode::Series(ORDER), hitting).unwrap() {
        ScalarValue::Series(s) => s,
        other => panic!("unexpected {other:?}"),
    }
}

fn all_vertices(net: &DirectedNetwork) -> Vec<VertexId> {
    (0..net.vertex_count()).map(VertexId).collect()
}

#[test]
fn signed_oracle_equals_walk_minor() {
    let mut r = rng(11);
    let mut nontrivial = 0;
    for case in 0..60 {
        let k = 2 + case % 2;
        let net = random_network(&mut r, 5, 8, 0);
        let k = k.min(net.vertex_count());
        let a = pick(&mut r, &all_vertices(&net), k);
        let b = pick(&mut r, &all_vertices(&net), k);
        let sum = le_constrained_sum(&net, &a, &b, ORDER, OracleMode::Signed, false).unwrap();
        assert_eq!(
            sum.series,
            det_series(&net, &a, &b, false),
            "case {case}: {net:?} A={a:?} B={b:?}"
        );
        nontrivial += usize::from(!sum.series.is_zero());
    }
    assert!(nontrivial >= 20, "only {nontrivial} nonzero minors");
}

#[test]
fn signed_hitting_oracle_equals_hitting_minor() {
    let mut r = rng(12);
    let mut nontrivial = 0;
    for case in 0..60 {
        let k = 2 + case % 2;
        let net = random_network(&mut r, 5, 8, k);
        let a = pick(&mut r, &all_vertices(&net), k);
        let b = pick(&mut r, &net.boundary(), k);
        let sum = le_constrained_sum(&net, &a, &b, ORDER, OracleMode::Signed, true).unwrap();
        assert_eq!(
            sum.series,
            det_series(&net, &a, &b, true),
            "case {case}: {net:?} A={a:?} B={b:?}"
        );
        nontrivial += usize::from(!sum.series.is_zero());
    }
    assert!(nontrivial >= 10, "only {nontrivial} nonzero minors");
}

#[test]
fn planar_oracle_agrees_with_signed_on_grids() {
    let mut r = rng(13);
    for (rows, cols, start, gap) in [(1, 2, 0, 1), (2, 2, 1, 2), (2, 2, 0, 0), (2, 3, 1, 3)] {
        let layout = GridLayout::pendant(rows, cols).unwrap();
        let net = layout.directed_network(|_, _| positive_weight(&mut r));
        let (a, b) = layout.crossing_sets(start, 2, gap).unwrap();
        for hitting in [false, true] {
            let planar = le_constrained_sum(&net, &a, &b, ORDER, OracleMode::Planar, hitting).unwrap();
            let signed = le_constrained_sum(&net, &a, &b, ORDER, OracleMode::Signed, hitting).unwrap();
            assert_eq!(planar.series, signed.series, "{rows}x{cols} hitting={hitting}");
            assert_eq!(planar.series, det_series(&net, &a, &b, hitting));
        }
    }
}

#[test]
fn time_reversal_preserves_signed_sum() {
    let mut r = rng(14);
    for _ in 0..30 {
        let net = random_network(&mut r, 5, 8, 0);
        let k = 2.min(net.vertex_count());
        let a = pick(&mut r, &all_vertices(&net), k);
        let b = pick(&mut r, &all_vertices(&net), k);
        let forward = le_constrained_sum(&net, &a, &b, ORDER, OracleMode::Signed, false).unwrap();
        let backward = le_constrained_sum(&net.reversed(), &b, &a, ORDER, OracleMode::Signed, false).unwrap();
        assert_eq!(forward.series, backward.series);
    }
}

#[test]
fn reordering_sources_flips_sign_consistently() {
    let mut r = rng(15);
    for _ in 0..30 {
        let net = random_network(&mut r, 5, 8, 0);
        if net.vertex_count() < 3 {
            continue;
        }
        let a = pick(&mut r, &all_vertices(&net), 3);
        let b = pick(&mut r, &all_vertices(&net), 3);
        let base = le_constrained_sum(&net, &a, &b, ORDER, OracleMode::Signed, false)
            .unwrap()
            .series;
        // a transposition of the sources negates the sum; a 3-cycle keeps it
        let swapped = [a[1], a[0], a[2]];
        let rotated = [a[1], a[2], a[0]];
        let s = le_constrained_sum(&net, &swapped, &b, ORDER, OracleMode::Signed, false)
            .unwrap()
            .series;
        let c = le_constrained_sum(&net, &rotated, &b, ORDER, OracleMode::Signed, false)
            .unwrap()
            .series;
        assert_eq!(s, base.neg().with_order(ORDER));
        assert_eq!(c, base);
    }
}

#[test]
fn acyclic_oracle_is_non_intersecting_path_sum() {
    let mut r = rng(16);
    for _ in 0..30 {
        let n = r.random_range(3..=6);
        let m = r.random_range(2..=9);
        let edges = (0..m)
            .map(|_| {
                let u = r.random_range(0..n - 1);
                (u, r.random_range(u + 1..n), small_weight(&mut r))
            })
            .collect();
        let net = DirectedNetwork::new(n, edges, []).unwrap();
        let verts = all_vertices(&net);
        let a = pick(&mut r, &verts, 2);
        let b = pick(&mut r, &verts, 2);
        let sum = le_constrained_sum(&net, &a, &b, 2 * n, OracleMode::Signed, false).unwrap();
        let exact = lindstrom_sum(&net, &a, &b).unwrap();
        assert_eq!(sum.series.eval(&common::rat(1, 1)), exact);
    }
}
