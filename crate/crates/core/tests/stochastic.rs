mod common;

use common::rat;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use tpwalk::linalg::{is_totally_nonnegative, Matrix};
use tpwalk::resistor::{associated_markov_chain, ConductivityNetwork};
use tpwalk::stochastic::bernoulli::gap;
use tpwalk::stochastic::{
    bernoulli_closed_forms, estimate_hitting_minor, estimate_hitting_minor_sets, outcome_tally, rational_section,
    toeplitz_hitting, BernoulliChain, ChainSampler, StripChain, StripSection, ThreePointLayout, DEFAULT_MAX_STEPS,
};
use tpwalk::walks::grid::GridLayout;
use tpwalk::walks::{boundary_columns, hitting_matrix};
use tpwalk::{fixtures, DirectedNetwork, Rational, VertexId};

#[test]
fn bernoulli_clip_matches_closed_forms() {
    let p = rat(3, 4);
    let chain = BernoulliChain::new(p.clone(), 60).unwrap();
    for (k, l, m) in [(1, 1, 1), (2, 3, 1)] {
        let f = bernoulli_closed_forms(&p, k, l, m).unwrap();
        let t = ThreePointLayout::new(k, l, m);
        let [_, a2, a3] = t.a;
        let [b1, _, b3] = t.b;
        let w = chain.walk_submatrix(&t.a, &t.b).unwrap();
        assert!(gap(w.get(0, 0), &f.w) < 1e-10);
        let (k1, l1) = (k as i64, l as i64);
        let e2 = chain.avoiding(k1, k1 + 1, &[0]).unwrap();
        assert!(gap(&e2, &f.e2) < 1e-10);
        let shifted = chain.avoiding(k1 + l1, k1, &[0]).unwrap();
        assert!(gap(&shifted, &f.e2_shifted) < 1e-10);
        let e3 = chain.avoiding(a3, b3, &[b1, a2]).unwrap();
        assert!(gap(&e3, &f.e3) < 1e-10);
        let long = bernoulli_closed_forms(&p, k + l + m, 1, 1).unwrap();
        let det = w.det().unwrap();
        assert!(gap(&det, &(&f.w * &long.e2 * &f.e3)) < 1e-8, "k={k} l={l} m={m}");
    }
}

#[test]
fn bernoulli_clip_error_shrinks_with_radius() {
    let p = rat(2, 3);
    let f = bernoulli_closed_forms(&p, 2, 1, 1).unwrap();
    let errors: Vec<f64> = [4, 8, 16]
        .iter()
        .map(|&m| {
            gap(
                &BernoulliChain::new(p.clone(), m)
                    .unwrap()
                    .avoiding(0, 1, &[-2])
                    .unwrap(),
                &f.e2,
            )
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

fn grid_chain() -> (DirectedNetwork, Vec<VertexId>, Vec<VertexId>) {
    let layout = GridLayout::pendant(4, 4).unwrap();
    let net = associated_markov_chain(&ConductivityNetwork::from_grid(&layout, |_, _| rat(1, 1)).unwrap());
    let (a, b) = layout.crossing_sets(1, 2, 6).unwrap();
    (net, a, b)
}

fn exact_minor(net: &DirectedNetwork, a: &[VertexId], b_sets: &[Vec<VertexId>]) -> f64 {
    let x = hitting_matrix(net).unwrap();
    let m = Matrix::from_fn(a.len(), b_sets.len(), |i, j| {
        let cols = boundary_columns(net, &b_sets[j]).unwrap();
        cols.iter().map(|&c| x.get(a[i].0, c).clone()).sum::<Rational>()
    });
    m.det().unwrap().to_f64().unwrap()
}

#[test]
fn seed_sweep_is_unbiased_on_small_chains() {
    let (fig, l) = fixtures::cycle_with_legs(rat(1, 2));
    let (grid, ga, gb) = grid_chain();
    let cases = [(fig, vec![l.a1, l.a2], vec![l.b1, l.b2]), (grid, ga, gb)];
    for (net, a, b) in cases {
        let sets: Vec<Vec<VertexId>> = b.iter().map(|&v| vec![v]).collect();
        let exact = exact_minor(&net, &a, &sets);
        assert!(exact > 0.0);
        for seed in 0..20 {
            let s = ChainSampler::new(net.clone(), seed).unwrap();
            let e = estimate_hitting_minor(&s, &a, &b, 20_000, DEFAULT_MAX_STEPS).unwrap();
            assert!(e.z_score(exact) < 4.0, "seed {seed}: {} vs {exact}", e.mean);
            assert_eq!(e.truncated, 0);
        }
    }
}

#[test]
fn boundary_arcs_match_aggregated_determinant() {
    let layout = GridLayout::pendant(3, 3).unwrap();
    let net = associated_markov_chain(&ConductivityNetwork::from_grid(&layout, |_, _| rat(1, 1)).unwrap());
    let ccw = &layout.boundary_ccw;
    let a = vec![ccw[1], ccw[2]];
    let sets = vec![vec![ccw[8], ccw[9]], vec![ccw[6], ccw[7]]];
    let exact = exact_minor(&net, &a, &sets);
    assert!(exact > 0.0);
    let s = ChainSampler::new(net, 21).unwrap();
    let e = estimate_hitting_minor_sets(&s, &a, &sets, 200_000, DEFAULT_MAX_STEPS).unwrap();
    assert!(e.z_score(exact) < 4.0, "{} vs {exact}", e.mean);
}

#[test]
fn whole_boundary_is_reached_from_grid_cells() {
    let (net, _, _) = grid_chain();
    let s = ChainSampler::new(net.clone(), 2).unwrap();
    let e = estimate_hitting_minor_sets(&s, &[VertexId(5)], &[net.boundary()], 5000, DEFAULT_MAX_STEPS).unwrap();
    assert_eq!(e.mean, 1.0);
}

#[test]
fn strip_sections_are_nearly_toeplitz_and_hankel() {
    let chain = StripChain {
        width: 2,
        radius: 14,
        up_right: rat(1, 4),
        up_left: rat(3, 20),
        down_right: rat(1, 5),
        down_left: rat(3, 20),
    };
    let t = rational_section(toeplitz_hitting(&chain, 3, StripSection::Toeplitz).unwrap()).unwrap();
    let h = rational_section(toeplitz_hitting(&chain, 3, StripSection::Hankel).unwrap()).unwrap();
    assert!(is_totally_nonnegative(&t, 3).holds);
    assert!(is_totally_nonnegative(&h, 3).holds);
    // clipping perturbs translation invariance only slightly this far from the ends
    for (i, j) in [(0, 0), (0, 1), (1, 0)] {
        let rel = gap(t.get(i, j), t.get(i + 1, j + 1)) / t.get(i, j).to_f64().unwrap();
        assert!(rel < 1e-2, "({i}, {j}): {rel}");
    }
    assert!(gap(h.get(0, 1), h.get(1, 0)) < 1e-2 * h.get(0, 1).to_f64().unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tally_frequencies_sum_to_one(seed in any::<u64>(), max_steps in 1usize..6, q in 1i64..=2) {
        let (net, l) = fixtures::cycle_with_legs(rat(q, 4));
        let s = ChainSampler::new(net, seed).unwrap();
        let t = outcome_tally(&s, l.a2, 300, max_steps).unwrap();
        prop_assert_eq!(t.hit_total() + t.halted + t.truncated, t.samples);
    }
}
