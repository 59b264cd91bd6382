//! Shared generators for integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpwalk::{DirectedNetwork, Rational, VertexId};

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with small numerator and denominator, either sign.
pub fn small_weight(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.random_range(-3i64..=3);
    }
    rat(n, rng.random_range(1i64..=5))
}

/// Positive rational in `(0, 1]`.
pub fn positive_weight(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.random_range(1i64..=6);
    rat(rng.random_range(1..=d), d)
}

/// Random multigraph with loops and parallel edges allowed.
pub fn random_network(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize, boundary: usize) -> DirectedNetwork {
    let n = rng.random_range(boundary.max(2)..=max_vertices);
    let m = rng.random_range(1..=max_edges);
    let edges = (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n), small_weight(rng)))
        .collect();
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    DirectedNetwork::new(n, edges, ids[..boundary].to_vec()).unwrap()
}

/// `k` distinct vertices drawn from `pool`, in random order.
pub fn pick(rng: &mut ChaCha8Rng, pool: &[VertexId], k: usize) -> Vec<VertexId> {
    let mut p = pool.to_vec();
    p.shuffle(rng);
    p.truncate(k);
    p
}
