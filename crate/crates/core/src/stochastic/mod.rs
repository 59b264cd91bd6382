//! Monte Carlo estimation of hitting probabilities and hitting-matrix minors
//! for Markov chains given as substochastic networks, plus exactly solvable
//! infinite-lattice examples realized by clipping.
//!
//! Trial `i` of a run with seed `s` draws all of its randomness from
//! `ChaCha8Rng::seed_from_u64(s ^ i)`, so serial and parallel runs produce
//! identical counts.

pub mod bernoulli;
pub mod strip;

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::network::{loop_erased_vertices, DirectedNetwork, EdgeId, VertexId, Walk};
use crate::Rational;

pub use bernoulli::{bernoulli_closed_forms, BernoulliChain, BernoulliForms, ThreePointLayout};
pub use strip::{rational_section, strip_profile, toeplitz_hitting, StripChain, StripSection};

pub const DEFAULT_MAX_STEPS: usize = 100_000;

const CHUNK: u64 = 4096;

/// How trials are distributed over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// How a sampled trajectory ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    /// First boundary vertex reached after at least one step.
    Hit(VertexId),
    /// The chain stopped with the deficit probability of the current vertex.
    Halted,
    /// `max_steps` steps were taken without reaching the boundary.
    Truncated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub walk: Walk,
    pub outcome: Outcome,
}

/// Sampler for the Markov chain whose transition probabilities are the edge
/// weights of a network.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    net: DirectedNetwork,
    seed: u64,
    /// Per vertex: cumulative probabilities with the edge taken.
    steps: Vec<Vec<(f64, EdgeId, usize)>>,
    boundary: Vec<bool>,
}

impl ChainSampler {
    /// Fails with [`Error::DomainError`] unless every weight is nonnegative
    /// and every vertex has total outgoing weight at most 1.
    pub fn new(net: DirectedNetwork, seed: u64) -> Result<Self> {
        let n = net.vertex_count();
        let mut steps = Vec::with_capacity(n);
        for v in 0..n {
            let mut total = Rational::zero();
            let mut cumulative = Vec::new();
            for &id in net.out_edges(VertexId(v)) {
                let e = &net.edges()[id.0];
                if e.weight < Rational::zero() {
                    return Err(Error::DomainError(format!(
                        "edge {id} has negative probability {}",
                        e.weight
                    )));
                }
                if e.weight.is_zero() {
                    continue;
                }
                total += &e.weight;
                cumulative.push((total.to_f64().unwrap_or(f64::NAN), id, e.head.0));
            }
            if total > Rational::from_integer(1.into()) {
                return Err(Error::DomainError(format!(
                    "outgoing probabilities of vertex {v} sum to {total} > 1"
                )));
            }
            steps.push(cumulative);
        }
        let boundary = (0..n).map(|v| net.is_boundary(VertexId(v))).collect();
        Ok(ChainSampler {
            net,
            seed,
            steps,
            boundary,
        })
    }

    pub fn network(&self) -> &DirectedNetwork {
        &self.net
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Random generator of trial `trial`.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ trial)
    }

    /// Runs one trajectory, appending visited vertices (start included) to
    /// `vertices` and taken edges to `edges` when given.
    fn run<R: Rng>(
        &self,
        start: usize,
        max_steps: usize,
        rng: &mut R,
        vertices: &mut Vec<usize>,
        mut edges: Option<&mut Vec<EdgeId>>,
    ) -> Outcome {
        let mut v = start;
        vertices.push(v);
        for _ in 0..max_steps {
            let u: f64 = rng.random();
            let Some(&(_, id, head)) = self.steps[v].iter().find(|(c, _, _)| u < *c) else {
                return Outcome::Halted;
            };
            if let Some(e) = edges.as_deref_mut() {
                e.push(id);
            }
            v = head;
            vertices.push(v);
            if self.boundary[v] {
                return Outcome::Hit(VertexId(v));
            }
        }
        Outcome::Truncated
    }

    /// Samples one trajectory from `start` with the randomness of trial
    /// `trial`. The clock starts before the first step, so a trajectory
    /// leaving a boundary vertex only hits on a later arrival.
    pub fn sample_trajectory(&self, trial: u64, start: VertexId, max_steps: usize) -> Result<Trajectory> {
        self.net.check_vertex(start)?;
        if max_steps == 0 {
            return Err(Error::DomainError("max_steps must be positive".into()));
        }
        let mut rng = self.trial_rng(trial);
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let outcome = self.run(start.0, max_steps, &mut rng, &mut vertices, Some(&mut edges));
        Ok(Trajectory {
            walk: Walk::new(start, edges),
            outcome,
        })
    }
}

/// Monte Carlo estimate of a probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`; NaN for a single sample.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub events: u64,
    /// Trials that failed because some trajectory hit `max_steps`.
    pub truncated: u64,
}

impl Estimate {
    fn from_counts(events: u64, truncated: u64, samples: u64, seed: u64) -> Self {
        let n = samples as f64;
        let mean = events as f64 / n;
        let stderr = if samples < 2 {
            f64::NAN
        } else {
            (mean * (1.0 - mean) * n / (n - 1.0)).sqrt() / n.sqrt()
        };
        Estimate {
            mean,
            stderr,
            samples,
            seed,
            events,
            truncated,
        }
    }

    /// `|mean - exact| / stderr`; infinite when `stderr` is zero and the
    /// mean differs.
    pub fn z_score(&self, exact: f64) -> f64 {
        let d = (self.mean - exact).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// Per-trial state of the event check.
struct TrialScratch {
    vertices: Vec<usize>,
    stamp: Vec<u64>,
    epoch: u64,
}

enum TrialResult {
    Event,
    Miss,
    Truncated,
}

struct MinorProblem<'a> {
    sampler: &'a ChainSampler,
    sources: Vec<usize>,
    targets: Vec<Vec<bool>>,
    max_steps: usize,
}

impl MinorProblem<'_> {
    fn trial(&self, index: u64, scratch: &mut TrialScratch) -> TrialResult {
        let mut rng = self.sampler.trial_rng(index);
        for (i, &a) in self.sources.iter().enumerate() {
            scratch.vertices.clear();
            match self
                .sampler
                .run(a, self.max_steps, &mut rng, &mut scratch.vertices, None)
            {
                Outcome::Hit(b) if self.targets[i][b.0] => {}
                Outcome::Truncated => return TrialResult::Truncated,
                _ => return TrialResult::Miss,
            }
            if i > 0 && scratch.vertices.iter().any(|&v| scratch.stamp[v] == scratch.epoch) {
                return TrialResult::Miss;
            }
            if i + 1 < self.sources.len() {
                scratch.epoch += 1;
                // the boundary end is a fresh sink, so erase loops before it only
                let before_hit = &scratch.vertices[..scratch.vertices.len() - 1];
                for v in loop_erased_vertices(before_hit) {
                    if !self.sampler.boundary[v] {
                        scratch.stamp[v] = scratch.epoch;
                    }
                }
            }
        }
        TrialResult::Event
    }

    fn count(&self, range: std::ops::Range<u64>) -> (u64, u64) {
        let mut scratch = TrialScratch {
            vertices: Vec::new(),
            stamp: vec![0; self.sampler.net.vertex_count()],
            epoch: 0,
        };
        let mut events = 0;
        let mut truncated = 0;
        for index in range {
            match self.trial(index, &mut scratch) {
                TrialResult::Event => events += 1,
                TrialResult::Miss => {}
                TrialResult::Truncated => truncated += 1,
            }
        }
        (events, truncated)
    }

    fn estimate(&self, samples: u64, execution: Execution) -> Estimate {
        let (events, truncated) = match execution {
            Execution::Serial => self.count(0..samples),
            Execution::Parallel => {
                let chunks = samples.div_ceil(CHUNK);
                (0..chunks)
                    .into_par_iter()
                    .map(|c| self.count(c * CHUNK..((c + 1) * CHUNK).min(samples)))
                    .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
            }
        };
        Estimate::from_counts(events, truncated, samples, self.sampler.seed)
    }
}

fn build_problem<'a>(
    s: &'a ChainSampler,
    a: &[VertexId],
    b_sets: &[Vec<VertexId>],
    samples: u64,
    max_steps: usize,
) -> Result<MinorProblem<'a>> {
    if a.len() != b_sets.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b_sets.len(),
        });
    }
    if samples == 0 || max_steps == 0 {
        return Err(Error::DomainError("samples and max_steps must be positive".into()));
    }
    let n = s.net.vertex_count();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut targets = Vec::with_capacity(b_sets.len());
    for (j, set) in b_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::DomainError(format!("target set {j} is empty")));
        }
        let mut mask = vec![false; n];
        for &b in set {
            s.net.check_vertex(b)?;
            if !s.net.is_boundary(b) {
                return Err(Error::NotBoundary(b.0));
            }
            if let Some(other) = owner[b.0] {
                if other != j {
                    return Err(Error::NotDisjoint(format!("{b} lies in target sets {other} and {j}")));
                }
            }
            owner[b.0] = Some(j);
            mask[b.0] = true;
        }
        targets.push(mask);
    }
    for &v in a {
        s.net.check_vertex(v)?;
    }
    Ok(MinorProblem {
        sampler: s,
        sources: a.iter().map(|v| v.0).collect(),
        targets,
        max_steps,
    })
}

/// Estimates `det X_{A,B}` as the probability that independent trajectories
/// from `a_1, …, a_k` first hit the boundary at `b_1, …, b_k` and each
/// `π_{i+1}` avoids the interior vertices of `LE(π_i)`. The caller is
/// responsible for the crossing hypothesis that makes the two agree.
pub fn estimate_hitting_minor(
    s: &ChainSampler,
    a: &[VertexId],
    b: &[VertexId],
    samples: u64,
    max_steps: usize,
) -> Result<Estimate> {
    estimate_hitting_minor_with(s, a, b, samples, max_steps, Execution::Parallel)
}

pub fn estimate_hitting_minor_with(
    s: &ChainSampler,
    a: &[VertexId],
    b: &[VertexId],
    samples: u64,
    max_steps: usize,
    execution: Execution,
) -> Result<Estimate> {
    let sets: Vec<Vec<VertexId>> = b.iter().map(|&v| vec![v]).collect();
    Ok(build_problem(s, a, &sets, samples, max_steps)?.estimate(samples, execution))
}

/// As [`estimate_hitting_minor`] with disjoint boundary sets as targets;
/// comparable to `det (X(a_i, B_j))`.
pub fn estimate_hitting_minor_sets(
    s: &ChainSampler,
    a: &[VertexId],
    b_sets: &[Vec<VertexId>],
    samples: u64,
    max_steps: usize,
) -> Result<Estimate> {
    estimate_hitting_minor_sets_with(s, a, b_sets, samples, max_steps, Execution::Parallel)
}

pub fn estimate_hitting_minor_sets_with(
    s: &ChainSampler,
    a: &[VertexId],
    b_sets: &[Vec<VertexId>],
    samples: u64,
    max_steps: usize,
    execution: Execution,
) -> Result<Estimate> {
    Ok(build_problem(s, a, b_sets, samples, max_steps)?.estimate(samples, execution))
}

/// Outcome counts of `samples` trajectories from one start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeTally {
    pub samples: u64,
    pub hits: BTreeMap<VertexId, u64>,
    pub halted: u64,
    pub truncated: u64,
}

impl OutcomeTally {
    pub fn hit_total(&self) -> u64 {
        self.hits.values().sum()
    }

    pub fn frequency(&self, b: VertexId) -> f64 {
        self.hits.get(&b).copied().unwrap_or(0) as f64 / self.samples as f64
    }
}

/// Samples trajectories `0..samples` from `start` and counts the outcomes.
pub fn outcome_tally(s: &ChainSampler, start: VertexId, samples: u64, max_steps: usize) -> Result<OutcomeTally> {
    s.net.check_vertex(start)?;
    if samples == 0 || max_steps == 0 {
        return Err(Error::DomainError("samples and max_steps must be positive".into()));
    }
    let mut tally = OutcomeTally {
        samples,
        hits: BTreeMap::new(),
        halted: 0,
        truncated: 0,
    };
    let mut vertices = Vec::new();
    for trial in 0..samples {
        vertices.clear();
        let mut rng = s.trial_rng(trial);
        match s.run(start.0, max_steps, &mut rng, &mut vertices, None) {
            Outcome::Hit(b) => *tally.hits.entry(b).or_insert(0) += 1,
            Outcome::Halted => tally.halted += 1,
            Outcome::Truncated => tally.truncated += 1,
        }
    }
    Ok(tally)
}
