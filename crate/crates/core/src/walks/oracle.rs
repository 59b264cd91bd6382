//! Loop-erased walk oracles for minors of walk and hitting matrices.
//!
//! [`le_constrained_sum`] sums signed weights of walk families
//! `a_i -> b_σ(i)` in which each walk avoids the loop-erased parts of
//! earlier walks (all earlier walks in signed mode, only the previous one in
//! planar mode). Rather than enumerating walk tuples it runs a dynamic
//! program over walk profiles `(length, visited set, loop-erased set)`: the
//! admissibility conditions only look at these sets, so families can be
//! combined profile by profile. [`admissible_families`] is the literal
//! enumerator, kept for audits and small cross-checks.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{permutation_sign, Series};
use crate::network::{enumerate_walks, loop_erase, loop_erased_vertices, walk_weight, DirectedNetwork, VertexId, Walk};
use crate::Rational;

/// A walk with the vertices it visits and its loop erasure.
type Profiled = (Walk, Vec<VertexId>, Vec<VertexId>);

/// Which admissibility condition and permutations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// All permutations with signs; walk `j` avoids `LE` of every earlier walk.
    Signed,
    /// Identity permutation only; walk `i + 1` avoids `LE` of walk `i`.
    /// Valid only when the crossing hypothesis holds for `A`, `B`.
    Planar,
}

/// Result of [`le_constrained_sum`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSum {
    /// Signed weight sum, coefficient `m` collecting families of total length `m`.
    pub series: Series,
    /// Number of admissible families of total length at most the order.
    pub families: u128,
    /// Set when no admissible family fits within the truncation order.
    pub truncation_too_small: bool,
}

/// Walks `π_i : a_i -> b_{σ(i)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkFamily {
    pub walks: Vec<Walk>,
    /// `σ` as the images of `0..k`.
    pub assignment: Vec<usize>,
}

impl WalkFamily {
    pub fn sign(&self) -> i32 {
        permutation_sign(&self.assignment)
    }

    pub fn total_len(&self) -> usize {
        self.walks.iter().map(Walk::len).sum()
    }

    /// `sgn(σ) · w(π_1) ⋯ w(π_k)`.
    pub fn signed_weight(&self, net: &DirectedNetwork) -> Result<Rational> {
        let mut w = Rational::from_integer(self.sign().into());
        for walk in &self.walks {
            w *= walk_weight(net, walk)?;
        }
        Ok(w)
    }
}

const MAX_VERTICES: usize = 64;

fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Summary of all walks sharing a length, vertex set and loop-erased set.
#[derive(Debug, Clone)]
struct Profile {
    len: usize,
    visited: u64,
    erased: u64,
    weight: Rational,
    count: u128,
}

/// Profiles of the walks from `start`, grouped by end vertex.
///
/// In hitting mode walks have positive length, end at a boundary vertex and
/// stop at the first boundary vertex after leaving `start`.
fn walk_profiles(net: &DirectedNetwork, start: usize, order: usize, hitting: bool) -> HashMap<usize, Vec<Profile>> {
    // state: loop-erased vertex sequence (last entry = current vertex) and visited set
    type State = (Vec<u8>, u64);
    let mut layer: HashMap<State, (Rational, u128)> = HashMap::new();
    layer.insert((vec![start as u8], bit(start)), (Rational::one(), 1));
    let mut out: HashMap<usize, Vec<Profile>> = HashMap::new();
    for len in 0..=order {
        for ((path, visited), (weight, count)) in &layer {
            let at = *path.last().expect("non-empty") as usize;
            let ends_here = if hitting {
                len > 0 && net.is_boundary(VertexId(at))
            } else {
                true
            };
            if ends_here {
                let erased = path.iter().fold(0u64, |m, &v| m | bit(v as usize));
                out.entry(at).or_default().push(Profile {
                    len,
                    visited: *visited,
                    erased,
                    weight: weight.clone(),
                    count: *count,
                });
            }
        }
        if len == order {
            break;
        }
        let mut next: HashMap<State, (Rational, u128)> = HashMap::new();
        for ((path, visited), (weight, count)) in layer {
            let at = *path.last().expect("non-empty") as usize;
            if hitting && len > 0 && net.is_boundary(VertexId(at)) {
                continue;
            }
            for &id in net.out_edges(VertexId(at)) {
                let e = &net.edges()[id.0];
                let head = e.head.0 as u8;
                let mut p = path.clone();
                // a boundary end is a fresh sink, even when the walk started there
                let stops = hitting && net.is_boundary(e.head);
                match p.iter().position(|&x| x == head) {
                    Some(i) if !stops => p.truncate(i + 1),
                    _ => p.push(head),
                }
                let entry = next
                    .entry((p, visited | bit(head as usize)))
                    .or_insert_with(|| (Rational::zero(), 0));
                entry.0 += &weight * &e.weight;
                entry.1 += count;
            }
        }
        layer = next;
    }
    out
}

struct Combiner<'a> {
    sources: usize,
    order: usize,
    mode: OracleMode,
    /// Mask applied to vertex sets before intersection tests.
    relevant: u64,
    /// `profiles[i][j]`: walks `a_i -> b_j`.
    profiles: Vec<Vec<&'a [Profile]>>,
    memo: HashMap<(usize, u64, u64), Vec<(Rational, u128)>>,
}

impl Combiner<'_> {
    /// Sum over walks `i..k`, given the forbidden set and the used targets,
    /// as (weight, count) per total length.
    fn rest(&mut self, i: usize, forbidden: u64, used: u64) -> Vec<(Rational, u128)> {
        let zero = || vec![(Rational::zero(), 0u128); self.order + 1];
        if i == self.sources {
            let mut v = zero();
            v[0] = (Rational::one(), 1);
            return v;
        }
        let key = (i, forbidden, used);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut acc = zero();
        let targets: Vec<usize> = match self.mode {
            OracleMode::Signed => (0..self.sources).filter(|j| used & bit(*j) == 0).collect(),
            OracleMode::Planar => vec![i],
        };
        for j in targets {
            // sign of σ accumulated one row at a time
            let inversions = (0..j).filter(|c| used & bit(*c) == 0).count();
            let negate = inversions % 2 == 1;
            let profiles = self.profiles[i][j];
            for p in profiles {
                if p.visited & forbidden & self.relevant != 0 {
                    continue;
                }
                let next_forbidden = match self.mode {
                    OracleMode::Signed => forbidden | p.erased,
                    OracleMode::Planar => p.erased,
                };
                let tail = self.rest(i + 1, next_forbidden, used | bit(j));
                for (m, (w, c)) in tail.iter().enumerate() {
                    if m + p.len > self.order || *c == 0 {
                        continue;
                    }
                    let term = &p.weight * w;
                    let slot = &mut acc[m + p.len];
                    if negate {
                        slot.0 -= term;
                    } else {
                        slot.0 += term;
                    }
                    slot.1 += p.count * c;
                }
            }
        }
        self.memo.insert(key, acc.clone());
        acc
    }
}

fn check_sets(net: &DirectedNetwork, a: &[VertexId], b: &[VertexId], hitting: bool) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for v in a.iter().chain(b) {
        net.check_vertex(*v)?;
    }
    if hitting {
        if let Some(v) = b.iter().find(|v| !net.is_boundary(**v)) {
            return Err(Error::NotBoundary(v.0));
        }
    }
    Ok(())
}

/// Signed weight sum of admissible walk families as a series in `t`
/// truncated at `order`.
///
/// With `hitting`, walks have positive length, avoid the boundary except at
/// their endpoints, and the avoidance conditions only concern interior
/// vertices; targets must be boundary vertices.
pub fn le_constrained_sum(
    net: &DirectedNetwork,
    a: &[VertexId],
    b: &[VertexId],
    order: usize,
    mode: OracleMode,
    hitting: bool,
) -> Result<OracleSum> {
    check_sets(net, a, b, hitting)?;
    if net.vertex_count() > MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices; the oracle supports at most {MAX_VERTICES}",
            net.vertex_count()
        )));
    }
    let relevant = if hitting {
        net.interior().iter().fold(0u64, |m, v| m | bit(v.0))
    } else {
        u64::MAX
    };
    let by_source: Vec<HashMap<usize, Vec<Profile>>> =
        a.iter().map(|s| walk_profiles(net, s.0, order, hitting)).collect();
    let empty: &[Profile] = &[];
    let profiles = by_source
        .iter()
        .map(|m| b.iter().map(|t| m.get(&t.0).map_or(empty, Vec::as_slice)).collect())
        .collect();
    let mut combiner = Combiner {
        sources: a.len(),
        order,
        mode,
        relevant,
        profiles,
        memo: HashMap::new(),
    };
    let sums = combiner.rest(0, 0, 0);
    let families = sums.iter().map(|(_, c)| c).sum();
    let series = Series::new(sums.into_iter().map(|(w, _)| w).collect(), order);
    Ok(OracleSum {
        series,
        families,
        truncation_too_small: families == 0,
    })
}

/// Every admissible family of total length at most `order`, ordered by total
/// length and then by the walks' edge ids.
pub fn admissible_families(
    net: &DirectedNetwork,
    a: &[VertexId],
    b: &[VertexId],
    order: usize,
    mode: OracleMode,
    hitting: bool,
) -> Result<Vec<WalkFamily>> {
    check_sets(net, a, b, hitting)?;
    let k = a.len();
    let assignments: Vec<Vec<usize>> = match mode {
        OracleMode::Signed => (0..k).permutations(k).collect(),
        OracleMode::Planar => vec![(0..k).collect()],
    };
    let counts = |v: &VertexId| !hitting || !net.is_boundary(*v);
    let mut out = Vec::new();
    for sigma in assignments {
        let choices: Vec<Vec<Profiled>> = (0..k)
            .map(|i| {
                let walks = enumerate_walks(net, a[i], b[sigma[i]], order, hitting)?;
                walks
                    .into_iter()
                    .map(|w| {
                        let visited = w.vertices(net)?;
                        let erased = if hitting {
                            let (last, prefix) = visited.split_last().expect("non-empty");
                            let ids: Vec<usize> = prefix.iter().map(|v| v.0).collect();
                            let mut le: Vec<VertexId> = loop_erased_vertices(&ids).into_iter().map(VertexId).collect();
                            le.push(*last);
                            le
                        } else {
                            loop_erase(net, &w)?.vertices(net)?
                        };
                        Ok((w, visited, erased))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for tuple in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            if tuple.iter().map(|(w, _, _)| w.len()).sum::<usize>() > order {
                continue;
            }
            let admissible = (0..k).all(|j| {
                let earlier = match mode {
                    OracleMode::Signed => 0..j,
                    OracleMode::Planar => j.saturating_sub(1)..j,
                };
                earlier
                    .into_iter()
                    .all(|i| !tuple[j].1.iter().any(|v| counts(v) && tuple[i].2.contains(v)))
            });
            if admissible {
                out.push(WalkFamily {
                    walks: tuple.iter().map(|(w, _, _)| w.clone()).collect(),
                    assignment: sigma.clone(),
                });
            }
        }
        if k == 0 {
            out.push(WalkFamily {
                walks: Vec::new(),
                assignment: Vec::new(),
            });
        }
    }
    out.sort_by(|x, y| {
        x.total_len().cmp(&y.total_len()).then_with(|| {
            let ex: Vec<&Vec<_>> = x.walks.iter().map(|w| &w.edges).collect();
            let ey: Vec<&Vec<_>> = y.walks.iter().map(|w| &w.edges).collect();
            ex.cmp(&ey)
        })
    });
    Ok(out)
}

/// Signed sum over vertex-disjoint path families `a_i -> b_σ(i)` of an
/// acyclic network (the classical non-intersecting paths expansion).
pub fn lindstrom_sum(net: &DirectedNetwork, a: &[VertexId], b: &[VertexId]) -> Result<Rational> {
    check_sets(net, a, b, false)?;
    if !net.is_acyclic() {
        return Err(Error::InvalidNetwork(
            "non-intersecting path expansion needs an acyclic network".into(),
        ));
    }
    let k = a.len();
    let n = net.vertex_count();
    let mut total = Rational::zero();
    for sigma in (0..k).permutations(k) {
        let paths: Vec<Vec<(Rational, u128)>> = (0..k)
            .map(|i| {
                enumerate_walks(net, a[i], b[sigma[i]], n, false)?
                    .into_iter()
                    .map(|w| {
                        let mask = w.vertices(net)?.iter().fold(0u128, |m, v| m | (1u128 << v.0));
                        Ok((walk_weight(net, &w)?, mask))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let sign = Rational::from_integer(permutation_sign(&sigma).into());
        for tuple in paths.iter().map(|p| p.iter()).multi_cartesian_product() {
            let mut used = 0u128;
            let disjoint = tuple.iter().all(|(_, m)| {
                let ok = used & m == 0;
                used |= m;
                ok
            });
            if disjoint {
                total += tuple.iter().fold(sign.clone(), |acc, (w, _)| acc * w);
            }
        }
        if k == 0 {
            total += sign;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{rat, three_cycle, three_cycle_weights};
    use crate::linalg::ScalarValue;
    use crate::network::EdgeId;
    use crate::walks::{minor_via_walk_det, WalkMode};

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    fn det_series(net: &DirectedNetwork, a: &[VertexId], b: &[VertexId], order: usize, hitting: bool) -> Series {
        match minor_via_walk_det(net, a, b, WalkMode::Series(order), hitting).unwrap() {
            ScalarValue::Series(s) => s,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_cycle_transposition_family() {
        // A = (b, c), B = (a, b): closed walks b -> b paired with the edge c -> a
        let (q1, q2, q3) = (rat(1, 2), rat(1, 3), rat(1, 5));
        let net = three_cycle_weights(q1.clone(), q2.clone(), q3.clone());
        let order = 12;
        let sum = le_constrained_sum(&net, &[v(1), v(2)], &[v(0), v(1)], order, OracleMode::Signed, false).unwrap();
        let cycle = &q1 * &q2 * &q3;
        for m in 0..=order {
            let expected = if m % 3 == 1 {
                -&q3 * num_traits::pow(cycle.clone(), m / 3)
            } else {
                rat(0, 1)
            };
            assert_eq!(sum.series.coeff(m), expected, "coefficient {m}");
        }
        assert_eq!(sum.series, det_series(&net, &[v(1), v(2)], &[v(0), v(1)], order, false));
        let families = admissible_families(&net, &[v(1), v(2)], &[v(0), v(1)], 7, OracleMode::Signed, false).unwrap();
        assert_eq!(families.len(), 3);
        for (m, f) in families.iter().enumerate() {
            assert_eq!(f.assignment, vec![1, 0]);
            assert_eq!(f.walks[1].edges, vec![EdgeId(2)]);
            assert_eq!(f.walks[0].len(), 3 * m);
        }
    }

    #[test]
    fn three_cycle_value_at_one_half() {
        let net = three_cycle(rat(1, 2));
        let sum = le_constrained_sum(&net, &[v(1), v(2)], &[v(0), v(1)], 60, OracleMode::Signed, false).unwrap();
        let approx = sum.series.eval(&rat(1, 1));
        let gap = approx - rat(-4, 7);
        assert!(num_traits::Signed::abs(&gap) < rat(1, 1_000_000));
    }

    #[test]
    fn single_walk_is_plain_walk_series() {
        let net = three_cycle_weights(rat(1, 2), rat(1, 3), rat(1, 5));
        let sum = le_constrained_sum(&net, &[v(0)], &[v(2)], 10, OracleMode::Signed, false).unwrap();
        let w = crate::walks::walk_matrix_series(&net, 10).unwrap();
        assert_eq!(sum.series, w.get(0, 2).with_order(10));
    }

    #[test]
    fn no_family_within_order_is_flagged() {
        let net = three_cycle(rat(1, 2));
        let sum = le_constrained_sum(&net, &[v(0)], &[v(2)], 1, OracleMode::Signed, false).unwrap();
        assert!(sum.truncation_too_small);
        assert!(sum.series.is_zero());
    }

    #[test]
    fn dp_matches_explicit_enumeration() {
        let net = DirectedNetwork::new(
            4,
            vec![
                (0, 1, rat(1, 2)),
                (1, 2, rat(1, 3)),
                (2, 0, rat(2, 3)),
                (1, 3, rat(1, 4)),
                (3, 1, rat(1, 5)),
                (2, 3, rat(3, 5)),
                (3, 3, rat(1, 7)),
            ],
            [3],
        )
        .unwrap();
        for hitting in [false, true] {
            for mode in [OracleMode::Signed, OracleMode::Planar] {
                let (a, b) = if hitting {
                    (vec![v(0)], vec![v(3)])
                } else {
                    (vec![v(0), v(1)], vec![v(2), v(3)])
                };
                let order = 7;
                let sum = le_constrained_sum(&net, &a, &b, order, mode, hitting).unwrap();
                let families = admissible_families(&net, &a, &b, order, mode, hitting).unwrap();
                let mut coeffs = vec![rat(0, 1); order + 1];
                for f in &families {
                    coeffs[f.total_len()] += f.signed_weight(&net).unwrap();
                }
                assert_eq!(sum.series, Series::new(coeffs, order));
                assert_eq!(sum.families, families.len() as u128);
            }
        }
    }

    #[test]
    fn walk_returning_to_its_boundary_source_keeps_its_interior() {
        // boundary {1, 2}; the walk 1 -> 0 -> 1 ends at a fresh copy of 1,
        // so its loop erasure still blocks 0 for the walk starting there
        let net = DirectedNetwork::new(
            3,
            vec![
                (0, 1, rat(1, 1)),
                (1, 0, rat(-1, 1)),
                (2, 0, rat(1, 1)),
                (0, 2, rat(2, 1)),
                (2, 2, rat(2, 5)),
            ],
            [1, 2],
        )
        .unwrap();
        let (a, b) = ([v(1), v(0)], [v(2), v(1)]);
        let det = det_series(&net, &a, &b, 8, true);
        assert!(det.is_zero());
        let sum = le_constrained_sum(&net, &a, &b, 8, OracleMode::Signed, true).unwrap();
        assert_eq!(sum.series, det);
        let families = admissible_families(&net, &a, &b, 8, OracleMode::Signed, true).unwrap();
        assert_eq!(sum.families, families.len() as u128);
        let flipped = le_constrained_sum(&net, &[v(0), v(1)], &[v(1), v(2)], 8, OracleMode::Signed, true).unwrap();
        assert_eq!(flipped.series, det_series(&net, &[v(0), v(1)], &[v(1), v(2)], 8, true));
    }

    #[test]
    fn lindstrom_on_small_dag() {
        // sources 0, 1 and sinks 2, 3 joined by single edges
        let net = DirectedNetwork::new(
            4,
            vec![
                (0, 2, rat(1, 2)),
                (0, 3, rat(1, 3)),
                (1, 3, rat(1, 5)),
                (1, 2, rat(1, 7)),
            ],
            [],
        )
        .unwrap();
        let l = lindstrom_sum(&net, &[v(0), v(1)], &[v(2), v(3)]).unwrap();
        assert_eq!(l, rat(1, 2) * rat(1, 5) - rat(1, 3) * rat(1, 7));
        let sum = le_constrained_sum(&net, &[v(0), v(1)], &[v(2), v(3)], 4, OracleMode::Signed, false).unwrap();
        assert_eq!(sum.series.eval(&rat(1, 1)), l);
        assert!(lindstrom_sum(&three_cycle(rat(1, 2)), &[v(0)], &[v(1)]).is_err());
    }
}
