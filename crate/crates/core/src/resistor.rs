//! Resistor networks: Kirchhoff and response matrices, the associated Markov
//! chain, and Ingerman's path expansion of response-matrix minors.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{permutation_sign, Matrix};
use crate::network::{DirectedNetwork, VertexId};
use crate::walks::grid::GridLayout;
use crate::Rational;

/// Connected undirected network with positive conductivities.
#[derive(Debug, Clone, PartialEq)]
pub struct ConductivityNetwork {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId, Rational)>,
    boundary: Vec<bool>,
    /// Total conductance between each adjacent pair.
    conductance: Vec<HashMap<usize, Rational>>,
}

impl ConductivityNetwork {
    /// Fails unless every conductivity is positive, no edge is a loop, the
    /// network is connected and the boundary is nonempty.
    pub fn new<I>(vertex_count: usize, edges: Vec<(usize, usize, Rational)>, boundary: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut is_boundary = vec![false; vertex_count];
        for b in boundary {
            if b >= vertex_count {
                return Err(Error::InvalidVertex {
                    vertex: b,
                    count: vertex_count,
                });
            }
            is_boundary[b] = true;
        }
        if !is_boundary.iter().any(|&b| b) {
            return Err(Error::InvalidNetwork("boundary is empty".into()));
        }
        let mut conductance: Vec<HashMap<usize, Rational>> = vec![HashMap::new(); vertex_count];
        let mut built = Vec::with_capacity(edges.len());
        for (a, b, g) in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidNetwork(format!("loop at vertex {a}")));
            }
            if !g.is_positive() {
                return Err(Error::InvalidNetwork(format!(
                    "conductivity {g} on edge {a}-{b} is not positive"
                )));
            }
            *conductance[a].entry(b).or_insert_with(Rational::zero) += &g;
            *conductance[b].entry(a).or_insert_with(Rational::zero) += &g;
            built.push((VertexId(a), VertexId(b), g));
        }
        let net = ConductivityNetwork {
            vertex_count,
            edges: built,
            boundary: is_boundary,
            conductance,
        };
        if !net.is_connected() {
            return Err(Error::InvalidNetwork("network is not connected".into()));
        }
        Ok(net)
    }

    /// Grid with conductivity `gamma(u, v)` on each adjacency.
    pub fn from_grid(layout: &GridLayout, mut gamma: impl FnMut(VertexId, VertexId) -> Rational) -> Result<Self> {
        let edges = layout
            .undirected_edges()
            .into_iter()
            .map(|(u, v)| (u.0, v.0, gamma(u, v)))
            .collect();
        ConductivityNetwork::new(layout.vertex_count, edges, layout.boundary_ccw.iter().map(|v| v.0))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, Rational)] {
        &self.edges
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.boundary[v.0]
    }

    pub fn boundary(&self) -> Vec<VertexId> {
        (0..self.vertex_count)
            .filter(|&v| self.boundary[v])
            .map(VertexId)
            .collect()
    }

    pub fn interior(&self) -> Vec<VertexId> {
        (0..self.vertex_count)
            .filter(|&v| !self.boundary[v])
            .map(VertexId)
            .collect()
    }

    /// Total conductance between `a` and `b` (zero when not adjacent).
    pub fn conductance(&self, a: VertexId, b: VertexId) -> Rational {
        self.conductance[a.0].get(&b.0).cloned().unwrap_or_else(Rational::zero)
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.conductance[v.0].keys().map(|&u| VertexId(u)).collect();
        out.sort();
        out
    }

    fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in self.conductance[v].keys() {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `K(a, b) = -γ(a, b)` off the diagonal, `K(a, a) = Σ_c γ(a, c)`.
pub fn kirchhoff_matrix(net: &ConductivityNetwork) -> Matrix<Rational> {
    let n = net.vertex_count;
    let mut k = Matrix::<Rational>::zeros(n, n);
    for a in 0..n {
        let mut diag = Rational::zero();
        for (&b, g) in &net.conductance[a] {
            k.set(a, b, -g.clone());
            diag += g;
        }
        k.set(a, a, diag);
    }
    k
}

fn indices(vs: &[VertexId]) -> Vec<usize> {
    vs.iter().map(|v| v.0).collect()
}

/// Response matrix `Λ = K / K_{int,int}`, indexed by the boundary vertices
/// in increasing order.
pub fn response_matrix(net: &ConductivityNetwork) -> Result<Matrix<Rational>> {
    kirchhoff_matrix(net).schur_complement(&indices(&net.interior()))
}

/// Random walk with `p(a, b) = γ(a, b) / Σ_c γ(a, c)`, one edge per adjacent
/// ordered pair, in increasing `(a, b)` order. The boundary is kept.
pub fn associated_markov_chain(net: &ConductivityNetwork) -> DirectedNetwork {
    let mut edges = Vec::new();
    for a in 0..net.vertex_count {
        let total: Rational = net.conductance[a].values().sum();
        for b in net.neighbors(VertexId(a)) {
            edges.push((a, b.0, net.conductance(VertexId(a), b) / &total));
        }
    }
    DirectedNetwork::new(net.vertex_count, edges, net.boundary().into_iter().map(|v| v.0)).expect("valid chain")
}

/// `X_{∂,∂} = I - K_0^{-1} Λ` with `K_0` the diagonal of `K_{∂,∂}`.
pub fn hitting_from_response(net: &ConductivityNetwork) -> Result<Matrix<Rational>> {
    let k = kirchhoff_matrix(net);
    let lambda = response_matrix(net)?;
    let boundary = net.boundary();
    let n = boundary.len();
    let mut out = Matrix::<Rational>::zeros(n, n);
    for (i, a) in boundary.iter().enumerate() {
        let d = k.get(a.0, a.0);
        if d.is_zero() {
            return Err(Error::Singular);
        }
        for j in 0..n {
            let delta = if i == j { Rational::one() } else { Rational::zero() };
            out.set(i, j, delta - lambda.get(i, j) / d);
        }
    }
    Ok(out)
}

/// One vertex-disjoint path family `a_i -> b_σ(i)` through the interior.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyContribution {
    /// `σ` as images of `0..k`.
    pub assignment: Vec<usize>,
    /// Vertex sequences of the paths.
    pub paths: Vec<Vec<VertexId>>,
    /// Product of conductivities along all paths.
    pub weight: Rational,
    /// `det K_π` on the interior vertices off every path.
    pub complement_det: Rational,
    /// `(-1)^k sgn(σ) · weight · det K_π / det K_{int,int}`.
    pub contribution: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngermanMinor {
    /// `det Λ_{A,B}` from the path expansion.
    pub lambda_det: Rational,
    /// `det X_{A,B} = (-1)^k det Λ_{A,B} / Π_{a ∈ A} K(a, a)`.
    pub hitting_det: Rational,
    pub families: Vec<FamilyContribution>,
}

/// Minor `det Λ_{A,B}` of the response matrix as a signed sum over
/// vertex-disjoint path families through the interior, each weighted by the
/// conductivities along its paths and by the Kirchhoff determinant of the
/// interior vertices it leaves free.
pub fn ingerman_minor(net: &ConductivityNetwork, a: &[VertexId], b: &[VertexId]) -> Result<IngermanMinor> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for v in a.iter().chain(b) {
        if v.0 >= net.vertex_count {
            return Err(Error::InvalidVertex {
                vertex: v.0,
                count: net.vertex_count,
            });
        }
        if !net.is_boundary(*v) {
            return Err(Error::NotBoundary(v.0));
        }
    }
    let mut all: Vec<VertexId> = a.iter().chain(b).copied().collect();
    all.sort();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotDisjoint(format!(
            "sources {a:?} and targets {b:?} repeat a vertex"
        )));
    }
    if net.vertex_count > 64 {
        return Err(Error::TooLarge(format!(
            "{} vertices; path expansion supports at most 64",
            net.vertex_count
        )));
    }
    let k = kirchhoff_matrix(net);
    let interior = indices(&net.interior());
    let full_det = k.submatrix(&interior, &interior)?.det()?;
    let mut search = PathSearch {
        net,
        k: &k,
        interior: &interior,
        targets: b,
        dets: HashMap::new(),
        found: Vec::new(),
    };
    let mut paths = Vec::new();
    let mut assignment = Vec::new();
    search.extend(a, 0, 0, &mut paths, &mut assignment)?;
    let sign_k = if a.len().is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut families = Vec::with_capacity(search.found.len());
    let mut lambda_det = Rational::zero();
    for (assignment, paths, weight, complement_det) in search.found {
        let sign = Rational::from_integer(permutation_sign(&assignment).into());
        let contribution = &sign_k * sign * &weight * &complement_det / &full_det;
        lambda_det += &contribution;
        families.push(FamilyContribution {
            assignment,
            paths,
            weight,
            complement_det,
            contribution,
        });
    }
    let diag: Rational = a.iter().map(|v| k.get(v.0, v.0).clone()).product();
    let hitting_det = &sign_k * &lambda_det / diag;
    Ok(IngermanMinor {
        lambda_det,
        hitting_det,
        families,
    })
}

type Found = (Vec<usize>, Vec<Vec<VertexId>>, Rational, Rational);

struct PathSearch<'a> {
    net: &'a ConductivityNetwork,
    k: &'a Matrix<Rational>,
    interior: &'a [usize],
    targets: &'a [VertexId],
    /// `det K_π` keyed by the set of interior vertices used by the paths.
    dets: HashMap<u64, Rational>,
    found: Vec<Found>,
}

impl PathSearch<'_> {
    /// Chooses the path for source `i`, given the vertices used so far and
    /// the targets already assigned.
    fn extend(
        &mut self,
        sources: &[VertexId],
        i: usize,
        used: u64,
        paths: &mut Vec<Vec<VertexId>>,
        assignment: &mut Vec<usize>,
    ) -> Result<()> {
        if i == sources.len() {
            let weight = paths
                .iter()
                .flat_map(|p| p.windows(2))
                .fold(Rational::one(), |acc, w| acc * self.net.conductance(w[0], w[1]));
            let complement_det = self.complement_det(used)?;
            self.found
                .push((assignment.clone(), paths.clone(), weight, complement_det));
            return Ok(());
        }
        let mut routes = Vec::new();
        let mut path = vec![sources[i]];
        self.simple_paths(used | 1 << sources[i].0, assignment, &mut path, &mut routes);
        for (j, route) in routes {
            let mask = route.iter().fold(used, |m, v| m | 1 << v.0);
            paths.push(route);
            assignment.push(j);
            self.extend(sources, i + 1, mask, paths, assignment)?;
            paths.pop();
            assignment.pop();
        }
        Ok(())
    }

    /// Self-avoiding continuations of `path` that reach an unassigned target
    /// directly or through unused interior vertices.
    fn simple_paths(
        &self,
        used: u64,
        assigned: &[usize],
        path: &mut Vec<VertexId>,
        out: &mut Vec<(usize, Vec<VertexId>)>,
    ) {
        let at = *path.last().expect("non-empty");
        for next in self.net.neighbors(at) {
            if used & (1 << next.0) != 0 {
                continue;
            }
            if self.net.is_boundary(next) {
                if let Some(j) = self.targets.iter().position(|t| *t == next) {
                    if !assigned.contains(&j) {
                        let mut done = path.clone();
                        done.push(next);
                        out.push((j, done));
                    }
                }
                continue;
            }
            path.push(next);
            self.simple_paths(used | 1 << next.0, assigned, path, out);
            path.pop();
        }
    }

    fn complement_det(&mut self, used: u64) -> Result<Rational> {
        let key = self
            .interior
            .iter()
            .fold(0u64, |m, &v| if used & (1 << v) != 0 { m | 1 << v } else { m });
        if let Some(d) = self.dets.get(&key) {
            return Ok(d.clone());
        }
        let rest: Vec<usize> = self.interior.iter().copied().filter(|&v| key & (1 << v) == 0).collect();
        let d = self.k.submatrix(&rest, &rest)?.det()?;
        self.dets.insert(key, d.clone());
        Ok(d)
    }
}
