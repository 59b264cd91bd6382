//! Directed weighted multigraphs, walks and loop erasure.
//!
//! A [`DirectedNetwork`] is immutable once built. Vertices are dense indices
//! `0..vertex_count`; edges are numbered in insertion order. Loops and
//! parallel edges are allowed. A subset of the vertices is marked as the
//! boundary; everything else is interior.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::Rational;

/// Dense vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Dense edge index (position in the network's edge list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Rational,
}

/// Finite directed multigraph with rational edge weights and a boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedNetwork {
    vertex_count: usize,
    edges: Vec<Edge>,
    boundary: Vec<bool>,
    out_edges: Vec<Vec<EdgeId>>,
}

impl DirectedNetwork {
    /// Builds a network from `(tail, head, weight)` triples. Edge ids follow
    /// the order of `edges`.
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
        let mut out_edges = vec![Vec::new(); vertex_count];
        let mut built = Vec::with_capacity(edges.len());
        for (i, (tail, head, weight)) in edges.into_iter().enumerate() {
            for v in [tail, head] {
                if v >= vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            out_edges[tail].push(EdgeId(i));
            built.push(Edge {
                id: EdgeId(i),
                tail: VertexId(tail),
                head: VertexId(head),
                weight,
            });
        }
        Ok(DirectedNetwork {
            vertex_count,
            edges: built,
            boundary: is_boundary,
            out_edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id.0)
    }

    /// Outgoing edges of `v`, in id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.boundary[v.0]
    }

    /// Boundary vertices in increasing id order.
    pub fn boundary(&self) -> Vec<VertexId> {
        (0..self.vertex_count)
            .filter(|&v| self.boundary[v])
            .map(VertexId)
            .collect()
    }

    /// Interior vertices in increasing id order.
    pub fn interior(&self) -> Vec<VertexId> {
        (0..self.vertex_count)
            .filter(|&v| !self.boundary[v])
            .map(VertexId)
            .collect()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v.0,
                count: self.vertex_count,
            })
        }
    }

    /// Same vertices and boundary with a different boundary set.
    pub fn with_boundary<I: IntoIterator<Item = usize>>(&self, boundary: I) -> Result<Self> {
        DirectedNetwork::new(self.vertex_count, self.edge_triples(), boundary)
    }

    /// All edges reversed, weights and ids kept.
    pub fn reversed(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.head.0, e.tail.0, e.weight.clone()))
            .collect();
        DirectedNetwork::new(self.vertex_count, edges, self.boundary().into_iter().map(|v| v.0))
            .expect("reversal preserves validity")
    }

    /// Drops every edge touching one of `removed`. Vertex ids are kept, so the
    /// removed vertices become isolated.
    pub fn without_vertices(&self, removed: &[VertexId]) -> Self {
        let edges = self
            .edges
            .iter()
            .filter(|e| !removed.contains(&e.tail) && !removed.contains(&e.head))
            .map(|e| (e.tail.0, e.head.0, e.weight.clone()))
            .collect();
        DirectedNetwork::new(self.vertex_count, edges, self.boundary().into_iter().map(|v| v.0))
            .expect("edge removal preserves validity")
    }

    /// Same graph with every weight replaced by `f(weight)`.
    pub fn map_weights(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let edges = self.edges.iter().map(|e| (e.tail.0, e.head.0, f(&e.weight))).collect();
        DirectedNetwork::new(self.vertex_count, edges, self.boundary().into_iter().map(|v| v.0))
            .expect("reweighting preserves validity")
    }

    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let mut indegree = vec![0usize; self.vertex_count];
        for e in &self.edges {
            indegree[e.head.0] += 1;
        }
        let mut queue: Vec<usize> = (0..self.vertex_count).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &e in &self.out_edges[v] {
                let h = self.edges[e.0].head.0;
                indegree[h] -= 1;
                if indegree[h] == 0 {
                    queue.push(h);
                }
            }
        }
        seen == self.vertex_count
    }

    pub(crate) fn edge_triples(&self) -> Vec<(usize, usize, Rational)> {
        self.edges
            .iter()
            .map(|e| (e.tail.0, e.head.0, e.weight.clone()))
            .collect()
    }
}

/// A walk: a start vertex followed by a composable sequence of edges.
///
/// The empty edge sequence is the degenerate walk of length 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Walk {
    pub fn empty(start: VertexId) -> Self {
        Walk {
            start,
            edges: Vec::new(),
        }
    }

    pub fn new(start: VertexId, edges: Vec<EdgeId>) -> Self {
        Walk { start, edges }
    }

    /// Builds a walk from its edges alone; the start is the tail of the first
    /// edge. Fails on an empty list, since then the start is unknown.
    pub fn from_edges(net: &DirectedNetwork, edges: Vec<EdgeId>) -> Result<Self> {
        let first = edges
            .first()
            .ok_or_else(|| Error::InvalidWalk("empty edge list has no start vertex".into()))?;
        let start = net
            .edge(*first)
            .ok_or_else(|| Error::InvalidWalk(format!("unknown edge {}", first.0)))?
            .tail;
        let walk = Walk { start, edges };
        walk.vertices(net)?;
        Ok(walk)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertex sequence `a_0, a_1, ..., a_m`, validating composability.
    pub fn vertices(&self, net: &DirectedNetwork) -> Result<Vec<VertexId>> {
        net.check_vertex(self.start)
            .map_err(|_| Error::InvalidWalk(format!("start vertex {} missing", self.start.0)))?;
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        out.push(self.start);
        let mut at = self.start;
        for (i, id) in self.edges.iter().enumerate() {
            let e = net
                .edge(*id)
                .ok_or_else(|| Error::InvalidWalk(format!("unknown edge {}", id.0)))?;
            if e.tail != at {
                return Err(Error::InvalidWalk(format!(
                    "edge {} at position {} leaves vertex {} but the walk is at {}",
                    id.0, i, e.tail.0, at.0
                )));
            }
            at = e.head;
            out.push(at);
        }
        Ok(out)
    }

    pub fn end(&self, net: &DirectedNetwork) -> Result<VertexId> {
        Ok(*self.vertices(net)?.last().expect("vertex list is never empty"))
    }
}

/// Product of the edge weights along `walk`; 1 for the empty walk.
pub fn walk_weight(net: &DirectedNetwork, walk: &Walk) -> Result<Rational> {
    walk.vertices(net)?;
    Ok(walk
        .edges
        .iter()
        .fold(Rational::one(), |acc, id| acc * &net.edges[id.0].weight))
}

/// Chronological loop erasure of a vertex sequence.
///
/// Returns the positions (indices into `vertices`) that survive. Each new
/// vertex either extends the current self-avoiding path or, if already on
/// it, cuts the path back to its earlier occurrence.
pub fn loop_erased_positions(vertices: &[usize]) -> Vec<usize> {
    let max = vertices.iter().copied().max().map_or(0, |m| m + 1);
    let mut on_path: Vec<Option<usize>> = vec![None; max];
    // stack of (vertex, position in the original sequence)
    let mut stack: Vec<(usize, usize)> = Vec::with_capacity(vertices.len());
    for (pos, &v) in vertices.iter().enumerate() {
        match on_path[v] {
            Some(depth) => {
                while stack.len() > depth + 1 {
                    let (u, _) = stack.pop().expect("non-empty");
                    on_path[u] = None;
                }
            }
            None => {
                on_path[v] = Some(stack.len());
                stack.push((v, pos));
            }
        }
    }
    stack.into_iter().map(|(_, pos)| pos).collect()
}

/// Loop-erased vertex sequence.
pub fn loop_erased_vertices(vertices: &[usize]) -> Vec<usize> {
    loop_erased_positions(vertices)
        .into_iter()
        .map(|p| vertices[p])
        .collect()
}

/// The loop-erased part `LE(walk)`: the self-avoiding walk obtained by
/// repeatedly removing the first loop the walk closes.
pub fn loop_erase(net: &DirectedNetwork, walk: &Walk) -> Result<Walk> {
    let vertices: Vec<usize> = walk.vertices(net)?.into_iter().map(|v| v.0).collect();
    let kept = loop_erased_positions(&vertices);
    // position p > 0 in the vertex sequence is reached through edge p - 1
    let edges = kept.iter().skip(1).map(|&p| walk.edges[p - 1]).collect();
    Ok(Walk {
        start: walk.start,
        edges,
    })
}

/// Splits `walk` at a vertex `v` of its loop-erased part into `(first, rest)`
/// such that the last edge of `first` survives in `LE(first)` and `rest`
/// avoids `LE(first)` except at `v`. For `v` equal to the start, `first` is
/// the empty walk.
pub fn split_at_loop_erased_vertex(net: &DirectedNetwork, walk: &Walk, v: VertexId) -> Result<Option<(Walk, Walk)>> {
    let vertices: Vec<usize> = walk.vertices(net)?.into_iter().map(|x| x.0).collect();
    let kept = loop_erased_positions(&vertices);
    if walk.start == v {
        return Ok(Some((Walk::empty(v), walk.clone())));
    }
    let Some(&pos) = kept.iter().find(|&&p| vertices[p] == v.0) else {
        return Ok(None);
    };
    let first = Walk {
        start: walk.start,
        edges: walk.edges[..pos].to_vec(),
    };
    let rest = Walk {
        start: v,
        edges: walk.edges[pos..].to_vec(),
    };
    Ok(Some((first, rest)))
}

/// All walks from `a` to `b` of length at most `max_len`, ordered by length
/// and then lexicographically by edge ids.
///
/// With `interior_only`, only walks of positive length whose internal
/// vertices are all interior are returned (the walks counted by the hitting
/// matrix).
pub fn enumerate_walks(
    net: &DirectedNetwork,
    a: VertexId,
    b: VertexId,
    max_len: usize,
    interior_only: bool,
) -> Result<Vec<Walk>> {
    net.check_vertex(a)?;
    net.check_vertex(b)?;
    let mut found = Vec::new();
    let mut path = Vec::new();
    collect_walks(net, a, a, b, max_len, interior_only, &mut path, &mut found);
    found.sort_by(|x: &Walk, y: &Walk| x.len().cmp(&y.len()).then_with(|| x.edges.cmp(&y.edges)));
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn collect_walks(
    net: &DirectedNetwork,
    start: VertexId,
    at: VertexId,
    target: VertexId,
    budget: usize,
    interior_only: bool,
    path: &mut Vec<EdgeId>,
    found: &mut Vec<Walk>,
) {
    if at == target && (!interior_only || !path.is_empty()) {
        found.push(Walk {
            start,
            edges: path.clone(),
        });
    }
    if budget == 0 {
        return;
    }
    // internal vertices of an interior-only walk must be interior
    if interior_only && !path.is_empty() && net.is_boundary(at) {
        return;
    }
    for &id in net.out_edges(at) {
        path.push(id);
        collect_walks(
            net,
            start,
            net.edges[id.0].head,
            target,
            budget - 1,
            interior_only,
            path,
            found,
        );
        path.pop();
    }
}

/// Set of vertex ids visited by a walk.
pub fn vertex_set(net: &DirectedNetwork, walk: &Walk) -> Result<BTreeSet<VertexId>> {
    Ok(walk.vertices(net)?.into_iter().collect())
}
