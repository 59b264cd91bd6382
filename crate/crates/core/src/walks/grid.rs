//! Planar grid networks with boundary vertices listed counterclockwise.
//!
//! Choosing sources `a_1, …, a_k` and then targets `b_k, …, b_1`
//! consecutively along the counterclockwise boundary order guarantees the
//! crossing hypothesis of the planar oracle: any walk `a_i -> b_j` separates
//! `a_{i'}` from `b_{j'}` whenever `i' > i` and `j' < j`.

use crate::error::{Error, Result};
use crate::network::{DirectedNetwork, VertexId};
use crate::Rational;

/// Geometry of a `rows × cols` grid. Row 0 is the bottom row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub rows: usize,
    pub cols: usize,
    pub vertex_count: usize,
    /// Boundary vertices in counterclockwise order, starting at the bottom left.
    pub boundary_ccw: Vec<VertexId>,
    pendants: Vec<(VertexId, VertexId)>,
}

impl GridLayout {
    /// Grid cells are all interior; each side position carries a pendant
    /// boundary vertex joined to the adjacent cell (corner cells get two).
    pub fn pendant(rows: usize, cols: usize) -> Result<Self> {
        check_size(rows, cols)?;
        let cell = |r: usize, c: usize| VertexId(r * cols + c);
        let mut attach = Vec::new();
        attach.extend((0..cols).map(|c| cell(0, c)));
        attach.extend((0..rows).map(|r| cell(r, cols - 1)));
        attach.extend((0..cols).rev().map(|c| cell(rows - 1, c)));
        attach.extend((0..rows).rev().map(|r| cell(r, 0)));
        let base = rows * cols;
        let pendants: Vec<(VertexId, VertexId)> = attach
            .into_iter()
            .enumerate()
            .map(|(i, at)| (VertexId(base + i), at))
            .collect();
        Ok(GridLayout {
            rows,
            cols,
            vertex_count: base + pendants.len(),
            boundary_ccw: pendants.iter().map(|p| p.0).collect(),
            pendants,
        })
    }

    /// Plain grid whose outer ring of cells is the boundary.
    pub fn plain(rows: usize, cols: usize) -> Result<Self> {
        check_size(rows, cols)?;
        let cell = |r: usize, c: usize| VertexId(r * cols + c);
        let mut ring = Vec::new();
        ring.extend((0..cols).map(|c| cell(0, c)));
        ring.extend((1..rows).map(|r| cell(r, cols - 1)));
        if rows > 1 {
            ring.extend((0..cols.saturating_sub(1)).rev().map(|c| cell(rows - 1, c)));
        }
        if cols > 1 {
            ring.extend((1..rows.saturating_sub(1)).rev().map(|r| cell(r, 0)));
        }
        Ok(GridLayout {
            rows,
            cols,
            vertex_count: rows * cols,
            boundary_ccw: ring,
            pendants: Vec::new(),
        })
    }

    pub fn cell(&self, row: usize, col: usize) -> VertexId {
        VertexId(row * self.cols + col)
    }

    /// Undirected adjacencies in a fixed order: horizontal, vertical, pendants.
    pub fn undirected_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols.saturating_sub(1) {
                out.push((self.cell(r, c), self.cell(r, c + 1)));
            }
        }
        for r in 0..self.rows.saturating_sub(1) {
            for c in 0..self.cols {
                out.push((self.cell(r, c), self.cell(r + 1, c)));
            }
        }
        out.extend(self.pendants.iter().copied());
        out
    }

    /// Directed network with both orientations of every adjacency; `weight`
    /// receives `(tail, head)`.
    pub fn directed_network(&self, mut weight: impl FnMut(VertexId, VertexId) -> Rational) -> DirectedNetwork {
        let mut edges = Vec::new();
        for (u, v) in self.undirected_edges() {
            edges.push((u.0, v.0, weight(u, v)));
            edges.push((v.0, u.0, weight(v, u)));
        }
        DirectedNetwork::new(self.vertex_count, edges, self.boundary_ccw.iter().map(|v| v.0)).expect("valid grid")
    }

    /// Sources at ccw positions `start, …, start + k - 1` and targets at the
    /// `k` positions after a further `gap`, so that the ccw order reads
    /// `a_1, …, a_k, b_k, …, b_1`.
    pub fn crossing_sets(&self, start: usize, k: usize, gap: usize) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
        let p = self.boundary_ccw.len();
        if 2 * k + gap > p {
            return Err(Error::DomainError(format!(
                "{k} sources and targets with gap {gap} do not fit on {p} boundary vertices"
            )));
        }
        let at = |i: usize| self.boundary_ccw[(start + i) % p];
        let a = (0..k).map(at).collect();
        let b = (0..k).rev().map(|i| at(k + gap + i)).collect();
        Ok((a, b))
    }
}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::DomainError(format!(
            "grid must have at least one row and column, got {rows}x{cols}"
        )));
    }
    Ok(())
}
