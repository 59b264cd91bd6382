//! Simple random walk on the clipped quadrant `[0, R]²` with mesh `h`,
//! reflected at the `x` axis and absorbed on the `y` axis, and a banded
//! floating-point solver for its hitting distributions.

use std::f64::consts::PI;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::network::{DirectedNetwork, VertexId};
use crate::Rational;

/// Lattice `{0, …, n}²` with `x = i h`, `y = j h` and vertex id
/// `i (n + 1) + j`. The column `i = 0` is the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantGrid {
    pub h: f64,
    pub radius: f64,
    pub n: usize,
}

impl QuadrantGrid {
    /// Requires `h > 0` and `radius / h` an integer of at least 2.
    pub fn new(h: f64, radius: f64) -> Result<Self> {
        if !(h > 0.0 && radius > 0.0 && h.is_finite() && radius.is_finite()) {
            return Err(Error::DomainError(format!(
                "mesh {h} and radius {radius} must be positive"
            )));
        }
        let steps = radius / h;
        let n = steps.round();
        if (steps - n).abs() > 1e-9 * steps.max(1.0) || n < 2.0 {
            return Err(Error::DomainError(format!(
                "radius / mesh = {steps} must be an integer >= 2"
            )));
        }
        Ok(QuadrantGrid {
            h,
            radius,
            n: n as usize,
        })
    }

    pub fn vertex(&self, i: usize, j: usize) -> VertexId {
        VertexId(i * (self.n + 1) + j)
    }

    pub fn vertex_count(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    /// Steps of probability 1/4 to each lattice neighbour. On the `x` axis
    /// the downward step is folded into the upward one; steps leaving
    /// `[0, R]²` are dropped (the walk halts); boundary vertices have no
    /// outgoing steps.
    pub fn network(&self) -> DirectedNetwork {
        let quarter = Rational::new(1.into(), 4.into());
        let half = Rational::new(1.into(), 2.into());
        let n = self.n;
        let mut edges = Vec::with_capacity(4 * n * (n + 1));
        for i in 1..=n {
            for j in 0..=n {
                let tail = self.vertex(i, j).0;
                edges.push((tail, self.vertex(i - 1, j).0, quarter.clone()));
                if i < n {
                    edges.push((tail, self.vertex(i + 1, j).0, quarter.clone()));
                }
                if j < n {
                    let up = if j == 0 { half.clone() } else { quarter.clone() };
                    edges.push((tail, self.vertex(i, j + 1).0, up));
                }
                if j > 0 {
                    edges.push((tail, self.vertex(i, j - 1).0, quarter.clone()));
                }
            }
        }
        DirectedNetwork::new(self.vertex_count(), edges, (0..=n).map(|j| self.vertex(0, j).0)).expect("valid grid")
    }
}

/// Network of [`QuadrantGrid::network`].
pub fn quadrant_discretization(h: f64, radius: f64) -> Result<DirectedNetwork> {
    Ok(QuadrantGrid::new(h, radius)?.network())
}

/// Square matrix stored by diagonals `-lower ..= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        BandedMatrix {
            n,
            lower,
            upper,
            data: vec![0.0; n * (lower + upper + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        (j + self.lower >= i && j <= i + self.upper && i < self.n && j < self.n)
            .then(|| i * (self.lower + self.upper + 1) + j + self.lower - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Adds `value` at `(i, j)`; fails outside the band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let s = self.slot(i, j).ok_or(Error::IndexOutOfRange {
            index: i.max(j),
            len: self.n,
        })?;
        self.data[s] += value;
        Ok(())
    }

    /// Solves `A x = b` by LU elimination without pivoting, which keeps the
    /// factors inside the band. Intended for diagonally dominant systems.
    pub fn solve(mut self, mut b: Vec<f64>) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "rhs has {} entries, expected {}",
                b.len(),
                self.n
            )));
        }
        let n = self.n;
        for k in 0..n {
            let pivot = self.get(k, k);
            if pivot.abs() < 1e-300 || !pivot.is_finite() {
                return Err(Error::Singular);
            }
            let row_end = (k + self.upper).min(n - 1);
            for i in k + 1..=(k + self.lower).min(n - 1) {
                let s = self.slot(i, k).expect("in band");
                if self.data[s] == 0.0 {
                    continue;
                }
                let f = self.data[s] / pivot;
                self.data[s] = 0.0;
                for j in k + 1..=row_end {
                    let akj = self.get(k, j);
                    if akj != 0.0 {
                        let t = self.slot(i, j).expect("fill stays in band");
                        self.data[t] -= f * akj;
                    }
                }
                b[i] -= f * b[k];
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..=(i + self.upper).min(n - 1) {
                acc -= self.get(i, j) * b[j];
            }
            b[i] = acc / self.get(i, i);
        }
        Ok(b)
    }
}

/// Row `X(start, ·)` of the hitting matrix in floating point, columns in
/// increasing boundary order. The interior system is solved in band form
/// with the bandwidth read off the edge list.
pub fn hitting_row_f64(net: &DirectedNetwork, start: VertexId) -> Result<Vec<f64>> {
    net.check_vertex(start)?;
    let n = net.vertex_count();
    let boundary = net.boundary();
    let mut position = vec![usize::MAX; n];
    let interior = net.interior();
    for (p, v) in interior.iter().enumerate() {
        position[v.0] = p;
    }
    let mut bcol = vec![usize::MAX; n];
    for (c, v) in boundary.iter().enumerate() {
        bcol[v.0] = c;
    }
    let weight = |w: &Rational| w.to_f64().unwrap_or(f64::NAN);
    let m = interior.len();
    let mut band = 0;
    for e in net.edges() {
        if !net.is_boundary(e.tail) && !net.is_boundary(e.head) {
            band = band.max(position[e.tail.0].abs_diff(position[e.head.0]));
        }
    }
    // (I - Q_II)^T g = r
    let mut a = BandedMatrix::zeros(m, band, band);
    for p in 0..m {
        a.add(p, p, 1.0)?;
    }
    let mut rhs = vec![0.0; m];
    let mut row = vec![0.0; boundary.len()];
    if net.is_boundary(start) {
        for &id in net.out_edges(start) {
            let e = &net.edges()[id.0];
            if net.is_boundary(e.head) {
                row[bcol[e.head.0]] += weight(&e.weight);
            } else {
                rhs[position[e.head.0]] += weight(&e.weight);
            }
        }
    } else {
        rhs[position[start.0]] = 1.0;
    }
    for e in net.edges() {
        if !net.is_boundary(e.tail) && !net.is_boundary(e.head) && !e.weight.is_zero() {
            a.add(position[e.head.0], position[e.tail.0], -weight(&e.weight))?;
        }
    }
    let g = a.solve(rhs)?;
    for e in net.edges() {
        if !net.is_boundary(e.tail) && net.is_boundary(e.head) {
            row[bcol[e.head.0]] += g[position[e.tail.0]] * weight(&e.weight);
        }
    }
    Ok(row)
}

/// Grid hitting masses against kernel masses on matching boundary cells.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizationReport {
    pub h: f64,
    pub radius: f64,
    pub x0: f64,
    /// Hitting masses of `(0, jh)` normalized to total 1.
    pub masses: Vec<f64>,
    /// `∫ K(x0, y) dy` over `[(j - ½)h, (j + ½)h] ∩ [0, ∞)`, normalized
    /// to total 1 over the same cells.
    pub kernel_masses: Vec<f64>,
    /// `max_j |masses_j - kernel_masses_j|`.
    pub max_discrepancy: f64,
    /// `max_discrepancy / h`, the same error on the density scale.
    pub density_discrepancy: f64,
    /// `max_j |masses_j - kernel_masses_j| / max_j kernel_masses_j`.
    pub relative_discrepancy: f64,
}

/// Compares the walk started at `(x0, 0)` with the quadrant kernel.
pub fn discretization_discrepancy(h: f64, radius: f64, x0: f64) -> Result<DiscretizationReport> {
    let grid = QuadrantGrid::new(h, radius)?;
    let i0 = (x0 / h).round();
    if (x0 / h - i0).abs() > 1e-9 * i0.max(1.0) || i0 < 1.0 || i0 as usize >= grid.n {
        return Err(Error::DomainError(format!(
            "start {x0} is not an interior lattice point of mesh {h}"
        )));
    }
    let raw = hitting_row_f64(&grid.network(), grid.vertex(i0 as usize, 0))?;
    let total: f64 = raw.iter().sum();
    let masses: Vec<f64> = raw.iter().map(|m| m / total).collect();
    let cdf = |y: f64| 2.0 / PI * (y / x0).atan();
    let cells: Vec<f64> = (0..=grid.n)
        .map(|j| {
            let lo = ((j as f64 - 0.5) * h).max(0.0);
            cdf((j as f64 + 0.5) * h) - cdf(lo)
        })
        .collect();
    let kernel_total: f64 = cells.iter().sum();
    let kernel_masses: Vec<f64> = cells.iter().map(|c| c / kernel_total).collect();
    let worst = masses
        .iter()
        .zip(&kernel_masses)
        .map(|(m, k)| (m - k).abs())
        .fold(0.0, f64::max);
    let peak = kernel_masses.iter().cloned().fold(0.0, f64::max);
    Ok(DiscretizationReport {
        h,
        radius,
        x0,
        masses,
        kernel_masses,
        max_discrepancy: worst,
        density_discrepancy: worst / h,
        relative_discrepancy: worst / peak,
    })
}
