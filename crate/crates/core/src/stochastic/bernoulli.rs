//! Biased nearest-neighbour walk on the integers: step `+1` with
//! probability `p`, `-1` with probability `q = 1 - p`, with `p > 1/2`.
//!
//! Closed forms, with `r = q / p`:
//!
//! * `W(n, n + k) = (p - q)^{-1}` for `k ≥ 0`;
//! * `E(a₂, b₂; b₁) = (p - q)^{-1} (1 - r^k)` when `b₁ < a₂ ≤ b₂`, `a₂ - b₁ = k`;
//! * `E(a₂, b₂; b₁) = (p - q)^{-1} r^l (1 - r^k)` when `b₁ < b₂ < a₂`,
//!   `b₂ - b₁ = k`, `a₂ - b₂ = l`;
//! * `E(a₃, b₃; b₁, a₂) = (1 - r^k)(1 - r^m) / ((p - q)(1 - r^{k+l+m}))` when
//!   `b₁ < a₃ < b₃ < a₂` with gaps `k, l, m`.
//!
//! `E(a, b; S)` is the walk generating function from `a` to `b` avoiding `S`.
//! The finite versions clip the integers to `[-M, M]` with absorbing ends.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::network::{DirectedNetwork, VertexId};
use crate::walks::walk_matrix_exact;
use crate::Rational;

/// Exact closed-form values at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliForms {
    pub w: Rational,
    pub e2: Rational,
    pub e2_shifted: Rational,
    pub e3: Rational,
}

fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

fn check_drift(p: &Rational) -> Result<Rational> {
    let half = Rational::new(1.into(), 2.into());
    if *p <= half || *p > Rational::one() {
        return Err(Error::DriftViolation(p.to_string()));
    }
    Ok(Rational::one() - p)
}

/// `W(k)`, `E2(k)`, `E2_shifted(k, l)` and `E3(k, l, m)` for `1/2 < p ≤ 1`.
pub fn bernoulli_closed_forms(p: &Rational, k: u32, l: u32, m: u32) -> Result<BernoulliForms> {
    let q = check_drift(p)?;
    if k == 0 || l == 0 || m == 0 {
        return Err(Error::DomainError(format!(
            "gaps must be positive, got k={k}, l={l}, m={m}"
        )));
    }
    let r = &q / p;
    let w = Rational::one() / (p - &q);
    let e2 = &w * (Rational::one() - pow(&r, k));
    let e2_shifted = &w * pow(&r, l) * (Rational::one() - pow(&r, k));
    let e3 =
        &w * (Rational::one() - pow(&r, k)) * (Rational::one() - pow(&r, m)) / (Rational::one() - pow(&r, k + l + m));
    Ok(BernoulliForms { w, e2, e2_shifted, e3 })
}

/// The walk restricted to `[-radius, radius]`; the two end states have no
/// outgoing steps.
#[derive(Debug, Clone)]
pub struct BernoulliChain {
    pub p: Rational,
    pub radius: i64,
    net: DirectedNetwork,
}

impl BernoulliChain {
    pub fn new(p: Rational, radius: i64) -> Result<Self> {
        let q = check_drift(&p)?;
        if radius < 1 {
            return Err(Error::DomainError(format!(
                "clip radius must be positive, got {radius}"
            )));
        }
        let n = (2 * radius + 1) as usize;
        let mut edges = Vec::new();
        for i in 1..n - 1 {
            edges.push((i, i + 1, p.clone()));
            edges.push((i, i - 1, q.clone()));
        }
        let edges = edges.into_iter().filter(|e| !e.2.is_zero()).collect();
        let net = DirectedNetwork::new(n, edges, []).expect("valid chain");
        Ok(BernoulliChain { p, radius, net })
    }

    pub fn network(&self) -> &DirectedNetwork {
        &self.net
    }

    pub fn vertex(&self, x: i64) -> Result<VertexId> {
        if x.abs() > self.radius {
            return Err(Error::DomainError(format!(
                "site {x} outside [-{r}, {r}]",
                r = self.radius
            )));
        }
        Ok(VertexId((x + self.radius) as usize))
    }

    /// `W_{A,B}` of the clipped chain.
    pub fn walk_submatrix(&self, a: &[i64], b: &[i64]) -> Result<crate::linalg::Matrix<Rational>> {
        let rows = self.sites(a)?;
        let cols = self.sites(b)?;
        walk_matrix_exact(&self.net)?.submatrix(&rows, &cols)
    }

    /// Walk generating function from `a` to `b` avoiding the sites `avoid`.
    pub fn avoiding(&self, a: i64, b: i64, avoid: &[i64]) -> Result<Rational> {
        let removed: Vec<VertexId> = self.sites(avoid)?.into_iter().map(VertexId).collect();
        let (i, j) = (self.vertex(a)?, self.vertex(b)?);
        if removed.contains(&i) || removed.contains(&j) {
            return Ok(Rational::zero());
        }
        let w = walk_matrix_exact(&self.net.without_vertices(&removed))?;
        Ok(w.get(i.0, j.0).clone())
    }

    fn sites(&self, xs: &[i64]) -> Result<Vec<usize>> {
        xs.iter().map(|&x| self.vertex(x).map(|v| v.0)).collect()
    }
}

/// Sites `a₁ < b₁ < a₃ < b₃ < a₂ < b₂` with gaps `k, l, m` between `b₁`,
/// `a₃`, `b₃`, `a₂`, centered near the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreePointLayout {
    pub a: [i64; 3],
    pub b: [i64; 3],
}

impl ThreePointLayout {
    pub fn new(k: u32, l: u32, m: u32) -> Self {
        let (k, l, m) = (k as i64, l as i64, m as i64);
        let b1 = -(k + l + m) / 2;
        let a1 = b1 - 2;
        let a3 = b1 + k;
        let b3 = a3 + l;
        let a2 = b3 + m;
        let b2 = a2 + 2;
        ThreePointLayout {
            a: [a1, a2, a3],
            b: [b1, b2, b3],
        }
    }
}

/// Absolute difference of two rationals as a float.
pub fn gap(x: &Rational, y: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    (x - y).abs().to_f64().unwrap_or(f64::INFINITY)
}
