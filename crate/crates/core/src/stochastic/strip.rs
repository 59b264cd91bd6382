//! Diagonal-step walks on the strip `Z × {0, …, N}`, clipped to
//! `|x| ≤ radius`.
//!
//! Steps are `(±1, ±1)` with translation-invariant weights. A step that
//! would leave the strip through `y = 0` or `y = N` is folded back (its
//! weight is added to the mirrored step). Sites with `|x| = radius` have no
//! outgoing steps.
//!
//! Moves preserve the parity of `x + y`, so the sections below stay on one
//! parity class: rows and columns advance in steps of two.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ScalarMatrix};
use crate::network::{DirectedNetwork, VertexId};
use crate::walks::walk_matrix_exact;
use crate::Rational;

/// Column and height of a strip vertex.
type Site = (i64, usize);

/// Step weights of the strip chain and its clipping.
#[derive(Debug, Clone, PartialEq)]
pub struct StripChain {
    pub width: usize,
    pub radius: i64,
    pub up_right: Rational,
    pub up_left: Rational,
    pub down_right: Rational,
    pub down_left: Rational,
}

/// Which finite section of the walk matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripSection {
    /// `T(j - i)`: rows `(2i, 0)`, columns `(2j + s, N)`, `s = N mod 2`.
    Toeplitz,
    /// `H(i + j)`: rows `(-2i - 1, 0)`, columns `(2j + 1, 0)`.
    Hankel,
}

impl StripChain {
    /// All four steps with weight `w`.
    pub fn symmetric(width: usize, radius: i64, w: Rational) -> Self {
        StripChain {
            width,
            radius,
            up_right: w.clone(),
            up_left: w.clone(),
            down_right: w.clone(),
            down_left: w,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.radius < 1 {
            return Err(Error::DomainError(format!(
                "strip needs width ≥ 1 and radius ≥ 1, got {} and {}",
                self.width, self.radius
            )));
        }
        let w = [&self.up_right, &self.up_left, &self.down_right, &self.down_left];
        if w.iter().any(|x| x.is_negative()) {
            return Err(Error::DomainError("step weights must be nonnegative".into()));
        }
        if w.iter().copied().sum::<Rational>() > Rational::one() {
            return Err(Error::DomainError("step weights sum to more than 1".into()));
        }
        Ok(())
    }

    pub fn vertex(&self, x: i64, y: usize) -> Result<VertexId> {
        if x.abs() > self.radius || y > self.width {
            return Err(Error::DomainError(format!("site ({x}, {y}) outside the clipped strip")));
        }
        Ok(VertexId((x + self.radius) as usize * (self.width + 1) + y))
    }

    /// The clipped chain; the two boundary rows form the boundary.
    pub fn network(&self) -> Result<DirectedNetwork> {
        self.validate()?;
        let n_top = self.width;
        let columns = (2 * self.radius + 1) as usize;
        let mut edges = Vec::new();
        for x in -self.radius + 1..self.radius {
            for y in 0..=n_top {
                let tail = self.vertex(x, y)?.0;
                let (mut up, mut down) = (
                    [self.up_right.clone(), self.up_left.clone()],
                    [self.down_right.clone(), self.down_left.clone()],
                );
                if y == 0 {
                    for i in 0..2 {
                        up[i] += std::mem::take(&mut down[i]);
                    }
                }
                if y == n_top {
                    for i in 0..2 {
                        down[i] += std::mem::take(&mut up[i]);
                    }
                }
                for (dx, i) in [(1, 0), (-1, 1)] {
                    if !up[i].is_zero() {
                        edges.push((tail, self.vertex(x + dx, y + 1)?.0, up[i].clone()));
                    }
                    if !down[i].is_zero() {
                        edges.push((tail, self.vertex(x + dx, y - 1)?.0, down[i].clone()));
                    }
                }
            }
        }
        let boundary = (0..columns).flat_map(|c| [c * (n_top + 1), c * (n_top + 1) + n_top]);
        DirectedNetwork::new(columns * (n_top + 1), edges, boundary)
    }

    fn section_sites(&self, size: usize, section: StripSection) -> (Vec<Site>, Vec<Site>) {
        let size = size as i64;
        match section {
            StripSection::Toeplitz => {
                let s = (self.width % 2) as i64;
                (
                    (0..size).map(|i| (2 * i, 0)).collect(),
                    (0..size).map(|j| (2 * j + s, self.width)).collect(),
                )
            }
            StripSection::Hankel => (
                (0..size).map(|i| (-2 * i - 1, 0)).collect(),
                (0..size).map(|j| (2 * j + 1, 0)).collect(),
            ),
        }
    }
}

/// `size × size` section of the walk matrix between boundary sites of the
/// clipped strip. Toeplitz sections depend on `j - i` and Hankel sections on
/// `i + j` up to clipping effects.
pub fn toeplitz_hitting(chain: &StripChain, size: usize, section: StripSection) -> Result<ScalarMatrix> {
    let net = chain.network()?;
    let (rows, cols) = chain.section_sites(size, section);
    let index = |sites: &[Site]| -> Result<Vec<usize>> {
        sites.iter().map(|&(x, y)| chain.vertex(x, y).map(|v| v.0)).collect()
    };
    let (r, c) = (index(&rows)?, index(&cols)?);
    if r.iter().chain(&c).any(|&v| {
        let x = (v / (chain.width + 1)) as i64 - chain.radius;
        x.abs() == chain.radius
    }) {
        return Err(Error::DomainError(format!(
            "section of size {size} reaches the clip radius {}",
            chain.radius
        )));
    }
    Ok(ScalarMatrix::Rational(walk_matrix_exact(&net)?.submatrix(&r, &c)?))
}

/// `T(k) = W((0, 0), (k, N))` for the given offsets.
pub fn strip_profile(chain: &StripChain, offsets: &[i64]) -> Result<Vec<(i64, Rational)>> {
    let net = chain.network()?;
    let w = walk_matrix_exact(&net)?;
    let a = chain.vertex(0, 0)?;
    offsets
        .iter()
        .map(|&k| Ok((k, w.get(a.0, chain.vertex(k, chain.width)?.0).clone())))
        .collect()
}

/// Rational matrix inside a [`ScalarMatrix`], for sections built above.
pub fn rational_section(m: ScalarMatrix) -> Option<Matrix<Rational>> {
    match m {
        ScalarMatrix::Rational(r) => Some(r),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::rat;
    use crate::linalg::is_totally_nonnegative;

    #[test]
    fn folding_at_the_bottom_row() {
        let chain = StripChain::symmetric(2, 3, rat(1, 4));
        let net = chain.network().unwrap();
        let bottom = chain.vertex(0, 0).unwrap();
        let out: Vec<_> = net.out_edges(bottom).iter().map(|id| &net.edges()[id.0]).collect();
        assert_eq!(out.len(), 2);
        for e in out {
            assert_eq!(e.weight, rat(1, 2));
            assert_eq!(e.head.0 % 3, 1);
        }
        let end = chain.vertex(3, 1).unwrap();
        assert!(net.out_edges(end).is_empty());
    }

    #[test]
    fn width_one_profile_is_symmetric_and_peaked() {
        let chain = StripChain::symmetric(1, 8, rat(1, 4));
        let t = strip_profile(&chain, &[-5, -3, -1, 1, 3, 5]).unwrap();
        let value = |k: i64| t.iter().find(|x| x.0 == k).unwrap().1.clone();
        for k in [1, 3, 5] {
            assert_eq!(value(k), value(-k));
        }
        assert!(value(1) > value(3) && value(3) > value(5));
    }

    #[test]
    fn sections_are_totally_nonnegative() {
        let chain = StripChain::symmetric(2, 7, rat(1, 4));
        for section in [StripSection::Toeplitz, StripSection::Hankel] {
            let m = rational_section(toeplitz_hitting(&chain, 3, section).unwrap()).unwrap();
            assert!(is_totally_nonnegative(&m, 3).holds, "{section:?}");
        }
    }

    #[test]
    fn oversized_section_is_rejected() {
        let chain = StripChain::symmetric(1, 4, rat(1, 4));
        assert!(toeplitz_hitting(&chain, 3, StripSection::Toeplitz).is_err());
        assert!(StripChain::symmetric(1, 4, rat(1, 3)).network().is_err());
    }
}
