//! Truncated univariate power series with rational coefficients.

use std::fmt;

use num_traits::{One, Zero};

use crate::Rational;

/// Default truncation order for series computations.
pub const DEFAULT_ORDER: usize = 16;

/// Sentinel order of an exact (untruncated) polynomial.
const EXACT: usize = usize::MAX;

/// `c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})`.
///
/// Coefficients above the order are dropped by every operation; the result
/// of a binary operation carries the smaller of the two orders. The ring
/// constants `0` and `1` are exact polynomials, so they adopt the order of
/// whatever they are combined with.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
    order: usize,
}

impl Series {
    /// Series with the given coefficients, truncated at `order`.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        if order != EXACT {
            coeffs.truncate(order + 1);
        }
        let mut s = Series { coeffs, order };
        s.trim();
        s
    }

    pub fn zero_with_order(order: usize) -> Self {
        Series {
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Series::new(vec![c], order)
    }

    /// `c * t^power + O(t^{order+1})`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        if power > order {
            return Series::zero_with_order(order);
        }
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Series::new(coeffs, order)
    }

    /// Exact polynomial (no truncation).
    pub fn polynomial(coeffs: Vec<Rational>) -> Self {
        Series::new(coeffs, EXACT)
    }

    /// Truncation order, `None` for an exact polynomial.
    pub fn order(&self) -> Option<usize> {
        (self.order != EXACT).then_some(self.order)
    }

    /// Coefficient of `t^i` (zero beyond the stored terms).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Stored coefficients; trailing zeros are trimmed.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficients `c_0..=c_N` padded with zeros (just the stored ones for
    /// an exact polynomial).
    pub fn dense_coeffs(&self) -> Vec<Rational> {
        if self.order == EXACT {
            return self.coeffs.clone();
        }
        (0..=self.order).map(|i| self.coeff(i)).collect()
    }

    /// Same series truncated to a lower (or equal) order.
    pub fn truncate(&self, order: usize) -> Self {
        Series::new(self.coeffs.clone(), order.min(self.order))
    }

    pub fn with_order(&self, order: usize) -> Self {
        Series::new(self.coeffs.clone(), order)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of the stored coefficients times powers of `t`.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Series::new(coeffs, order)
    }

    pub fn sub(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Series::new(coeffs, order)
    }

    pub fn neg(&self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, k: &Rational) -> Series {
        Series::new(self.coeffs.iter().map(|c| c * k).collect(), self.order)
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order.min(other.order);
        if self.is_zero() || other.is_zero() {
            return Series::zero_with_order(order);
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = if order == EXACT { full } else { full.min(order + 1) };
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Series::new(coeffs, order)
    }

    /// Multiplicative inverse; exists iff the constant term is nonzero (and,
    /// for exact polynomials, the polynomial is constant).
    pub fn inverse(&self) -> Option<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        if self.order == EXACT {
            return (self.coeffs.len() == 1).then(|| Series::polynomial(vec![c0.recip()]));
        }
        let inv0 = c0.recip();
        let mut out = Vec::with_capacity(self.order + 1);
        out.push(inv0.clone());
        for n in 1..=self.order {
            let mut acc = Rational::zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out.push(-acc * &inv0);
        }
        Some(Series::new(out, self.order))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl Default for Series {
    fn default() -> Self {
        Series::zero_with_order(EXACT)
    }
}

impl From<Rational> for Series {
    fn from(c: Rational) -> Self {
        Series::polynomial(vec![c])
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "t")?,
                1 => write!(f, "({c})t")?,
                _ if c.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "({c})t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.order != EXACT {
            write!(f, " + O(t^{})", self.order + 1)?;
        }
        Ok(())
    }
}
