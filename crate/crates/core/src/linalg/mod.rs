//! Dense linear algebra over exact rationals, truncated power series and
//! floats.

pub mod matrix;
pub mod positivity;
pub mod scalar;
pub mod series;

use std::fmt;

pub use matrix::{leibniz_det, permutation_sign, Matrix};
pub use positivity::{
    default_max_minor, is_totally_nonnegative, is_totally_positive, spectral_radius_bound, MinorWitness,
    PositivityReport, SpectralBound,
};
pub use scalar::{Scalar, SignTest};
pub use series::{Series, DEFAULT_ORDER};

use crate::Rational;

/// Absolute tolerances for float comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Minors `>= -nonnegative` count as nonnegative.
    pub nonnegative: f64,
    /// Minors `> positive` count as positive.
    pub positive: f64,
    /// Allowed entrywise deviation of `M * M^{-1}` from `I`.
    pub inverse_check: f64,
    /// Numeric walk matrices need a spectral radius bound below `1 - divergence_margin`.
    pub divergence_margin: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    nonnegative: 1e-10,
    positive: 1e-12,
    inverse_check: 1e-12,
    divergence_margin: 1e-9,
};

/// A matrix of one of the three scalar kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarMatrix {
    Rational(Matrix<Rational>),
    Series(Matrix<Series>),
    Float(Matrix<f64>),
}

/// A single scalar of one of the three kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Rational(Rational),
    Series(Series),
    Float(f64),
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Rational(r) => write!(f, "{r}"),
            ScalarValue::Series(s) => write!(f, "{s}"),
            ScalarValue::Float(x) => write!(f, "{x:.16e}"),
        }
    }
}

impl ScalarMatrix {
    pub fn rows(&self) -> usize {
        match self {
            ScalarMatrix::Rational(m) => m.rows(),
            ScalarMatrix::Series(m) => m.rows(),
            ScalarMatrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            ScalarMatrix::Rational(m) => m.cols(),
            ScalarMatrix::Series(m) => m.cols(),
            ScalarMatrix::Float(m) => m.cols(),
        }
    }

    pub fn det(&self) -> crate::Result<ScalarValue> {
        Ok(match self {
            ScalarMatrix::Rational(m) => ScalarValue::Rational(m.det()?),
            ScalarMatrix::Series(m) => ScalarValue::Series(m.det()?),
            ScalarMatrix::Float(m) => ScalarValue::Float(m.det()?),
        })
    }

    pub fn inverse(&self) -> crate::Result<ScalarMatrix> {
        Ok(match self {
            ScalarMatrix::Rational(m) => ScalarMatrix::Rational(m.inverse()?),
            ScalarMatrix::Series(m) => ScalarMatrix::Series(m.inverse()?),
            ScalarMatrix::Float(m) => ScalarMatrix::Float(m.inverse()?),
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> crate::Result<ScalarMatrix> {
        Ok(match self {
            ScalarMatrix::Rational(m) => ScalarMatrix::Rational(m.submatrix(rows, cols)?),
            ScalarMatrix::Series(m) => ScalarMatrix::Series(m.submatrix(rows, cols)?),
            ScalarMatrix::Float(m) => ScalarMatrix::Float(m.submatrix(rows, cols)?),
        })
    }

    pub fn schur_complement(&self, block: &[usize]) -> crate::Result<ScalarMatrix> {
        Ok(match self {
            ScalarMatrix::Rational(m) => ScalarMatrix::Rational(m.schur_complement(block)?),
            ScalarMatrix::Series(m) => ScalarMatrix::Series(m.schur_complement(block)?),
            ScalarMatrix::Float(m) => ScalarMatrix::Float(m.schur_complement(block)?),
        })
    }
}
