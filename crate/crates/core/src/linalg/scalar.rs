//! The ring interface shared by the three scalar kinds.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{leibniz_det, Matrix};
use super::series::Series;
use super::TOLERANCES;
use crate::error::Error;
use crate::Rational;

/// Commutative ring operations plus the per-kind pieces the generic matrix
/// algorithms need: pivot selection, unit inversion and a determinant
/// strategy.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;

    /// Inverse in the ring, if this element is a unit.
    fn invert(&self) -> Option<Self>;

    /// Pivot suitability: `None` if the element cannot serve as a pivot,
    /// otherwise a score where larger is better.
    fn pivot_score(&self) -> Option<f64>;

    /// Error reported when elimination finds no usable pivot.
    fn singular_error() -> Error {
        Error::Singular
    }

    /// Determinant of a square matrix.
    fn determinant(m: &Matrix<Self>) -> Self;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn invert(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn pivot_score(&self) -> Option<f64> {
        (!Zero::is_zero(self)).then_some(1.0)
    }
    fn determinant(m: &Matrix<Self>) -> Self {
        bareiss_rational_det(m)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn invert(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn pivot_score(&self) -> Option<f64> {
        (*self != 0.0).then(|| self.abs())
    }
    fn determinant(m: &Matrix<Self>) -> Self {
        float_det(m)
    }
}

impl Scalar for Series {
    fn zero() -> Self {
        Series::default()
    }
    fn one() -> Self {
        Series::from(<Rational as One>::one())
    }
    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn invert(&self) -> Option<Self> {
        self.inverse()
    }
    fn pivot_score(&self) -> Option<f64> {
        (!Zero::is_zero(&self.constant_term())).then_some(1.0)
    }
    fn singular_error() -> Error {
        Error::SeriesConstantTermSingular
    }
    fn determinant(m: &Matrix<Self>) -> Self {
        series_det(m)
    }
}

/// Fraction-free (Bareiss) determinant of an integer matrix given as rows.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // exact by Sylvester's identity
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Clears the denominators row by row and runs [`bareiss_det`].
fn bareiss_rational_det(m: &Matrix<Rational>) -> Rational {
    let n = m.rows();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let lcm = m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(
            m.row(i)
                .iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect::<Vec<_>>(),
        );
        scale *= lcm;
    }
    Rational::new(bareiss_det(rows), scale)
}

/// LU with partial pivoting.
fn float_det(m: &Matrix<f64>) -> f64 {
    let n = m.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
            .expect("non-empty range");
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k + 1..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    det
}

/// Division-free expansion for small matrices; elimination on unit pivots
/// (nonzero constant term) otherwise, expanding along a column whenever no
/// unit pivot is available.
fn series_det(m: &Matrix<Series>) -> Series {
    let n = m.rows();
    if n <= 4 {
        return leibniz_det(m);
    }
    let a: Vec<Vec<Series>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    series_det_rows(a)
}

fn series_det_rows(mut a: Vec<Vec<Series>>) -> Series {
    let n = a.len();
    if n <= 4 {
        let flat = Matrix::from_rows(a).expect("square");
        return leibniz_det(&flat);
    }
    let Some(p) = (0..n).find(|&i| !Zero::is_zero(&a[i][0].constant_term())) else {
        // Laplace expansion along column 0
        let mut acc = <Series as Scalar>::zero();
        for i in 0..n {
            if a[i][0].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Series>> = (0..n).filter(|&r| r != i).map(|r| a[r][1..].to_vec()).collect();
            let term = a[i][0].mul(&series_det_rows(minor));
            acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        return acc;
    };
    let mut negate = false;
    if p != 0 {
        a.swap(0, p);
        negate = true;
    }
    let pivot = a[0][0].clone();
    let inv = pivot.inverse().expect("unit pivot");
    let mut rest = Vec::with_capacity(n - 1);
    for i in 1..n {
        let f = a[i][0].mul(&inv);
        let row: Vec<Series> = (1..n)
            .map(|j| {
                if f.is_zero() {
                    a[i][j].clone()
                } else {
                    a[i][j].sub(&f.mul(&a[0][j]))
                }
            })
            .collect();
        rest.push(row);
    }
    let d = pivot.mul(&series_det_rows(rest));
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Sign tests used by the total-positivity checks.
pub trait SignTest: Scalar {
    /// `>= 0` (floats: `>= -1e-10`).
    fn is_nonnegative(&self) -> bool;
    /// `> 0` (floats: `> 1e-12`).
    fn is_positive(&self) -> bool;
}

impl SignTest for Rational {
    fn is_nonnegative(&self) -> bool {
        !Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

impl SignTest for f64 {
    fn is_nonnegative(&self) -> bool {
        *self >= -TOLERANCES.nonnegative
    }
    fn is_positive(&self) -> bool {
        *self > TOLERANCES.positive
    }
}
