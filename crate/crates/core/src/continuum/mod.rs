//! Hitting kernels of reflected Brownian motion in the quadrant and in the
//! strip, their closed-form minors and non-intersection probabilities, and a
//! random-walk discretization of the quadrant.
//!
//! Quadrant: motion in `x, y ≥ 0`, reflected at the `x` axis and stopped on
//! the `y` axis. Started at `(x, 0)` it stops at `(0, y)` with density
//! `K(x, y) = 2x / (π (x² + y²))`.
//!
//! Strip: motion in `0 ≤ y ≤ 1`, reflected at `y = 0` and stopped at
//! `y = 1`. Started at `(x₀, 0)` it stops at `(x₀ + x, 1)` with density
//! `1 / (2 cosh(πx/2))`.

pub mod discretize;
pub mod quadrature;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{is_totally_positive, Matrix, MinorWitness};

pub use discretize::{
    discretization_discrepancy, hitting_row_f64, quadrant_discretization, BandedMatrix, DiscretizationReport,
    QuadrantGrid,
};
pub use quadrature::{integrate, integrate_to_infinity, Quadrature};

/// Absolute target of the adaptive quadratures below.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

const DILOG_TERMS: usize = 64;

/// `2x / (π (x² + y²))` for `x > 0`, `y ≥ 0`.
pub fn quadrant_kernel(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y >= 0.0) {
        return Err(Error::DomainError(format!(
            "quadrant kernel needs x > 0 and y >= 0, got ({x}, {y})"
        )));
    }
    Ok(2.0 * x / (PI * (x * x + y * y)))
}

/// `1 / (2 cosh(πx/2))`.
pub fn strip_kernel(x: f64) -> f64 {
    0.5 / (0.5 * PI * x).cosh()
}

fn check_pair(name: &str, lo: f64, hi: f64, strict_lo: bool) -> Result<()> {
    let lo_ok = if strict_lo { lo > 0.0 } else { lo >= 0.0 };
    if !lo_ok || !hi.is_finite() {
        return Err(Error::DomainError(format!(
            "{name} = ({lo}, {hi}) outside the quadrant"
        )));
    }
    if lo > hi {
        return Err(Error::OrderingError(format!("{name}1 = {lo} exceeds {name}2 = {hi}")));
    }
    Ok(())
}

fn check_quadruple(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<()> {
    check_pair("x", x1, x2, true)?;
    check_pair("y", y1, y2, false)
}

/// Closed form of `det [[K(x₁,y₁), K(x₁,y₂)], [K(x₂,y₁), K(x₂,y₂)]]`
/// for `0 < x₁ ≤ x₂`, `0 ≤ y₁ ≤ y₂`.
pub fn quadrant_det2(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<f64> {
    check_quadruple(x1, x2, y1, y2)?;
    let num = 4.0 * x1 * x2 * (x2 * x2 - x1 * x1) * (y2 * y2 - y1 * y1);
    let den = PI
        * PI
        * [x1, x2]
            .iter()
            .flat_map(|x| [y1, y2].map(|y| x * x + y * y))
            .product::<f64>();
    Ok(num / den)
}

/// `(x₂² - x₁²)(y₂² - y₁²) / ((x₁² + y₂²)(x₂² + y₁²))`.
///
/// Equals `det / (K(x₁,y₁) K(x₂,y₂))`: the probability that the trajectory
/// from `x₂` avoids the loop-erased part of the one from `x₁`, given that
/// they stop at `y₁` and `y₂` respectively.
pub fn quadrant_conditional_nonintersection(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<f64> {
    check_quadruple(x1, x2, y1, y2)?;
    let num = (x2 * x2 - x1 * x1) * (y2 * y2 - y1 * y1);
    Ok(num / ((x1 * x1 + y2 * y2) * (x2 * x2 + y1 * y1)))
}

/// The same event conditioned only on the unordered stopping set
/// `{y₁, y₂}`: `det / permanent` of the kernel block, i.e.
/// `(x₂² - x₁²)(y₂² - y₁²) / ((x₁² + y₂²)(x₂² + y₁²) + (x₁² + y₁²)(x₂² + y₂²))`.
pub fn quadrant_unordered_nonintersection(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<f64> {
    check_quadruple(x1, x2, y1, y2)?;
    let (xa, xb, ya, yb) = (x1 * x1, x2 * x2, y1 * y1, y2 * y2);
    Ok((xb - xa) * (yb - ya) / ((xa + yb) * (xb + ya) + (xa + ya) * (xb + yb)))
}

/// Unconditional non-intersection probability for starting points in ratio
/// `alpha = x₂ / x₁ > 1`:
/// `-(4/π²) (Li₂(-α) + Li₂(1-α) + ln α ln(1+α) + π²/12)`.
pub fn quadrant_nonintersection(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::DomainError(format!("alpha must exceed 1, got {alpha}")));
    }
    let s = dilog(-alpha)? + dilog(1.0 - alpha)? + alpha.ln() * alpha.ln_1p() + PI * PI / 12.0;
    Ok(-4.0 / (PI * PI) * s)
}

/// `∫₀^∞ ∫_{y₁}^∞ det2(1, α, y₁, y₂) dy₂ dy₁` by nested adaptive quadrature.
pub fn quadrant_nonintersection_quadrature(alpha: f64) -> Result<Quadrature> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::DomainError(format!("alpha must exceed 1, got {alpha}")));
    }
    let mut inner_error = 0.0f64;
    let mut outer = integrate_to_infinity(
        |y1| {
            let q = integrate_to_infinity(
                |y2| quadrant_det2(1.0, alpha, y1, y2).unwrap_or(f64::NAN),
                y1,
                0.01 * QUADRATURE_TOLERANCE,
            );
            inner_error = inner_error.max(q.error);
            q.value
        },
        0.0,
        QUADRATURE_TOLERANCE,
    );
    outer.error += inner_error;
    Ok(outer)
}

/// `∑_{n ≤ 64} tⁿ / n²`, accurate for `|t| ≤ 1/2`.
fn dilog_series(t: f64) -> f64 {
    let mut power = 1.0;
    let mut sum = 0.0;
    for n in 1..=DILOG_TERMS {
        power *= t;
        sum += power / (n * n) as f64;
    }
    sum
}

/// Dilogarithm `Li₂(t) = ∑ tⁿ / n²` for `t ≤ 1`. Arguments are moved into
/// `|t| ≤ 1/2` by `Li₂(t) = π²/6 - ln t ln(1-t) - Li₂(1-t)`,
/// `Li₂(t) = -Li₂(t/(t-1)) - ½ ln²(1-t)` and
/// `Li₂(t) = -π²/6 - ½ ln²(-t) - Li₂(1/t)`.
pub fn dilog(t: f64) -> Result<f64> {
    if t.is_nan() || t > 1.0 {
        return Err(Error::DomainError(format!("dilogarithm needs t <= 1, got {t}")));
    }
    Ok(dilog_reduced(t))
}

fn dilog_reduced(t: f64) -> f64 {
    if t == 1.0 {
        PI * PI / 6.0
    } else if t.abs() <= 0.5 {
        dilog_series(t)
    } else if t > 0.5 {
        PI * PI / 6.0 - t.ln() * (-t).ln_1p() - dilog_series(1.0 - t)
    } else if t >= -1.0 {
        let l = (-t).ln_1p();
        -dilog_reduced(t / (t - 1.0)) - 0.5 * l * l
    } else {
        let l = (-t).ln();
        -PI * PI / 6.0 - 0.5 * l * l - dilog_reduced(1.0 / t)
    }
}

/// Which hitting kernel to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `K(x, y) = 2x / (π (x² + y²))`.
    Quadrant,
    /// `K(x, y) = 1 / (2 cosh(π (x - y) / 2))`.
    Strip,
}

impl Kernel {
    pub fn eval(self, x: f64, y: f64) -> Result<f64> {
        match self {
            Kernel::Quadrant => quadrant_kernel(x, y),
            Kernel::Strip => Ok(strip_kernel(x - y)),
        }
    }
}

/// Kernel values `K(xᵢ, yⱼ)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSample {
    pub kernel: Kernel,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Matrix<f64>,
}

impl KernelSample {
    pub fn new(kernel: Kernel, xs: &[f64], ys: &[f64]) -> Result<Self> {
        let mut rows = Vec::with_capacity(xs.len());
        for &x in xs {
            rows.push(ys.iter().map(|&y| kernel.eval(x, y)).collect::<Result<Vec<f64>>>()?);
        }
        let values = if rows.is_empty() {
            Matrix::zeros(0, ys.len())
        } else {
            Matrix::from_rows(rows)?
        };
        Ok(KernelSample {
            kernel,
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            values,
        })
    }

    /// Both grids strictly increasing.
    pub fn is_monotone(&self) -> bool {
        let inc = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        inc(&self.xs) && inc(&self.ys)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTpReport {
    pub holds: bool,
    pub witness: Option<MinorWitness<f64>>,
    pub minors_checked: usize,
    pub sample: KernelSample,
}

/// Checks that every minor of size at most `max_minor` of the sampled
/// kernel exceeds the positivity tolerance. Grids are used in the order
/// given, so a shuffled grid exhibits a negative minor as the witness.
pub fn kernel_tp_check(kernel: Kernel, xs: &[f64], ys: &[f64], max_minor: usize) -> Result<KernelTpReport> {
    let sample = KernelSample::new(kernel, xs, ys)?;
    let report = is_totally_positive(&sample.values, max_minor);
    Ok(KernelTpReport {
        holds: report.holds,
        witness: report.witness,
        minors_checked: report.minors_checked,
        sample,
    })
}
