//! Total nonnegativity / positivity by minor enumeration, and a
//! Collatz–Wielandt bound on the spectral radius.

use itertools::Itertools;
use rayon::prelude::*;

use super::matrix::Matrix;
use super::scalar::SignTest;
use crate::error::{Error, Result};

/// Largest minor size checked when the caller does not say otherwise.
pub const DEFAULT_MAX_MINOR: usize = 5;

/// A minor that violates the requested sign condition.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorWitness<T> {
    /// Row indices (0-based, increasing).
    pub rows: Vec<usize>,
    /// Column indices (0-based, increasing).
    pub cols: Vec<usize>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport<T> {
    pub holds: bool,
    /// First failing minor in (size, rows, cols) lexicographic order.
    pub witness: Option<MinorWitness<T>>,
    pub minors_checked: usize,
}

/// `min(rows, cols, 5)`.
pub fn default_max_minor<T>(m: &Matrix<T>) -> usize {
    m.rows().min(m.cols()).min(DEFAULT_MAX_MINOR)
}

/// Checks that every minor of size at most `max_minor` is nonnegative.
pub fn is_totally_nonnegative<T: SignTest>(m: &Matrix<T>, max_minor: usize) -> PositivityReport<T> {
    check_minors(m, max_minor, T::is_nonnegative)
}

/// Checks that every minor of size at most `max_minor` is strictly positive.
pub fn is_totally_positive<T: SignTest>(m: &Matrix<T>, max_minor: usize) -> PositivityReport<T> {
    check_minors(m, max_minor, T::is_positive)
}

fn check_minors<T: SignTest>(m: &Matrix<T>, max_minor: usize, accept: fn(&T) -> bool) -> PositivityReport<T> {
    let top = max_minor.min(m.rows()).min(m.cols());
    let mut checked = 0;
    for size in 1..=top {
        let row_sets: Vec<Vec<usize>> = (0..m.rows()).combinations(size).collect();
        let col_sets: Vec<Vec<usize>> = (0..m.cols()).combinations(size).collect();
        // independent minors are evaluated in parallel; the first failure in
        // the fixed enumeration order wins
        let failure = row_sets.par_iter().find_map_first(|rows| {
            col_sets.iter().find_map(|cols| {
                let value = m
                    .submatrix(rows, cols)
                    .expect("indices in range")
                    .det()
                    .expect("square");
                (!accept(&value)).then(|| MinorWitness {
                    rows: rows.clone(),
                    cols: cols.clone(),
                    value,
                })
            })
        });
        if let Some(w) = failure {
            let done = row_sets.iter().position(|r| *r == w.rows).expect("present") * col_sets.len()
                + col_sets.iter().position(|c| *c == w.cols).expect("present")
                + 1;
            return PositivityReport {
                holds: false,
                witness: Some(w),
                minors_checked: checked + done,
            };
        }
        checked += row_sets.len() * col_sets.len();
    }
    PositivityReport {
        holds: true,
        witness: None,
        minors_checked: checked,
    }
}

/// Upper estimate of the spectral radius of a nonnegative matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBound {
    /// Smallest Collatz–Wielandt bound `max_i (|M| v)_i / v_i` over the
    /// final power iterate and the resolvent vector.
    pub bound: f64,
    /// Collatz–Wielandt bound at the final power iterate alone.
    pub power_bound: f64,
    /// Collatz–Wielandt bound at `v = (I - |M|)^{-1} 1`, when that vector
    /// exists and is positive.
    pub resolvent_bound: Option<f64>,
    /// Rayleigh quotients of the last two iterates.
    pub rayleigh: [f64; 2],
    pub iterations: usize,
}

pub const POWER_ITERATIONS: usize = 200;

/// Power iteration on `|M| + I` (same Perron vector as `|M|`, and iterates
/// stay strictly positive), reporting the Collatz–Wielandt upper bound for
/// `|M|`.
///
/// Power iteration converges slowly when the two leading eigenvalues are
/// close, as for long path-like chains. Every positive vector gives a valid
/// bound, so the bound at `(I - |M|)^{-1} 1` is also taken: when it is
/// positive, `|M| v = v - 1` and the bound is `1 - 1 / max v < 1`.
pub fn spectral_radius_bound(m: &Matrix<f64>) -> Result<SpectralBound> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(SpectralBound {
            bound: 0.0,
            power_bound: 0.0,
            resolvent_bound: None,
            rayleigh: [0.0; 2],
            iterations: 0,
        });
    }
    let abs = m.map(|x| x.abs());
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| abs.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    };
    let rayleigh = |v: &[f64], mv: &[f64]| -> f64 {
        let num: f64 = v.iter().zip(mv).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().map(|a| a * a).sum();
        num / den
    };
    let mut v = vec![1.0; n];
    let mut quotients = [0.0; 2];
    for _ in 0..POWER_ITERATIONS {
        let mv = apply(&v);
        quotients = [quotients[1], rayleigh(&v, &mv)];
        let next: Vec<f64> = mv.iter().zip(&v).map(|(a, b)| a + b).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        v = next.into_iter().map(|x| x / norm).collect();
    }
    let collatz = |v: &[f64]| apply(v).iter().zip(v).map(|(a, b)| a / b).fold(0.0, f64::max);
    let power_bound = collatz(&v);
    let resolvent_bound = Matrix::<f64>::identity(n)
        .minus(&abs)
        .and_then(|i_minus| i_minus.solve(&Matrix::from_fn(n, 1, |_, _| 1.0)))
        .ok()
        .map(|x| (0..n).map(|i| *x.get(i, 0)).collect::<Vec<f64>>())
        .filter(|x| x.iter().all(|&a| a.is_finite() && a > 0.0))
        .map(|x| collatz(&x));
    let bound = resolvent_bound.map_or(power_bound, |r| r.min(power_bound));
    Ok(SpectralBound {
        bound,
        power_bound,
        resolvent_bound,
        rayleigh: quotients,
        iterations: POWER_ITERATIONS,
    })
}
