//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use std::f64::consts::FRAC_PI_2;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the per-panel `|K15 - G7|` estimates.
    pub error: f64,
    pub panels: usize,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`, bisecting panels until each panel's error
/// estimate is within its share of `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Quadrature {
    let mut out = Quadrature {
        value: 0.0,
        error: 0.0,
        panels: 0,
    };
    let (value, error) = gk15(&mut f, a, b);
    refine(&mut f, a, b, value, error, tol, 0, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    tol: f64,
    depth: usize,
    out: &mut Quadrature,
) {
    if error <= tol || depth >= MAX_DEPTH {
        out.value += value;
        out.error += error;
        out.panels += 1;
        return;
    }
    let mid = 0.5 * (a + b);
    let (lv, le) = gk15(f, a, mid);
    let (rv, re) = gk15(f, mid, b);
    refine(f, a, mid, lv, le, 0.5 * tol, depth + 1, out);
    refine(f, mid, b, rv, re, 0.5 * tol, depth + 1, out);
}

/// `∫_lo^∞ f(y) dy` through `y = lo + tan(πu/2)`, `u ∈ [0, 1)`.
pub fn integrate_to_infinity(mut f: impl FnMut(f64) -> f64, lo: f64, tol: f64) -> Quadrature {
    integrate(
        |u| {
            let t = (FRAC_PI_2 * u).tan();
            let c = (FRAC_PI_2 * u).cos();
            let v = f(lo + t);
            if v == 0.0 {
                0.0
            } else {
                v * FRAC_PI_2 / (c * c)
            }
        },
        0.0,
        1.0,
        tol,
    )
}
