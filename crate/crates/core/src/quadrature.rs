//! Adaptive Gauss–Kronrod (7/15) quadrature in one and two dimensions.

use crate::error::{BudgetError, Result};

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
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: estimate and error against the embedded
/// 7-point Gauss rule.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any panel.
    pub max_depth: usize,
    /// Number of equal panels to start from.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_depth: 40,
            initial_panels: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Integrates `f` over `[a, b]`, bisecting panels whose error exceeds their
/// share of the tolerance.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    let mut counted = |x: f64| f(x);
    let n0 = opts.initial_panels.max(1);
    let width = b - a;
    let mut stack: Vec<(f64, f64, usize)> = (0..n0)
        .map(|i| {
            (
                a + width * i as f64 / n0 as f64,
                a + width * (i + 1) as f64 / n0 as f64,
                0,
            )
        })
        .collect();

    // a rough total first, so the relative tolerance has a scale
    let mut scale = 0.0;
    for &(lo, hi, _) in &stack {
        scale += gk15(&mut counted, lo, hi).0.abs();
    }
    // asking for less than a few ulps of the total only chases rounding
    let tol = opts.abs_tol.max(opts.rel_tol * scale).max(64.0 * f64::EPSILON * scale);

    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 15 * n0;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(&mut counted, lo, hi);
        evaluations += 15;
        let share = tol * (hi - lo) / width;
        if e <= share {
            value += v;
            error += e;
        } else if depth >= opts.max_depth {
            return Err(BudgetError::QuadratureFailed {
                tol,
                max_depth: opts.max_depth,
                err: e,
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(QuadResult {
        value,
        error,
        evaluations,
    })
}

/// Integrates `f(x, y)` over a rectangle as an iterated integral; the inner
/// integrals run at a tolerance tighter than the outer one.
pub fn integrate_2d<F>(f: F, x: (f64, f64), y: (f64, f64), opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
{
    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol / (x.1 - x.0).abs().max(1.0) * 1e-1,
        rel_tol: opts.rel_tol * 1e-1,
        ..opts
    };
    let mut inner_err: Option<BudgetError> = None;
    let mut inner_evals = 0;
    let outer = integrate(
        |xv| match integrate(|yv| f(xv, yv), y.0, y.1, inner_opts) {
            Ok(r) => {
                inner_evals += r.evaluations;
                r.value
            }
            Err(e) => {
                inner_err.get_or_insert(e);
                0.0
            }
        },
        x.0,
        x.1,
        opts,
    );
    // an inner failure is the root cause of any outer one
    if let Some(e) = inner_err {
        return Err(e);
    }
    let outer = outer?;
    Ok(QuadResult {
        evaluations: inner_evals,
        ..outer
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((r.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn narrow_gaussian_in_wide_box() {
        let s = 0.01;
        let f = |x: f64| (-0.5 * (x - 0.3) * (x - 0.3) / (s * s)).exp() / (s * (2.0 * PI).sqrt());
        let r = integrate(f, -10.0, 10.0, QuadOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn separable_2d_gaussian() {
        let f = |x: f64, y: f64| (-(x * x) - 4.0 * y * y).exp();
        let r = integrate_2d(f, (-8.0, 8.0), (-5.0, 5.0), QuadOptions::default()).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn depth_limit_is_reported() {
        let opts = QuadOptions {
            max_depth: 2,
            initial_panels: 1,
            ..Default::default()
        };
        let err = integrate(|x: f64| if x > 0.3 { 1.0 } else { 0.0 }, -1.0, 1.0, opts).unwrap_err();
        assert!(matches!(err, BudgetError::QuadratureFailed { .. }));
    }
}
