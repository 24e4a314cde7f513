//! Brute-force checks that share no formulas with the closed forms they
//! verify: Monte Carlo simulation of the homodyne decision, direct 2-D
//! quadrature of the Wigner overlap, and enumeration of all flip patterns of
//! a repetition code.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::dephasing::GammaConvention;
use crate::discrimination::AcceptanceWindow;
use crate::error::{check_unit_interval, BudgetError, Result};
use crate::probe::{ProjectionAxis, SqueezedProbe};
use crate::quadrature::{integrate_2d, QuadOptions};

/// Samples drawn from one counter stream.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: u64,
    pub quad_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 0x5EED_2014,
            samples: 10_000_000,
            quad_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_error: f64,
    pub p_success: f64,
    /// Binomial standard error of `p_error`, floored at one count.
    pub std_err: f64,
    pub accepted: u64,
    pub wrong: u64,
}

impl McEstimate {
    /// Whether `value` lies within `k` standard errors.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.p_error - value).abs() <= k * self.std_err
    }
}

/// Simulates the homodyne decision directly: pick a branch with its prior,
/// draw the lossy outcome, accept if it falls in the window.
///
/// The outcome is drawn from the phase-space picture rather than from the
/// projected density: the branch's squeeze ellipse is rotated by `kθ`, its
/// two principal quadratures are sampled independently, loss mixes in a
/// vacuum sample, and the result is projected on `λ`.
pub fn mc_discrimination(
    probe: &SqueezedProbe,
    eta: f64,
    axis: ProjectionAxis,
    window: &AcceptanceWindow,
    config: &OracleConfig,
) -> Result<McEstimate> {
    check_unit_interval("eta", eta)?;
    let lambda = axis.angle(probe.theta);
    let chunks = config.samples.div_ceil(CHUNK);
    // principal standard deviations in x_λ units: vacuum 1/√2
    let sd_anti = (0.5f64).sqrt() * probe.r.exp();
    let sd_sq = (0.5f64).sqrt() * (-probe.r).exp();
    let sd_vac = (0.5f64).sqrt();
    let (sqrt_eta, sqrt_loss) = (eta.sqrt(), (1.0 - eta).sqrt());
    let sq_axis = probe.phi / 2.0;

    let (accepted, wrong) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(chunk);
            let n = CHUNK.min(config.samples - chunk * CHUNK);
            let (mut acc, mut bad) = (0u64, 0u64);
            for _ in 0..n {
                let u: f64 = rng.random();
                let k = if u < 0.25 {
                    0
                } else if u < 0.75 {
                    1
                } else {
                    2
                };
                let rot = k as f64 * probe.theta;
                // phase-space point (in x_λ units) of the input mode
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                let v: f64 = rng.sample(StandardNormal);
                let sq_dir = sq_axis + rot;
                // squeezed axis direction and the orthogonal, anti-squeezed one
                let (s_sin, s_cos) = sq_dir.sin_cos();
                let centre = (2f64.sqrt() * probe.beta * rot.cos(), 2f64.sqrt() * probe.beta * rot.sin());
                let px = centre.0 + sd_sq * b * s_cos - sd_anti * a * s_sin;
                let py = centre.1 + sd_sq * b * s_sin + sd_anti * a * s_cos;
                let (l_sin, l_cos) = lambda.sin_cos();
                let x = sqrt_eta * (px * l_cos + py * l_sin) + sqrt_loss * sd_vac * v;
                if window.contains(x) {
                    acc += 1;
                    if k != 1 {
                        bad += 1;
                    }
                }
            }
            (acc, bad)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));

    let p_error = if accepted > 0 { wrong as f64 / accepted as f64 } else { 0.0 };
    let n = accepted.max(1) as f64;
    let var = (p_error * (1.0 - p_error)).max(1.0 / n);
    Ok(McEstimate {
        p_error,
        p_success: accepted as f64 / config.samples as f64,
        std_err: (var / n).sqrt(),
        accepted,
        wrong,
    })
}

/// Curvatures `(a, b)` of the lossy Wigner exponent `−2(a dx² + b dp²)`,
/// in phase-space units where the vacuum variance is 1/4.
fn wigner_curvatures(r: f64, tau: f64) -> (f64, f64) {
    let e2 = (-2.0 * r).exp();
    (e2 / (tau + (1.0 - tau) * e2), 1.0 / (tau * e2 + (1.0 - tau)))
}

/// Change of the Wigner exponent between an offset `d` from the centre and
/// `d + u`, expanded so that large offsets do not cancel.
fn exponent_change(u: (f64, f64), d: (f64, f64), (a, b): (f64, f64)) -> f64 {
    -2.0 * (a * u.0 * (u.0 + 2.0 * d.0) + b * u.1 * (u.1 + 2.0 * d.1))
}

/// `γ` by numerical integration of `W(x, p) W(x cos θ − p sin θ, x sin θ + p cos θ)`
/// over a ±10σ box, normalized by the same integral at `θ = 0`.
///
/// The product can be far below any absolute tolerance, so each integrand
/// is divided by its value at the box centre and the scale restored in logs.
pub fn quad_gamma(probe: &SqueezedProbe, tau: f64, convention: GammaConvention, config: &OracleConfig) -> Result<f64> {
    check_unit_interval("tau", tau)?;
    let (r, beta, theta) = (probe.r, probe.beta, probe.theta);
    let opts = QuadOptions {
        abs_tol: config.quad_tol,
        rel_tol: 1e-12,
        ..QuadOptions::default()
    };
    let sx = (0.25 * (tau * (2.0 * r).exp() + 1.0 - tau)).sqrt();
    let sp = (0.25 * (tau * (-2.0 * r).exp() + 1.0 - tau)).sqrt();
    let curv = wigner_curvatures(r, tau);
    let x0 = tau.sqrt() * beta;

    // returns ln of the integral
    let ln_overlap = |angle: f64| -> Result<f64> {
        let (s, c) = angle.sin_cos();
        let rotate = |v: (f64, f64)| (v.0 * c - v.1 * s, v.0 * s + v.1 * c);
        // the rotated copy is centred at R(-θ)·(√τ β, 0)
        let cx = 0.5 * x0 * (1.0 + c);
        let cp = -0.5 * x0 * s;
        let d1 = (cx - x0, cp);
        let rc = rotate((cx, cp));
        let d2 = (rc.0 - x0, rc.1);
        let ln_centre = -2.0 * (curv.0 * (d1.0 * d1.0 + d2.0 * d2.0) + curv.1 * (d1.1 * d1.1 + d2.1 * d2.1));

        let hx = 10.0 * sx + 0.5 * x0 * (1.0 - c);
        let hp = 10.0 * sp.max(sx * s.abs()) + 0.5 * x0 * s.abs();
        let f = |x: f64, p: f64| {
            let u = (x - cx, p - cp);
            (exponent_change(u, d1, curv) + exponent_change(rotate(u), d2, curv)).exp()
        };
        let value = integrate_2d(f, (cx - hx, cx + hx), (cp - hp, cp + hp), opts)?.value;
        Ok(value.ln() + ln_centre)
    };
    let ratio = (ln_overlap(theta)? - ln_overlap(0.0)?).exp();
    Ok(convention.apply(ratio))
}

/// Logical flip probability by summing every flip pattern with a majority
/// of flipped qubits.
pub fn enumerate_code(p_flip: f64, n: usize) -> Result<f64> {
    if n > 15 {
        return Err(BudgetError::CodeTooLarge(n));
    }
    if n.is_multiple_of(2) {
        return Err(BudgetError::EvenCodeLength(n));
    }
    let t = (n - 1) / 2;
    let mut total = 0.0;
    for pattern in 0u32..(1 << n) {
        let flips = pattern.count_ones() as usize;
        if flips > t {
            let mut prob = 1.0;
            for bit in 0..n {
                prob *= if pattern >> bit & 1 == 1 { p_flip } else { 1.0 - p_flip };
            }
            total += prob;
        }
    }
    Ok(total)
}
