//! Homodyne discrimination of the Bell branch from the two outer branches.
//!
//! A two-threshold window around the Bell-branch mean accepts an outcome.
//! The error `P_E` is the probability that an accepted outcome came from
//! branch 0 or 2. It is assembled from three overlap terms:
//!
//! * `O01`: prior mass of branch 0 beyond the lower threshold,
//! * `O12`: prior mass of branch 2 short of the upper threshold,
//! * `O02`: the part of those two that overshoots the whole window
//!   (branch 0 above the upper threshold, branch 2 below the lower one).
//!
//! The wrong-branch mass inside the window is then `O01 + O12 − O02`.

use std::f64::consts::SQRT_2;

use crate::error::{check_unit_interval, BudgetError, Result};
use crate::probe::{branch_densities_on, BranchDensity, ProjectionAxis, SqueezedProbe, BRANCH_PRIORS};

/// Tail probabilities below this are reported as exact zeros.
pub const TAIL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// `P(X > threshold)`
    Upper,
    /// `P(X < threshold)`
    Lower,
}

/// Half-line probability of a Gaussian, evaluated through `erfc` so that far
/// tails keep full relative accuracy.
pub fn gaussian_tail(mean: f64, variance: f64, threshold: f64, tail: Tail) -> f64 {
    debug_assert!(variance > 0.0);
    let z = (threshold - mean) / variance.sqrt();
    let z = match tail {
        Tail::Upper => z,
        Tail::Lower => -z,
    };
    let p = 0.5 * libm::erfc(z / SQRT_2);
    if p < TAIL_FLOOR {
        0.0
    } else {
        p
    }
}

/// Probability that a Gaussian lands in `[lower, upper]`.
pub fn gaussian_interval(mean: f64, variance: f64, lower: f64, upper: f64) -> f64 {
    if upper <= lower {
        return 0.0;
    }
    let sd = variance.sqrt();
    if lower >= mean {
        gaussian_tail(mean, variance, lower, Tail::Upper) - gaussian_tail(mean, variance, upper, Tail::Upper)
    } else if upper <= mean {
        gaussian_tail(mean, variance, upper, Tail::Lower) - gaussian_tail(mean, variance, lower, Tail::Lower)
    } else {
        // straddles the mean; erf stays accurate for narrow windows
        let a = (mean - lower) / (sd * SQRT_2);
        let b = (upper - mean) / (sd * SQRT_2);
        0.5 * (libm::erf(a) + libm::erf(b))
    }
}

/// Acceptance interval for the Bell branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceWindow {
    pub lower: f64,
    pub upper: f64,
}

impl AcceptanceWindow {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

/// Midpoints between adjacent branch means.
pub fn acceptance_window(densities: &[BranchDensity; 3]) -> Result<AcceptanceWindow> {
    let [m0, m1, m2] = densities.map(|d| d.mean);
    if !(m0 < m1 && m1 < m2) {
        return Err(BudgetError::CoincidentBranches);
    }
    Ok(AcceptanceWindow {
        lower: 0.5 * (m0 + m1),
        upper: 0.5 * (m1 + m2),
    })
}

/// Pairwise overlap terms, prior-weighted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlaps {
    pub o01: f64,
    pub o12: f64,
    pub o02: f64,
}

impl Overlaps {
    /// `O01 + O12 − O02`.
    pub fn combined(&self) -> f64 {
        self.o01 + self.o12 - self.o02
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationResult {
    /// Probability that an accepted outcome is from a non-Bell branch.
    pub p_error: f64,
    /// Joint probability of acceptance and a non-Bell branch.
    pub p_error_joint: f64,
    /// Probability of accepting.
    pub p_success: f64,
    pub overlaps: Overlaps,
    /// `None` in the total-loss limit, where no window exists.
    pub window: Option<AcceptanceWindow>,
}

/// Overlaps and error for given densities and window.
pub fn window_error(densities: &[BranchDensity; 3], window: &AcceptanceWindow) -> DiscriminationResult {
    let [d0, d1, d2] = densities;
    let (lo, hi) = (window.lower, window.upper);
    let o01 = d0.prior() * gaussian_tail(d0.mean, d0.variance, lo, Tail::Upper);
    let o12 = d2.prior() * gaussian_tail(d2.mean, d2.variance, hi, Tail::Lower);
    let o02 = d0.prior() * gaussian_tail(d0.mean, d0.variance, hi, Tail::Upper)
        + d2.prior() * gaussian_tail(d2.mean, d2.variance, lo, Tail::Lower);

    let wrong = d0.prior() * gaussian_interval(d0.mean, d0.variance, lo, hi)
        + d2.prior() * gaussian_interval(d2.mean, d2.variance, lo, hi);
    let right = d1.prior() * gaussian_interval(d1.mean, d1.variance, lo, hi);
    let p_success = wrong + right;
    let p_error = if p_success > 0.0 { wrong / p_success } else { 0.5 };
    DiscriminationResult {
        p_error,
        p_error_joint: wrong,
        p_success,
        overlaps: Overlaps { o01, o12, o02 },
        window: Some(*window),
    }
}

/// Result for coinciding densities: every accepted outcome is a coin flip
/// between the Bell branch and the two outer ones.
fn total_loss_result() -> DiscriminationResult {
    let outer = BRANCH_PRIORS[0] + BRANCH_PRIORS[2];
    DiscriminationResult {
        p_error: outer / (outer + BRANCH_PRIORS[1]),
        p_error_joint: 0.5 * outer,
        p_success: 0.5,
        overlaps: Overlaps {
            o01: BRANCH_PRIORS[0],
            o12: BRANCH_PRIORS[2],
            o02: 0.5 * outer,
        },
        window: None,
    }
}

/// Discrimination error on an explicit projection axis.
pub fn discrimination_error_on(probe: &SqueezedProbe, eta: f64, axis: ProjectionAxis) -> Result<DiscriminationResult> {
    check_unit_interval("eta", eta)?;
    if eta == 0.0 {
        return Ok(total_loss_result());
    }
    let densities = branch_densities_on(probe, eta, axis)?;
    match acceptance_window(&densities) {
        Ok(window) => Ok(window_error(&densities, &window)),
        Err(BudgetError::CoincidentBranches) if probe.beta == 0.0 => Ok(total_loss_result()),
        Err(e) => Err(e),
    }
}

/// Discrimination error with the midpoint window on `λ = (π + θ)/2`.
pub fn discrimination_error(probe: &SqueezedProbe, eta: f64) -> Result<DiscriminationResult> {
    discrimination_error_on(probe, eta, ProjectionAxis::Bisector)
}
