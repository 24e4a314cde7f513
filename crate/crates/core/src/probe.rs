//! Phase-squeezed probe light, its three conditional branches after the two
//! atom interactions, and homodyne quadrature statistics under photon loss.
//!
//! Quadratures follow `x_λ = (a e^{-iλ} + a† e^{iλ}) / √2`, so the vacuum
//! variance is 1/2 and a coherent amplitude `β e^{iψ}` has mean
//! `√2 β cos(ψ − λ)`. Loss with transmittance `η` scales the mean by `√η` and
//! mixes the variance towards the vacuum value.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{check_unit_interval, BudgetError, Result};

/// Squeezing phase of phase-squeezed light.
pub const PHASE_SQUEEZING: f64 = PI;

/// Prior weights of the branches with 0, 1 and 2 atoms in `|1⟩`.
pub const BRANCH_PRIORS: [f64; 3] = [0.25, 0.5, 0.25];

/// How the pre-adjustment coherent amplitude `α` is reduced to keep the mean
/// photon number fixed when squeezing is added.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaConvention {
    /// `β = √(α² − sinh² r)`, i.e. `n̄ = α²` counts the squeezing photons.
    #[default]
    SinhSquared,
    /// `β = √(α² − sinh r)`. Kept only to compare against that formula.
    SinhLiteral,
}

impl BetaConvention {
    pub fn squeeze_photons(self, r: f64) -> f64 {
        match self {
            BetaConvention::SinhSquared => r.sinh().powi(2),
            BetaConvention::SinhLiteral => r.sinh(),
        }
    }
}

/// Squeezed coherent probe `|r, β⟩` with squeezing phase π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedProbe {
    /// Mean photon number `β² + sinh² r`.
    pub n_bar: f64,
    /// Squeezing amplitude; 0 is a coherent state.
    pub r: f64,
    /// Squeezing phase, fixed to π.
    pub phi: f64,
    /// Conditional phase shift per interaction.
    pub theta: f64,
    /// Coherent amplitude after photon-number adjustment.
    pub beta: f64,
}

fn check_shape(r: f64, theta: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(BudgetError::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeezing must be finite and non-negative",
        });
    }
    if !(theta > 0.0 && theta < FRAC_PI_4) {
        return Err(BudgetError::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "phase shift must lie in (0, pi/4)",
        });
    }
    Ok(())
}

impl SqueezedProbe {
    /// Builds a probe with total mean photon number `n_bar`, spending
    /// `sinh² r` of it on squeezing.
    pub fn new(n_bar: f64, r: f64, theta: f64) -> Result<Self> {
        if !(n_bar > 0.0 && n_bar.is_finite()) {
            return Err(BudgetError::InvalidParameter {
                name: "n_bar",
                value: n_bar,
                reason: "mean photon number must be positive",
            });
        }
        check_shape(r, theta)?;
        let squeeze_photons = r.sinh().powi(2);
        if n_bar < squeeze_photons {
            return Err(BudgetError::PhotonBudgetExceeded {
                n_bar,
                squeeze_photons,
            });
        }
        Ok(Self {
            n_bar,
            r,
            phi: PHASE_SQUEEZING,
            theta,
            beta: (n_bar - squeeze_photons).sqrt(),
        })
    }

    /// Builds a probe from the amplitude `alpha` the coherent probe would
    /// have had at the same photon number.
    pub fn from_alpha(alpha: f64, r: f64, theta: f64, convention: BetaConvention) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(BudgetError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "amplitude must be finite and non-negative",
            });
        }
        check_shape(r, theta)?;
        let alpha_sq = alpha * alpha;
        let squeeze_photons = convention.squeeze_photons(r);
        if alpha_sq < squeeze_photons {
            return Err(BudgetError::Infeasible {
                alpha_sq,
                squeeze_photons,
            });
        }
        let beta = (alpha_sq - squeeze_photons).sqrt();
        Ok(Self {
            n_bar: beta * beta + r.sinh().powi(2),
            r,
            phi: PHASE_SQUEEZING,
            theta,
            beta,
        })
    }

    pub fn is_coherent(&self) -> bool {
        self.r == 0.0
    }

    /// The three conditional branches in order k = 0, 1, 2.
    pub fn branches(&self) -> [Branch; 3] {
        [0, 1, 2].map(|k| Branch::new(k, self.theta))
    }
}

/// One term of the probe state after both interactions: `k` atoms in `|1⟩`
/// rotate the probe by `k θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub k: usize,
    pub prior: f64,
    pub phase: f64,
}

impl Branch {
    pub fn new(k: usize, theta: f64) -> Self {
        assert!(k < 3, "branch index must be 0, 1 or 2");
        Self {
            k,
            prior: BRANCH_PRIORS[k],
            phase: k as f64 * theta,
        }
    }

    /// The Bell branch `(|01⟩ + |10⟩)/√2`.
    pub fn is_bell(&self) -> bool {
        self.k == 1
    }
}

/// Mean and variance of one quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStat {
    pub lambda: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Homodyne projection angle used to isolate the Bell branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProjectionAxis {
    /// `λ = (π + θ)/2`.
    #[default]
    Bisector,
    /// `λ = π/2 + θ`, orthogonal to the Bell-branch displacement. Branches 0
    /// and 2 then project exactly symmetrically about branch 1.
    BellPhase,
}

impl ProjectionAxis {
    pub fn angle(self, theta: f64) -> f64 {
        match self {
            ProjectionAxis::Bisector => (PI + theta) / 2.0,
            ProjectionAxis::BellPhase => FRAC_PI_2 + theta,
        }
    }
}

/// `⟨x_λ⟩ = √(2η) β cos(kθ − λ)` for branch `k` after loss `η`.
pub fn quadrature_mean(probe: &SqueezedProbe, k: usize, lambda: f64, eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    Ok((2.0 * eta).sqrt() * probe.beta * (k as f64 * probe.theta - lambda).cos())
}

/// Variance of `x_λ` for branch `k` after loss `η`.
///
/// The branch rotation turns the squeeze ellipse together with the
/// displacement, so the angle between the measured quadrature and the
/// squeezed axis is `λ − φ/2 − kθ`.
pub fn quadrature_variance(probe: &SqueezedProbe, k: usize, lambda: f64, eta: f64) -> Result<f64> {
    check_unit_interval("eta", eta)?;
    let angle = lambda - probe.phi / 2.0 - k as f64 * probe.theta;
    Ok(lossy_variance(probe.r, angle, eta))
}

/// `(η/2)[e^{2r} sin²a + e^{−2r} cos²a] + (1 − η)/2`.
pub fn lossy_variance(r: f64, angle: f64, eta: f64) -> f64 {
    if r == 0.0 {
        return 0.5;
    }
    let (s, c) = angle.sin_cos();
    0.5 * eta * ((2.0 * r).exp() * s * s + (-2.0 * r).exp() * c * c) + 0.5 * (1.0 - eta)
}

pub fn quadrature_stat(probe: &SqueezedProbe, k: usize, lambda: f64, eta: f64) -> Result<QuadratureStat> {
    Ok(QuadratureStat {
        lambda,
        mean: quadrature_mean(probe, k, lambda, eta)?,
        variance: quadrature_variance(probe, k, lambda, eta)?,
    })
}

/// Gaussian outcome distribution of one branch, weighted by its prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchDensity {
    pub branch: Branch,
    pub mean: f64,
    pub variance: f64,
}

impl BranchDensity {
    pub fn prior(&self) -> f64 {
        self.branch.prior
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-0.5 * d * d / self.variance).exp() / (2.0 * PI * self.variance).sqrt()
    }
}

/// Outcome densities of the three branches on the given projection axis.
pub fn branch_densities_on(probe: &SqueezedProbe, eta: f64, axis: ProjectionAxis) -> Result<[BranchDensity; 3]> {
    check_unit_interval("eta", eta)?;
    let lambda = axis.angle(probe.theta);
    let densities = probe.branches().map(|branch| BranchDensity {
        branch,
        mean: (2.0 * eta).sqrt() * probe.beta * (branch.phase - lambda).cos(),
        variance: lossy_variance(probe.r, lambda - probe.phi / 2.0 - branch.phase, eta),
    });
    Ok(densities)
}

/// Outcome densities on the default axis `λ = (π + θ)/2`.
pub fn branch_densities(probe: &SqueezedProbe, eta: f64) -> Result<[BranchDensity; 3]> {
    branch_densities_on(probe, eta, ProjectionAxis::Bisector)
}
