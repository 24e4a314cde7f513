//! Phase flips of the two atoms caused by which-path information carried off
//! by lost probe photons, and the resulting total error.
//!
//! Lost light is modelled by beam splitters. The state leaking to the
//! environment through a fraction `τ` of the power is a Gaussian with centre
//! `√τ β` and covariance `τ Σ_sq + (1 − τ) Σ_vac`. Whether an atom rotated the
//! probe is recorded in that state, and the overlap `γ` between its rotated
//! and unrotated versions sets the flip probability `(1 − γ)/2`.

use crate::error::{check_unit_interval, Result};
use crate::probe::SqueezedProbe;

/// Which fraction of the probe power is fed into the overlap for each atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlipModel {
    /// Power diverted to the environment: `τ_A = 1 − η₁η₂`, `τ_B = η₁(1 − η₂)`.
    #[default]
    Environment,
    /// Transmitted power: `τ_A = η₁η₂`, `τ_B = (1 − η₁)η₂`. Flips atoms even
    /// without loss; only useful for comparison.
    Literal,
}

/// How `γ` is read off the normalized Wigner overlap `I(θ)/I(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaConvention {
    /// `γ = I(θ)/I(0)`; equals `|⟨ψ|ψ'⟩|²` for pure states.
    #[default]
    Overlap,
    /// `γ = √(I(θ)/I(0))`; equals `|⟨ψ|ψ'⟩|` for pure states.
    Amplitude,
}

impl GammaConvention {
    pub fn apply(self, ratio: f64) -> f64 {
        match self {
            GammaConvention::Overlap => ratio,
            GammaConvention::Amplitude => ratio.sqrt(),
        }
    }
}

/// Transmittances of the two probe segments and the derived environment
/// fractions seen by atoms A and B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBudget {
    /// Atom A to atom B.
    pub eta1: f64,
    /// Atom B to the detector.
    pub eta2: f64,
    pub eta_total: f64,
    pub tau_a: f64,
    pub tau_b: f64,
    pub flip_model: FlipModel,
}

impl LossBudget {
    pub fn from_segments(eta1: f64, eta2: f64, flip_model: FlipModel) -> Result<Self> {
        check_unit_interval("eta1", eta1)?;
        check_unit_interval("eta2", eta2)?;
        let (tau_a, tau_b) = match flip_model {
            FlipModel::Environment => (1.0 - eta1 * eta2, eta1 * (1.0 - eta2)),
            FlipModel::Literal => (eta1 * eta2, (1.0 - eta1) * eta2),
        };
        Ok(Self {
            eta1,
            eta2,
            eta_total: eta1 * eta2,
            tau_a,
            tau_b,
            flip_model,
        })
    }

    /// Equal segments, `η₁ = η₂ = √η`.
    pub fn symmetric(eta_total: f64, flip_model: FlipModel) -> Result<Self> {
        check_unit_interval("eta", eta_total)?;
        let s = eta_total.sqrt();
        let mut budget = Self::from_segments(s, s, flip_model)?;
        budget.eta_total = eta_total;
        if flip_model == FlipModel::Environment {
            budget.tau_a = 1.0 - eta_total;
        }
        Ok(budget)
    }
}

/// `I(θ)/I(0)`, where `I(θ)` integrates the product of the environment
/// Wigner function and its copy rotated by `θ`.
///
/// Both are Gaussians, so `I(θ) ∝ det(Σ₁+Σ₂)^{-1/2} exp(−½ δᵀ(Σ₁+Σ₂)⁻¹δ)`.
pub fn wigner_overlap_ratio(probe: &SqueezedProbe, tau: f64) -> Result<f64> {
    check_unit_interval("tau", tau)?;
    let r = probe.r;
    // phase-space units with vacuum variance 1/4; x is the anti-squeezed axis
    let vx = 0.25 * (tau * (2.0 * r).exp() + 1.0 - tau);
    let vp = 0.25 * (tau * (-2.0 * r).exp() + 1.0 - tau);
    let (s, c) = probe.theta.sin_cos();
    let one_minus_c = 2.0 * (0.5 * probe.theta).sin().powi(2);

    let sxx = vx * (1.0 + c * c) + vp * s * s;
    let spp = vx * s * s + vp * (1.0 + c * c);
    let sxp = (vx - vp) * s * c;
    let det = sxx * spp - sxp * sxp;

    let amp = tau.sqrt() * probe.beta;
    let dx = amp * one_minus_c;
    let dp = -amp * s;
    let quad = (spp * dx * dx - 2.0 * sxp * dx * dp + sxx * dp * dp) / det;

    let prefactor = (4.0 * vx * vp / det).sqrt();
    Ok((prefactor * (-0.5 * quad).exp()).min(1.0))
}

/// Overlap `γ` at environment fraction `tau`, default convention.
pub fn wigner_overlap_gamma(probe: &SqueezedProbe, tau: f64) -> Result<f64> {
    wigner_overlap_gamma_with(probe, tau, GammaConvention::default())
}

pub fn wigner_overlap_gamma_with(probe: &SqueezedProbe, tau: f64, convention: GammaConvention) -> Result<f64> {
    Ok(convention.apply(wigner_overlap_ratio(probe, tau)?))
}

/// Per-atom overlaps and phase-flip probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipRates {
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub p_flip_a: f64,
    pub p_flip_b: f64,
    pub p_noflip_a: f64,
    pub p_noflip_b: f64,
}

impl FlipRates {
    pub fn from_gammas(gamma_a: f64, gamma_b: f64) -> Self {
        Self {
            gamma_a,
            gamma_b,
            p_flip_a: 0.5 * (1.0 - gamma_a),
            p_flip_b: 0.5 * (1.0 - gamma_b),
            p_noflip_a: 0.5 * (1.0 + gamma_a),
            p_noflip_b: 0.5 * (1.0 + gamma_b),
        }
    }

    /// Rates given directly as flip probabilities. `gamma` is set to
    /// `1 − 2p`, which is outside `[0, 1]` when `p > 1/2`.
    pub fn from_flip_probs(p_flip_a: f64, p_flip_b: f64) -> Self {
        Self {
            gamma_a: 1.0 - 2.0 * p_flip_a,
            gamma_b: 1.0 - 2.0 * p_flip_b,
            p_flip_a,
            p_flip_b,
            p_noflip_a: 1.0 - p_flip_a,
            p_noflip_b: 1.0 - p_flip_b,
        }
    }

    pub fn none() -> Self {
        Self::from_gammas(1.0, 1.0)
    }

    /// Same rates with atoms A and B exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            gamma_a: self.gamma_b,
            gamma_b: self.gamma_a,
            p_flip_a: self.p_flip_b,
            p_flip_b: self.p_flip_a,
            p_noflip_a: self.p_noflip_b,
            p_noflip_b: self.p_noflip_a,
        }
    }
}

pub fn flip_rates(probe: &SqueezedProbe, budget: &LossBudget) -> Result<FlipRates> {
    flip_rates_with(probe, budget, GammaConvention::default())
}

pub fn flip_rates_with(probe: &SqueezedProbe, budget: &LossBudget, convention: GammaConvention) -> Result<FlipRates> {
    let gamma_a = wigner_overlap_gamma_with(probe, budget.tau_a, convention)?;
    let gamma_b = wigner_overlap_gamma_with(probe, budget.tau_b, convention)?;
    Ok(FlipRates::from_gammas(gamma_a, gamma_b))
}

/// Weights of the intended state and the two single-flip states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureDecomposition {
    pub w_correct: f64,
    pub w_flip_a: f64,
    pub w_flip_b: f64,
}

pub fn mixture(flip: &FlipRates) -> MixtureDecomposition {
    MixtureDecomposition {
        w_correct: flip.p_noflip_a * flip.p_noflip_b + flip.p_flip_a * flip.p_flip_b,
        w_flip_a: flip.p_flip_a * flip.p_noflip_b,
        w_flip_b: flip.p_noflip_a * flip.p_flip_b,
    }
}

/// Total error: a discrimination error on the intended state, or a correct
/// discrimination of a single-flipped state.
pub fn total_error(p_e: f64, flip: &FlipRates) -> f64 {
    let m = mixture(flip);
    m.w_correct * p_e + (m.w_flip_a + m.w_flip_b) * (1.0 - p_e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn probe(beta: f64, r: f64, theta: f64) -> SqueezedProbe {
        SqueezedProbe::new(beta * beta + r.sinh().powi(2), r, theta).unwrap()
    }

    #[test]
    fn budget_fractions() {
        let b = LossBudget::symmetric(0.81, FlipModel::Environment).unwrap();
        assert!((b.eta1 - 0.9).abs() < 1e-15 && (b.eta2 - 0.9).abs() < 1e-15);
        assert_eq!(b.eta_total, 0.81);
        assert!((b.tau_a - 0.19).abs() < 1e-15);
        assert!((b.tau_b - 0.09).abs() < 1e-15);

        let l = LossBudget::symmetric(0.81, FlipModel::Literal).unwrap();
        assert!((l.tau_a - 0.81).abs() < 1e-15);
        assert!((l.tau_b - 0.09).abs() < 1e-15);

        let s = LossBudget::from_segments(0.8, 0.5, FlipModel::Environment).unwrap();
        assert_eq!(s.eta_total, 0.8 * 0.5);
        assert!((s.tau_b - 0.4).abs() < 1e-15);
        assert!(LossBudget::symmetric(1.2, FlipModel::Environment).is_err());
    }

    #[test]
    fn unrotated_overlap_is_one() {
        let p = probe(100.0, 1.2, 1e-300);
        assert_eq!(wigner_overlap_ratio(&p, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn vacuum_is_rotation_invariant() {
        let p = probe(1e-150, 0.0, 0.3);
        for &tau in &[0.0, 0.4, 1.0] {
            assert_eq!(wigner_overlap_gamma(&p, tau).unwrap(), 1.0);
        }
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let p = probe(100.0, 0.0, 0.01);
        // exp(-2 τ β² (1 - cos θ)) and its square root, 30-digit references
        let g = wigner_overlap_gamma(&p, 0.1).unwrap();
        assert!((g - 0.904_838_172_064_942).abs() < 1e-13, "{g}");
        let g = wigner_overlap_gamma_with(&p, 0.1, GammaConvention::Amplitude).unwrap();
        assert!((g - 0.951_229_820_845_069).abs() < 1e-13, "{g}");
    }

    #[test]
    fn lossless_environment_model_has_no_flips() {
        let p = probe(100.0, 1.0, 0.01);
        let b = LossBudget::symmetric(1.0, FlipModel::Environment).unwrap();
        let f = flip_rates(&p, &b).unwrap();
        assert_eq!((f.p_flip_a, f.p_flip_b), (0.0, 0.0));
        assert_eq!(total_error(0.123, &f), 0.123);
    }

    #[test]
    fn coherent_flip_rate_at_one_percent_loss() {
        let p = probe(100.0, 0.0, 0.01);
        let b = LossBudget::symmetric(0.99, FlipModel::Environment).unwrap();
        assert!((b.tau_a - 0.01).abs() < 1e-15);
        let f = flip_rates(&p, &b).unwrap();
        // (1 - exp(-2·0.01·1e4·(1 - cos 0.01)))/2
        assert!((f.p_flip_a - 4.975_041_873_475_355e-3).abs() < 1e-15, "{}", f.p_flip_a);
        let f = flip_rates_with(&p, &b, GammaConvention::Amplitude).unwrap();
        assert!((f.p_flip_a - 2.493_739_674_300_859_6e-3).abs() < 1e-15, "{}", f.p_flip_a);
    }

    #[test]
    fn flip_limits() {
        let f = FlipRates::from_gammas(0.0, 1.0);
        assert_eq!(f.p_flip_a, 0.5);
        assert_eq!(f.p_flip_b, 0.0);
        assert_eq!(f.p_flip_a + f.p_noflip_a, 1.0);
    }

    #[test]
    fn mixture_examples() {
        let m = mixture(&FlipRates::from_flip_probs(0.0, 0.0));
        assert_eq!((m.w_correct, m.w_flip_a, m.w_flip_b), (1.0, 0.0, 0.0));
        let m = mixture(&FlipRates::from_flip_probs(0.5, 0.0));
        assert_eq!((m.w_correct, m.w_flip_a, m.w_flip_b), (0.5, 0.5, 0.0));
        let m = mixture(&FlipRates::from_flip_probs(0.1, 0.2));
        assert!((m.w_correct - 0.74).abs() < 1e-15);
        assert!((m.w_flip_a - 0.08).abs() < 1e-15);
        assert!((m.w_flip_b - 0.18).abs() < 1e-15);
        assert!((m.w_correct + m.w_flip_a + m.w_flip_b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_error_examples() {
        assert_eq!(total_error(0.0, &FlipRates::none()), 0.0);
        assert_eq!(total_error(0.37, &FlipRates::none()), 0.37);
        let e = total_error(0.0, &FlipRates::from_flip_probs(0.1, 0.0));
        assert!((e - 0.1).abs() < 1e-15);
    }

    #[test]
    fn gamma_nonincreasing_in_tau() {
        for &theta in &[0.005, 0.01, 0.02] {
            for &r in &[0.0, 0.7, 1.5] {
                let p = probe(150.0, r, theta);
                let mut last = 1.0;
                for i in 0..=200 {
                    let g = wigner_overlap_gamma(&p, i as f64 / 200.0).unwrap();
                    assert!((0.0..=1.0).contains(&g));
                    assert!(g <= last + 1e-15, "theta={theta} r={r} i={i}");
                    last = g;
                }
            }
        }
    }
}
