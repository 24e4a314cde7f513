use thiserror::Error;

/// Errors raised by the error-budget computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BudgetError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("squeezing photon content sinh^2(r) = {squeeze_photons} exceeds the mean photon number {n_bar}")]
    PhotonBudgetExceeded { n_bar: f64, squeeze_photons: f64 },
    #[error("branch means coincide; the three probe states cannot be discriminated")]
    CoincidentBranches,
    #[error("repetition code length must be odd, got {0}")]
    EvenCodeLength(usize),
    #[error("pattern enumeration supports at most 15 qubits, got {0}")]
    CodeTooLarge(usize),
    #[error("infeasible point: alpha^2 = {alpha_sq} < squeezing photon content {squeeze_photons}")]
    Infeasible { alpha_sq: f64, squeeze_photons: f64 },
    #[error("quadrature did not reach tolerance {tol:e} within {max_depth} refinement levels (estimated error {err:e})")]
    QuadratureFailed { tol: f64, max_depth: usize, err: f64 },
    #[error("optimized error is not monotone in transmittance: E({eta_hi}) = {e_hi} > E({eta_lo}) = {e_lo}")]
    NonMonotoneSweep {
        eta_lo: f64,
        e_lo: f64,
        eta_hi: f64,
        e_hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, BudgetError>;

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(BudgetError::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}
