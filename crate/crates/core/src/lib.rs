//! Analytic error budget for qubus entanglement generation: a displaced,
//! phase-squeezed probe picks up conditional phase shifts from two atoms,
//! is attenuated, and is measured by homodyne detection. Loss leaves both
//! an imperfect discrimination and residual phase flips on the atoms, which
//! repetition codes can correct.

pub mod dephasing;
pub mod discrimination;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod probe;
pub mod qecc;
pub mod quadrature;
pub mod simplex;

pub use dephasing::{flip_rates, total_error, FlipModel, FlipRates, GammaConvention, LossBudget};
pub use discrimination::{discrimination_error, DiscriminationResult};
pub use error::{BudgetError, Result};
pub use optimizer::{
    evaluate, optimize, sweep_eta, threshold_transmittance, ErrorReport, OptimizationProblem, Threshold,
    FT_THRESHOLD, KNILL_THRESHOLD,
};
pub use probe::{BetaConvention, ProjectionAxis, SqueezedProbe};
pub use qecc::CodeSpec;
