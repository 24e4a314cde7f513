//! Minimization of the total error over the probe amplitude and squeezing,
//! transmittance sweeps, and fault-tolerance threshold search.
//!
//! [`optimize`] scans a fixed grid (logarithmic in `α`, linear in `r`) and
//! then polishes the best grid point with Nelder–Mead rounds until a round
//! improves the objective by less than [`REFINE_REL_TOL`]. Everything is
//! deterministic: the same problem always gives the same report.

use rayon::prelude::*;

use crate::dephasing::{flip_rates_with, FlipModel, FlipRates, GammaConvention, LossBudget};
use crate::discrimination::{discrimination_error_on, DiscriminationResult};
use crate::error::{BudgetError, Result};
use crate::probe::{BetaConvention, ProjectionAxis, SqueezedProbe};
use crate::qecc::{logical_flip_rates, CodeSpec};
use crate::simplex::{nelder_mead, SimplexOptions};

/// Error-probability budget of Knill's error-correcting teleportation scheme.
pub const KNILL_THRESHOLD: f64 = 1e-2;
/// Error-probability budget of the Fujii–Tokunaga topological scheme.
pub const FT_THRESHOLD: f64 = 4e-4;

/// Objective values closer than this are treated as equal.
pub const TIE_TOL: f64 = 1e-12;
/// Refinement stops once a round gains less than this, relatively.
pub const REFINE_REL_TOL: f64 = 1e-4;

pub const DEFAULT_THETA: f64 = 0.01;
pub const DEFAULT_ALPHA_RANGE: (f64, f64) = (1.0, 1e4);
/// Largest squeezing reported experimentally.
pub const DEFAULT_R_MAX: f64 = 1.5;

/// Modelling conventions that are not fixed by the loss budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelOptions {
    pub gamma: GammaConvention,
    pub beta: BetaConvention,
    pub axis: ProjectionAxis,
}

/// Total error at one parameter point, with its components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub alpha: f64,
    pub r: f64,
    pub theta: f64,
    pub probe: SqueezedProbe,
    pub discrimination: DiscriminationResult,
    /// Physical flip rates.
    pub flips: FlipRates,
    /// Flip rates after decoding; equal to `flips` without a code.
    pub logical: FlipRates,
    pub code: CodeSpec,
    pub e_tot: f64,
}

impl Evaluation {
    pub fn p_e(&self) -> f64 {
        self.discrimination.p_error
    }
}

/// Evaluates the total error at amplitude `alpha` and squeezing `r`.
/// Fails with [`BudgetError::Infeasible`] when `α² < sinh² r`.
pub fn evaluate_with(
    theta: f64,
    budget: &LossBudget,
    alpha: f64,
    r: f64,
    code: CodeSpec,
    options: ModelOptions,
) -> Result<Evaluation> {
    let probe = SqueezedProbe::from_alpha(alpha, r, theta, options.beta)?;
    let discrimination = discrimination_error_on(&probe, budget.eta_total, options.axis)?;
    let flips = flip_rates_with(&probe, budget, options.gamma)?;
    let logical = logical_flip_rates(&flips, code);
    let e_tot = crate::dephasing::total_error(discrimination.p_error, &logical);
    Ok(Evaluation {
        alpha,
        r,
        theta,
        probe,
        discrimination,
        flips,
        logical,
        code,
        e_tot,
    })
}

/// [`evaluate_with`] for equal segments, the environment flip model and
/// default conventions.
pub fn evaluate(theta: f64, eta: f64, alpha: f64, r: f64, code: CodeSpec) -> Result<Evaluation> {
    let budget = LossBudget::symmetric(eta, FlipModel::Environment)?;
    evaluate_with(theta, &budget, alpha, r, code, ModelOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationProblem {
    pub theta: f64,
    pub budget: LossBudget,
    pub code: CodeSpec,
    pub alpha_range: (f64, f64),
    /// `(r, r)` pins the squeezing; `(0, 0)` is a coherent probe.
    pub r_range: (f64, f64),
    /// When set, `θ` is refined inside this interval as well.
    pub theta_range: Option<(f64, f64)>,
    pub alpha_points: usize,
    pub r_points: usize,
    pub options: ModelOptions,
}

impl OptimizationProblem {
    /// Defaults: `θ = 0.01`, `α ∈ [1, 10⁴]`, and `r ∈ [0, 1.5]` when
    /// `squeezed`, else `r = 0`.
    pub fn new(eta: f64, code: CodeSpec, squeezed: bool) -> Result<Self> {
        Ok(Self {
            theta: DEFAULT_THETA,
            budget: LossBudget::symmetric(eta, FlipModel::Environment)?,
            code,
            alpha_range: DEFAULT_ALPHA_RANGE,
            r_range: if squeezed { (0.0, DEFAULT_R_MAX) } else { (0.0, 0.0) },
            theta_range: None,
            alpha_points: 96,
            r_points: 32,
            options: ModelOptions::default(),
        })
    }

    pub fn eta(&self) -> f64 {
        self.budget.eta_total
    }

    pub fn is_squeezed(&self) -> bool {
        self.r_range.1 > 0.0
    }

    /// Same problem at another total transmittance with equal segments.
    pub fn at_eta(&self, eta: f64) -> Result<Self> {
        Ok(Self {
            budget: LossBudget::symmetric(eta, self.budget.flip_model)?,
            ..*self
        })
    }

    fn validate(&self) -> Result<()> {
        let (a_lo, a_hi) = self.alpha_range;
        if !(a_lo > 0.0 && a_hi >= a_lo && a_hi.is_finite()) {
            return Err(BudgetError::InvalidParameter {
                name: "alpha_range",
                value: a_lo,
                reason: "need 0 < alpha_min <= alpha_max",
            });
        }
        let (r_lo, r_hi) = self.r_range;
        if !(r_lo >= 0.0 && r_hi >= r_lo && r_hi.is_finite()) {
            return Err(BudgetError::InvalidParameter {
                name: "r_range",
                value: r_lo,
                reason: "need 0 <= r_min <= r_max",
            });
        }
        if self.alpha_points < 2 || self.r_points < 1 {
            return Err(BudgetError::InvalidParameter {
                name: "grid",
                value: self.alpha_points as f64,
                reason: "need at least 2 alpha points and 1 r point",
            });
        }
        Ok(())
    }

    fn alpha_grid(&self) -> Vec<f64> {
        let (lo, hi) = (self.alpha_range.0.ln(), self.alpha_range.1.ln());
        let n = self.alpha_points;
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    fn r_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.r_range;
        if lo == hi || self.r_points == 1 {
            return vec![lo];
        }
        let n = self.r_points;
        (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
    }

    fn e_tot(&self, alpha: f64, r: f64, theta: f64) -> Option<f64> {
        evaluate_with(theta, &self.budget, alpha, r, self.code, self.options)
            .ok()
            .map(|e| e.e_tot)
    }
}

/// Every coarse-grid sample; `None` marks infeasible points.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCertificate {
    pub alphas: Vec<f64>,
    pub rs: Vec<f64>,
    /// Row-major over `(alpha, r)`.
    pub values: Vec<Option<f64>>,
}

impl GridCertificate {
    pub fn min(&self) -> Option<f64> {
        self.values.iter().flatten().copied().reduce(f64::min)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.alphas.iter().enumerate().flat_map(move |(i, &a)| {
            self.rs
                .iter()
                .enumerate()
                .filter_map(move |(j, &r)| self.values[i * self.rs.len() + j].map(|e| (a, r, e)))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub eta: f64,
    pub e_tot_min: f64,
    pub alpha_opt: f64,
    pub r_opt: f64,
    pub theta_opt: f64,
    /// Components at the optimum.
    pub optimum: Evaluation,
    pub refinement_rounds: usize,
    pub certificate: GridCertificate,
}

impl ErrorReport {
    pub fn beta_opt(&self) -> f64 {
        self.optimum.probe.beta
    }
}

/// Grid scan followed by simplex refinement.
pub fn optimize(problem: &OptimizationProblem) -> Result<ErrorReport> {
    problem.validate()?;
    let alphas = problem.alpha_grid();
    let rs = problem.r_grid();
    let theta0 = problem.theta;

    let mut values = Vec::with_capacity(alphas.len() * rs.len());
    // strict improvement only, so the smallest alpha then smallest r wins ties
    let mut best: Option<(f64, f64, f64)> = None;
    for &a in &alphas {
        for &r in &rs {
            let e = problem.e_tot(a, r, theta0);
            values.push(e);
            if let Some(e) = e {
                if best.is_none_or(|(_, _, b)| e < b) {
                    best = Some((a, r, e));
                }
            }
        }
    }
    let (mut alpha, mut r, mut e_best) = best.ok_or(BudgetError::InvalidParameter {
        name: "r_range",
        value: problem.r_range.0,
        reason: "no feasible grid point",
    })?;
    let mut theta = theta0;

    let refine_r = rs.len() > 1;
    let (a_lo, a_hi) = (problem.alpha_range.0.ln(), problem.alpha_range.1.ln());
    let (r_lo, r_hi) = problem.r_range;
    let a_step = (a_hi - a_lo) / (alphas.len() - 1) as f64;
    let r_step = if refine_r { rs[1] - rs[0] } else { 0.0 };

    let pack = |a: f64, r: f64, t: f64| {
        let mut x = vec![a.ln()];
        if refine_r {
            x.push(r);
        }
        if problem.theta_range.is_some() {
            x.push(t);
        }
        x
    };
    let unpack = |x: &[f64]| {
        let a = x[0].exp();
        let mut k = 1;
        let r = if refine_r {
            k += 1;
            x[1]
        } else {
            r_lo
        };
        let t = if problem.theta_range.is_some() { x[k] } else { theta0 };
        (a, r, t)
    };
    let objective = |x: &[f64]| -> f64 {
        let (a, r, t) = unpack(x);
        let in_box = x[0] >= a_lo - 1e-12
            && x[0] <= a_hi + 1e-12
            && r >= r_lo
            && r <= r_hi
            && problem.theta_range.is_none_or(|(lo, hi)| t >= lo && t <= hi);
        if !in_box {
            return f64::INFINITY;
        }
        problem.e_tot(a, r, t).unwrap_or(f64::INFINITY)
    };

    let mut steps = vec![a_step];
    if refine_r {
        steps.push(r_step);
    }
    if let Some((lo, hi)) = problem.theta_range {
        steps.push(0.05 * (hi - lo));
    }

    let mut rounds = 0;
    let mut step_scale = 1.0;
    while rounds < 25 {
        rounds += 1;
        let start = pack(alpha, r, theta);
        // step towards the interior when sitting on an upper bound
        let signed: Vec<f64> = steps
            .iter()
            .zip(&start)
            .enumerate()
            .map(|(i, (&s, &x0))| {
                let s = s * step_scale;
                if objective(&{
                    let mut y = start.clone();
                    y[i] = x0 + s;
                    y
                })
                .is_finite()
                {
                    s
                } else {
                    -s
                }
            })
            .collect();
        let res = nelder_mead(objective, &start, &signed, SimplexOptions::default());
        if res.f < e_best - TIE_TOL {
            let gain = (e_best - res.f) / e_best;
            let (a, rr, t) = unpack(&res.x);
            alpha = a;
            r = rr.clamp(r_lo, r_hi);
            theta = t;
            e_best = res.f;
            if gain < REFINE_REL_TOL {
                break;
            }
            step_scale = 1.0;
        } else {
            // nothing gained; one more try with a finer simplex, then stop
            if step_scale < 0.2 {
                break;
            }
            step_scale *= 0.1;
        }
    }

    let optimum = evaluate_with(theta, &problem.budget, alpha, r, problem.code, problem.options)?;
    Ok(ErrorReport {
        eta: problem.eta(),
        e_tot_min: optimum.e_tot,
        alpha_opt: alpha,
        r_opt: r,
        theta_opt: theta,
        optimum,
        refinement_rounds: rounds,
        certificate: GridCertificate { alphas, rs, values },
    })
}

/// Optimizes every transmittance on `etas` in parallel and checks that the
/// optimized error never increases with transmittance.
pub fn sweep_eta(template: &OptimizationProblem, etas: &[f64]) -> Result<Vec<ErrorReport>> {
    for &eta in etas {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(BudgetError::InvalidParameter {
                name: "eta",
                value: eta,
                reason: "sweep points must lie in (0, 1]",
            });
        }
    }
    let reports: Vec<ErrorReport> = etas
        .par_iter()
        .map(|&eta| optimize(&template.at_eta(eta)?))
        .collect::<Result<_>>()?;
    check_monotone(reports.iter().map(|r| (r.eta, r.e_tot_min)))?;
    Ok(reports)
}

/// Fails if `e` increases with `eta` by more than [`TIE_TOL`].
pub fn check_monotone(points: impl Iterator<Item = (f64, f64)>) -> Result<()> {
    let mut pts: Vec<(f64, f64)> = points.collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pts.windows(2) {
        let ((eta_lo, e_lo), (eta_hi, e_hi)) = (w[0], w[1]);
        if e_hi > e_lo + TIE_TOL {
            return Err(BudgetError::NonMonotoneSweep {
                eta_lo,
                e_lo,
                eta_hi,
                e_hi,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Threshold {
    /// Least transmittance whose optimized error meets the target.
    Reached { eta_star: f64, report: Box<ErrorReport> },
    /// Even a lossless channel misses the target.
    Unreachable { e_at_unity: f64 },
}

impl Threshold {
    pub fn eta_star(&self) -> Option<f64> {
        match self {
            Threshold::Reached { eta_star, .. } => Some(*eta_star),
            Threshold::Unreachable { .. } => None,
        }
    }
}

/// Transmittance loss in dB, `−10 log₁₀ η`.
pub fn loss_db(eta: f64) -> f64 {
    -10.0 * eta.log10()
}

/// Lowest transmittance probed by [`threshold_transmittance`].
pub const ETA_FLOOR: f64 = 1e-3;

/// Bisects the total transmittance for the least value whose optimized
/// error is at most `target`, to within `resolution`.
pub fn threshold_transmittance(template: &OptimizationProblem, target: f64, resolution: f64) -> Result<Threshold> {
    if target.is_nan() || target <= 0.0 {
        return Err(BudgetError::InvalidParameter {
            name: "target",
            value: target,
            reason: "target error must be positive",
        });
    }
    let mut probed = Vec::new();
    let top = optimize(&template.at_eta(1.0)?)?;
    probed.push((1.0, top.e_tot_min));
    if top.e_tot_min > target {
        return Ok(Threshold::Unreachable {
            e_at_unity: top.e_tot_min,
        });
    }
    let bottom = optimize(&template.at_eta(ETA_FLOOR)?)?;
    probed.push((ETA_FLOOR, bottom.e_tot_min));
    if bottom.e_tot_min <= target {
        return Ok(Threshold::Reached {
            eta_star: ETA_FLOOR,
            report: Box::new(bottom),
        });
    }
    let (mut lo, mut hi, mut hi_report) = (ETA_FLOOR, 1.0, top);
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        let rep = optimize(&template.at_eta(mid)?)?;
        probed.push((mid, rep.e_tot_min));
        if rep.e_tot_min <= target {
            hi = mid;
            hi_report = rep;
        } else {
            lo = mid;
        }
    }
    check_monotone(probed.into_iter())?;
    Ok(Threshold::Reached {
        eta_star: hi,
        report: Box::new(hi_report),
    })
}
