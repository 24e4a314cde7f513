//! Oracle-equivalence and invariant checks, printed as a fixed-order table.
//! Output depends only on the configuration, never on timing or threads.

use qubus_core::dephasing::wigner_overlap_gamma_with;
use qubus_core::discrimination::discrimination_error_on;
use qubus_core::oracle::{enumerate_code, mc_discrimination, quad_gamma, OracleConfig};
use qubus_core::probe::{branch_densities_on, lossy_variance, ProjectionAxis};
use qubus_core::qecc::logical_rates;
use qubus_core::{optimize, CodeSpec, OptimizationProblem, SqueezedProbe};

use crate::config::RunConfig;
use crate::output::sig6;
use crate::CliError;

pub struct Check {
    pub suite: &'static str,
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        format!("{verdict}  {:<10} {:<34} {}", self.suite, self.label, self.detail)
    }
}

pub const MC_NBARS: [f64; 2] = [1e4, 4e4];
pub const MC_RS: [f64; 2] = [0.0, 1.0];
pub const MC_ETAS: [f64; 3] = [1.0, 0.95, 0.9];

pub const GAMMA_TAUS: [f64; 5] = [1e-3, 1e-2, 0.1, 0.5, 1.0];
pub const GAMMA_BETAS: [f64; 5] = [1.0, 10.0, 30.0, 100.0, 300.0];
pub const GAMMA_RS: [f64; 3] = [0.0, 0.75, 1.5];
pub const GAMMA_REL_TOL: f64 = 1e-6;

fn monte_carlo(cfg: &RunConfig, axis: ProjectionAxis) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let mut index = 0u64;
    for &n_bar in &MC_NBARS {
        for &r in &MC_RS {
            for &eta in &MC_ETAS {
                let p = SqueezedProbe::new(n_bar, r, cfg.theta)?;
                let exact = discrimination_error_on(&p, eta, axis)?;
                let window = exact.window.expect("branches are separated");
                // a distinct stream family per point
                let oracle = OracleConfig {
                    seed: cfg.oracle.seed.wrapping_add(index),
                    ..cfg.oracle
                };
                index += 1;
                let est = mc_discrimination(&p, eta, axis, &window, &oracle)?;
                let z = (est.p_error - exact.p_error) / est.std_err;
                checks.push(Check {
                    suite: "mc",
                    label: format!("nbar={n_bar:e} r={r} eta={eta}"),
                    pass: est.agrees_with(exact.p_error, 3.0),
                    detail: format!(
                        "analytic={} mc={} se={} z={:+.2}",
                        sig6(exact.p_error),
                        sig6(est.p_error),
                        sig6(est.std_err),
                        z
                    ),
                });
            }
        }
    }
    Ok(checks)
}

fn gamma(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let conv = cfg.options.gamma;
    let mut checks = Vec::new();
    for &r in &GAMMA_RS {
        for &beta in &GAMMA_BETAS {
            let p = SqueezedProbe::new(beta * beta + r.sinh().powi(2), r, cfg.theta)?;
            for &tau in &GAMMA_TAUS {
                let exact = wigner_overlap_gamma_with(&p, tau, conv)?;
                let quad = quad_gamma(&p, tau, conv, &cfg.oracle)?;
                let rel = (quad / exact - 1.0).abs();
                checks.push(Check {
                    suite: "gamma",
                    label: format!("r={r} beta={beta} tau={tau}"),
                    pass: rel <= GAMMA_REL_TOL,
                    detail: format!("closed={:.9e} quad={:.9e} rel={rel:.1e}", exact, quad),
                });
            }
        }
        // identical Wigner functions at zero rotation
        let p = SqueezedProbe {
            theta: 0.0,
            ..SqueezedProbe::new(1e4, r, cfg.theta)?
        };
        let exact = wigner_overlap_gamma_with(&p, 0.5, conv)?;
        let quad = quad_gamma(&p, 0.5, conv, &cfg.oracle)?;
        let dev = (exact - 1.0).abs().max((quad - 1.0).abs());
        checks.push(Check {
            suite: "gamma",
            label: format!("r={r} theta=0"),
            pass: dev <= 1e-10,
            detail: format!("max|gamma-1|={dev:.1e}"),
        });
    }
    Ok(checks)
}

fn qecc() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for n in [3, 7] {
        let code = CodeSpec::new(n)?;
        for &p in &[1e-3, 1e-2, 0.1, 0.3, 0.5] {
            let (_, closed) = logical_rates(1.0 - p, p, code);
            let brute = enumerate_code(p, n)?;
            let diff = (closed - brute).abs();
            checks.push(Check {
                suite: "qecc",
                label: format!("n={n} p={p}"),
                pass: diff <= 1e-12,
                detail: format!("closed={closed:.12e} enum={brute:.12e}"),
            });
        }
        let p: f64 = 1e-3;
        let (coef, power) = if n == 3 { (3.0, 2) } else { (35.0, 4) };
        let lead = enumerate_code(p, n)? / p.powi(power);
        checks.push(Check {
            suite: "qecc",
            label: format!("n={n} leading coefficient"),
            pass: (lead / coef - 1.0).abs() <= 0.05,
            detail: format!("p^-{power} P_L={} expect {coef}", sig6(lead)),
        });
    }
    Ok(checks)
}

fn invariants(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let axis = cfg.options.axis;
    let mut checks = Vec::new();
    for &r in &[0.0, 0.5, 1.0, 1.5] {
        let p = SqueezedProbe::new(1e4, r, cfg.theta)?;
        let pe = discrimination_error_on(&p, 1e-4, axis)?.p_error;
        checks.push(Check {
            suite: "invariant",
            label: format!("loss limit r={r}"),
            pass: (pe - 0.5).abs() <= 1e-3,
            detail: format!("P_E(eta=1e-4)={}", sig6(pe)),
        });
    }

    let etas: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let coherent = SqueezedProbe::new(1e4, 0.0, cfg.theta)?;
    let worst = etas
        .iter()
        .map(|&eta| branch_densities_on(&coherent, eta, axis).map(|d| (d[1].variance - 0.5).abs()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check {
        suite: "invariant",
        label: "coherent variance".into(),
        pass: worst == 0.0,
        detail: format!("max|var-1/2|={worst:e}"),
    });

    // along the squeezed quadrature, which the Bell branch meets exactly on
    // the λ = π/2 + θ axis
    let squeezed = SqueezedProbe::new(1e4, 1.5, cfg.theta)?;
    let var = |eta: f64| lossy_variance(1.5, 0.0, eta);
    let (v0, v1) = (var(0.0), var(1.0));
    let mut affine = 0.0f64;
    let mut branch = 0.0f64;
    for &eta in &etas {
        affine = affine.max((var(eta) - (v0 + eta * (v1 - v0))).abs());
        let d = branch_densities_on(&squeezed, eta, ProjectionAxis::BellPhase)?;
        branch = branch.max((d[1].variance - var(eta)).abs());
    }
    let squeezed_min = (-3.0f64).exp() / 2.0;
    checks.push(Check {
        suite: "invariant",
        label: "squeezed variance r=1.5".into(),
        pass: affine <= 1e-15 && v0 == 0.5 && (v1 - squeezed_min).abs() <= 1e-15 && branch <= 1e-15,
        detail: format!("var(0)={} var(1)={} affine_dev={affine:.1e}", sig6(v0), sig6(v1)),
    });

    let probe = |r| SqueezedProbe::new(1e4, r, cfg.theta);
    let (p0, p1) = (probe(0.0)?, probe(1.0)?);
    let mut margin = f64::INFINITY;
    for i in 1..=50 {
        let eta = i as f64 / 50.0;
        let gap = discrimination_error_on(&p0, eta, axis)?.p_error - discrimination_error_on(&p1, eta, axis)?.p_error;
        margin = margin.min(gap);
    }
    checks.push(Check {
        suite: "invariant",
        label: "squeezing lowers P_E".into(),
        pass: margin > 0.0,
        detail: format!("min P_E(r=0)-P_E(r=1)={}", sig6(margin)),
    });

    let mut problem = OptimizationProblem::new(0.95, CodeSpec::new(7)?, true)?;
    problem.theta = cfg.theta;
    problem.budget = qubus_core::LossBudget::symmetric(0.95, cfg.flip_model)?;
    problem.options = cfg.options;
    let rep = optimize(&problem)?;
    let beaten = rep.certificate.samples().filter(|&(_, _, e)| e < rep.e_tot_min).count();
    checks.push(Check {
        suite: "invariant",
        label: "optimizer certificate".into(),
        pass: beaten == 0 && rep == optimize(&problem)?,
        detail: format!("E_min={} grid_below={beaten}", sig6(rep.e_tot_min)),
    });
    Ok(checks)
}

/// Every check in table order.
pub fn checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut all = monte_carlo(cfg, cfg.options.axis)?;
    all.extend(gamma(cfg)?);
    all.extend(qecc()?);
    all.extend(invariants(cfg)?);
    Ok(all)
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    println!(
        "verify seed={} samples={} quad_tol={:e} gamma={:?} axis={:?}",
        cfg.oracle.seed, cfg.oracle.samples, cfg.oracle.quad_tol, cfg.options.gamma, cfg.options.axis
    );
    let all = checks(cfg)?;
    for c in &all {
        println!("{}", c.line());
    }
    let failed = all.iter().filter(|c| !c.pass).count();
    println!("{} of {} checks passed", all.len() - failed, all.len());
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: all.len(),
        });
    }
    Ok(())
}
