use clap::ValueEnum;
use qubus_core::optimizer::{
    evaluate_with, loss_db, optimize as run_optimize, sweep_eta, threshold_transmittance, ErrorReport, Evaluation,
    DEFAULT_R_MAX,
};
use qubus_core::{CodeSpec, FlipModel, LossBudget, OptimizationProblem, Threshold, FT_THRESHOLD, KNILL_THRESHOLD};

use crate::config::{Amplitude, Loss, RunConfig, Squeezing, DEFAULT_NBAR};
use crate::output::{sig6, write_csv};
use crate::CliError;

/// Bisection resolution for thresholds.
pub const THRESHOLD_RESOLUTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Si photodiode efficiency 0.93 as the only loss
    SiDetector,
    /// Microtoroid coupling 0.95 at each of the two cavities
    Microtoroid,
    /// Both together: total loss 0.1 and 0.2
    Combined,
}

impl Scenario {
    pub fn losses(self) -> Vec<Loss> {
        match self {
            Scenario::SiDetector => vec![Loss::Total(0.93)],
            Scenario::Microtoroid => vec![Loss::Segments(0.95, 0.95)],
            Scenario::Combined => vec![Loss::Total(0.9), Loss::Total(0.8)],
        }
    }
}

fn budget_for(loss: Loss, flip_model: FlipModel) -> Result<LossBudget, CliError> {
    Ok(match loss {
        Loss::Total(eta) => LossBudget::symmetric(eta, flip_model)?,
        Loss::Segments(a, b) => LossBudget::from_segments(a, b, flip_model)?,
    })
}

/// Optimization problem for `cfg`, searching `r` as `squeezing` says and
/// pinning the amplitude if one was given.
pub fn problem_for(
    cfg: &RunConfig,
    budget: LossBudget,
    code: CodeSpec,
    squeezing: Squeezing,
) -> Result<OptimizationProblem, CliError> {
    let mut p = OptimizationProblem::new(1.0, code, true)?;
    p.theta = cfg.theta;
    p.budget = budget;
    p.options = cfg.options;
    p.r_range = match squeezing {
        Squeezing::Optimize => (0.0, DEFAULT_R_MAX),
        Squeezing::Fixed(r) => (r, r),
    };
    if let Some(a) = cfg.amplitude {
        let a = a.alpha();
        p.alpha_range = (a, a);
        p.alpha_points = 2;
    }
    Ok(p)
}

fn probe_label(squeezing: Squeezing) -> String {
    match squeezing {
        Squeezing::Optimize => "squeezed (r optimized)".into(),
        Squeezing::Fixed(0.0) => "coherent".into(),
        Squeezing::Fixed(r) => format!("squeezed (r = {})", sig6(r)),
    }
}

fn print_kv(key: &str, value: impl AsRef<str>) {
    println!("{key:<16}{}", value.as_ref());
}

fn print_evaluation(ev: &Evaluation, budget: &LossBudget) {
    print_kv("eta", sig6(budget.eta_total));
    print_kv("eta1", sig6(budget.eta1));
    print_kv("eta2", sig6(budget.eta2));
    print_kv("loss_db", sig6(loss_db(budget.eta_total)));
    print_kv("theta", sig6(ev.theta));
    print_kv("alpha", sig6(ev.alpha));
    print_kv("beta", sig6(ev.probe.beta));
    print_kv("r", sig6(ev.r));
    print_kv("code", format!("n = {}", ev.code.n()));
    print_kv("P_E", sig6(ev.p_e()));
    print_kv("p_success", sig6(ev.discrimination.p_success));
    print_kv("gamma_A", sig6(ev.flips.gamma_a));
    print_kv("gamma_B", sig6(ev.flips.gamma_b));
    print_kv("p_flip_A", sig6(ev.flips.p_flip_a));
    print_kv("p_flip_B", sig6(ev.flips.p_flip_b));
    print_kv("logical_flip_A", sig6(ev.logical.p_flip_a));
    print_kv("logical_flip_B", sig6(ev.logical.p_flip_b));
    print_kv("E_tot", sig6(ev.e_tot));
}

const ROW_HEADER: [&str; 18] = [
    "eta",
    "eta1",
    "eta2",
    "loss_db",
    "theta",
    "alpha",
    "beta",
    "r",
    "code",
    "p_e",
    "p_success",
    "gamma_a",
    "gamma_b",
    "p_flip_a",
    "p_flip_b",
    "logical_flip_a",
    "logical_flip_b",
    "e_tot",
];

fn evaluation_row(ev: &Evaluation, budget: &LossBudget) -> Vec<f64> {
    vec![
        budget.eta_total,
        budget.eta1,
        budget.eta2,
        loss_db(budget.eta_total),
        ev.theta,
        ev.alpha,
        ev.probe.beta,
        ev.r,
        ev.code.n() as f64,
        ev.p_e(),
        ev.discrimination.p_success,
        ev.flips.gamma_a,
        ev.flips.gamma_b,
        ev.flips.p_flip_a,
        ev.flips.p_flip_b,
        ev.logical.p_flip_a,
        ev.logical.p_flip_b,
        ev.e_tot,
    ]
}

fn header() -> Vec<String> {
    ROW_HEADER.iter().map(|s| s.to_string()).collect()
}

fn feasibility(e: f64) -> (&'static str, &'static str) {
    let verdict = |ok: bool| if ok { "feasible" } else { "infeasible" };
    (verdict(e <= KNILL_THRESHOLD), verdict(e <= FT_THRESHOLD))
}

fn print_report(rep: &ErrorReport, budget: &LossBudget) {
    print_evaluation(&rep.optimum, budget);
    let (knill, ft) = feasibility(rep.e_tot_min);
    print_kv("knill_1e-2", knill);
    print_kv("ft_4e-4", ft);
    print_kv("grid_points", rep.certificate.values.len().to_string());
    print_kv(
        "grid_min",
        rep.certificate.min().map_or("none".to_string(), sig6),
    );
    print_kv("refine_rounds", rep.refinement_rounds.to_string());
}

pub fn error_prob(cfg: &RunConfig) -> Result<(), CliError> {
    let budget = cfg.budget()?;
    let squeezing = cfg.r.unwrap_or(Squeezing::Fixed(0.0));
    let ev = match squeezing {
        Squeezing::Fixed(r) => {
            let alpha = cfg.amplitude.unwrap_or(Amplitude::NBar(DEFAULT_NBAR)).alpha();
            evaluate_with(cfg.theta, &budget, alpha, r, cfg.code(), cfg.options)?
        }
        Squeezing::Optimize => run_optimize(&problem_for(cfg, budget, cfg.code(), squeezing)?)?.optimum,
    };
    print_evaluation(&ev, &budget);
    if let Some(out) = &cfg.out {
        write_csv(Some(out), &header(), &[evaluation_row(&ev, &budget)])?;
    }
    Ok(())
}

pub fn optimize(cfg: &RunConfig) -> Result<(), CliError> {
    let budget = cfg.budget()?;
    let squeezing = cfg.r.unwrap_or(Squeezing::Optimize);
    let rep = run_optimize(&problem_for(cfg, budget, cfg.code(), squeezing)?)?;
    print_kv("probe", probe_label(squeezing));
    print_report(&rep, &budget);
    if let Some(out) = &cfg.out {
        write_csv(Some(out), &header(), &[evaluation_row(&rep.optimum, &budget)])?;
    }
    Ok(())
}

pub fn threshold(cfg: &RunConfig) -> Result<(), CliError> {
    let squeezing = cfg.r.unwrap_or(Squeezing::Optimize);
    let template = problem_for(cfg, LossBudget::symmetric(1.0, cfg.flip_model)?, cfg.code(), squeezing)?;
    print_kv("probe", probe_label(squeezing));
    print_kv("code", format!("n = {}", cfg.code().n()));
    print_kv("target", sig6(cfg.target));
    match threshold_transmittance(&template, cfg.target, THRESHOLD_RESOLUTION)? {
        Threshold::Reached { eta_star, report } => {
            print_kv("status", "reached");
            print_kv("eta_star", sig6(eta_star));
            print_kv("loss_db", sig6(loss_db(eta_star)));
            print_kv("E_tot", sig6(report.e_tot_min));
            print_kv("alpha_opt", sig6(report.alpha_opt));
            print_kv("beta_opt", sig6(report.beta_opt()));
            print_kv("r_opt", sig6(report.r_opt));
        }
        Threshold::Unreachable { e_at_unity } => {
            print_kv("status", "unreachable");
            print_kv("E_tot_at_eta_1", sig6(e_at_unity));
        }
    }
    Ok(())
}

/// Optimized reports over the configured grid, in grid order.
pub fn sweep_reports(cfg: &RunConfig, code: CodeSpec, squeezing: Squeezing, etas: &[f64]) -> Result<Vec<ErrorReport>, CliError> {
    let template = problem_for(cfg, LossBudget::symmetric(1.0, cfg.flip_model)?, code, squeezing)?;
    Ok(sweep_eta(&template, etas)?)
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let squeezing = cfg.r.unwrap_or(Squeezing::Optimize);
    let etas = cfg.eta_grid((0.8, 1.0), 101);
    let reports = sweep_reports(cfg, cfg.code(), squeezing, &etas)?;
    let rows: Vec<Vec<f64>> = reports
        .iter()
        .map(|rep| {
            let budget = LossBudget::symmetric(rep.eta, cfg.flip_model).expect("grid validated by the sweep");
            evaluation_row(&rep.optimum, &budget)
        })
        .collect();
    write_csv(cfg.out.as_deref(), &header(), &rows)
}

pub fn scenario(name: Scenario, cfg: &RunConfig) -> Result<(), CliError> {
    let squeezing = cfg.r.unwrap_or(Squeezing::Optimize);
    let code = cfg.code.unwrap_or(CodeSpec::new(7)?);
    let mut rows = Vec::new();
    for (i, loss) in name.losses().into_iter().enumerate() {
        if i > 0 {
            println!();
        }
        let budget = budget_for(loss, cfg.flip_model)?;
        let rep = run_optimize(&problem_for(cfg, budget, code, squeezing)?)?;
        print_kv("scenario", name.to_possible_value().expect("no skipped variants").get_name());
        print_kv("probe", probe_label(squeezing));
        print_report(&rep, &budget);
        rows.push(evaluation_row(&rep.optimum, &budget));
    }
    if let Some(out) = &cfg.out {
        write_csv(Some(out), &header(), &rows)?;
    }
    Ok(())
}
