//! CSV data for the figures: discrimination error and variance against
//! transmittance, total error against amplitude, and optimized curves.

use clap::ValueEnum;
use qubus_core::discrimination::discrimination_error_on;
use qubus_core::optimizer::{evaluate_with, ErrorReport};
use qubus_core::probe::branch_densities_on;
use qubus_core::{CodeSpec, LossBudget, SqueezedProbe};

use crate::commands::sweep_reports;
use crate::config::{Amplitude, RunConfig, Squeezing, DEFAULT_NBAR};
use crate::output::write_csv;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    /// Discrimination error against transmittance for four squeezings
    Fig5a,
    /// Measured quadrature variance against transmittance
    Fig5b,
    /// Total error against amplitude
    Fig7,
    /// Optimized total error against transmittance
    Fig8a,
    /// Optimal amplitude (α coherent, β squeezed)
    Fig8b,
    /// Optimal squeezing
    Fig8c,
}

const FIG5_SQUEEZING: [(f64, &str); 4] = [(0.0, "r0"), (0.5, "r0.5"), (1.0, "r1.0"), (1.5, "r1.5")];

/// `(r, η)` pairs of the amplitude scan.
const FIG7_CURVES: [(f64, f64, &str); 4] = [
    (0.0, 0.9, "r0_eta0.9"),
    (0.0, 0.99, "r0_eta0.99"),
    (0.6, 0.9, "r0.6_eta0.9"),
    (0.8, 0.99, "r0.8_eta0.99"),
];

/// `(squeezed, code length, column)` of the optimized curves.
pub const FIG8_CURVES: [(bool, usize, &str); 5] = [
    (false, 1, "coherent_n1"),
    (false, 3, "coherent_n3"),
    (true, 3, "squeezed_n3"),
    (false, 7, "coherent_n7"),
    (true, 7, "squeezed_n7"),
];

pub const FIG8_ETA_RANGE: (f64, f64) = (0.8, 1.0);
pub const FIG8_POINTS: usize = 201;

fn nbar(cfg: &RunConfig) -> f64 {
    let a = cfg.amplitude.unwrap_or(Amplitude::NBar(DEFAULT_NBAR)).alpha();
    a * a
}

fn header(first: &str, names: impl IntoIterator<Item = impl Into<String>>) -> Vec<String> {
    std::iter::once(first.to_string()).chain(names.into_iter().map(Into::into)).collect()
}

fn fig5(cfg: &RunConfig, variance: bool) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let probes = FIG5_SQUEEZING
        .iter()
        .map(|&(r, _)| SqueezedProbe::new(nbar(cfg), r, cfg.theta))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for eta in cfg.eta_grid((0.0, 1.0), 101) {
        let mut row = vec![eta];
        for p in &probes {
            row.push(if variance {
                branch_densities_on(p, eta, cfg.options.axis)?[1].variance
            } else {
                discrimination_error_on(p, eta, cfg.options.axis)?.p_error
            });
        }
        rows.push(row);
    }
    Ok((header("eta", FIG5_SQUEEZING.iter().map(|c| c.1)), rows))
}

fn fig7(cfg: &RunConfig) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let budgets = FIG7_CURVES
        .iter()
        .map(|&(_, eta, _)| LossBudget::symmetric(eta, cfg.flip_model))
        .collect::<Result<Vec<_>, _>>()?;
    let n = cfg.points.unwrap_or(201);
    let mut rows = Vec::new();
    for i in 0..n {
        // log-spaced over [1, 10⁴]
        let alpha = 10f64.powf(4.0 * i as f64 / (n - 1) as f64);
        let mut row = vec![alpha];
        for (&(r, _, _), budget) in FIG7_CURVES.iter().zip(&budgets) {
            // below the squeezing photon number the point does not exist
            let e = evaluate_with(cfg.theta, budget, alpha, r, cfg.code(), cfg.options).map_or(f64::NAN, |ev| ev.e_tot);
            row.push(e);
        }
        rows.push(row);
    }
    Ok((header("alpha", FIG7_CURVES.iter().map(|c| c.2)), rows))
}

/// The five optimized curves, each as reports in grid order.
pub fn fig8_curves(cfg: &RunConfig, etas: &[f64]) -> Result<Vec<Vec<ErrorReport>>, CliError> {
    FIG8_CURVES
        .iter()
        .map(|&(squeezed, n, _)| {
            let squeezing = if squeezed { Squeezing::Optimize } else { Squeezing::Fixed(0.0) };
            sweep_reports(cfg, CodeSpec::new(n)?, squeezing, etas)
        })
        .collect()
}

fn fig8(cfg: &RunConfig, name: FigureName) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let etas = cfg.eta_grid(FIG8_ETA_RANGE, FIG8_POINTS);
    let curves = fig8_curves(cfg, &etas)?;
    let columns: Vec<usize> = match name {
        FigureName::Fig8c => (0..FIG8_CURVES.len()).filter(|&i| FIG8_CURVES[i].0).collect(),
        _ => (0..FIG8_CURVES.len()).collect(),
    };
    let value = |i: usize, rep: &ErrorReport| match name {
        FigureName::Fig8a => rep.e_tot_min,
        // the squeezed curves show the adjusted amplitude β
        FigureName::Fig8b if FIG8_CURVES[i].0 => rep.beta_opt(),
        FigureName::Fig8b => rep.alpha_opt,
        _ => rep.r_opt,
    };
    let rows = etas
        .iter()
        .enumerate()
        .map(|(j, &eta)| std::iter::once(eta).chain(columns.iter().map(|&i| value(i, &curves[i][j]))).collect())
        .collect();
    let prefix = match name {
        FigureName::Fig8a => "",
        FigureName::Fig8b => "amplitude_",
        _ => "r_",
    };
    Ok((header("eta", columns.iter().map(|&i| format!("{prefix}{}", FIG8_CURVES[i].2))), rows))
}

pub fn emit(name: FigureName, cfg: &RunConfig) -> Result<(), CliError> {
    let (header, rows) = match name {
        FigureName::Fig5a => fig5(cfg, false)?,
        FigureName::Fig5b => fig5(cfg, true)?,
        FigureName::Fig7 => fig7(cfg)?,
        _ => fig8(cfg, name)?,
    };
    write_csv(cfg.out.as_deref(), &header, &rows)
}
