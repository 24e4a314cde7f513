//! Acceptance gate. Each test prints one `PASS`/`FAIL` line straight to
//! stderr (bypassing capture) and then asserts the same verdict.

use std::io::Write;
use std::process::Command;

use qubus_core::discrimination::discrimination_error_on;
use qubus_core::oracle::{enumerate_code, mc_discrimination, quad_gamma, OracleConfig};
use qubus_core::probe::{branch_densities_on, lossy_variance, ProjectionAxis};
use qubus_core::qecc::logical_rates;
use qubus_core::{
    threshold_transmittance, CodeSpec, GammaConvention, OptimizationProblem, SqueezedProbe, FT_THRESHOLD,
    KNILL_THRESHOLD,
};

const THETA: f64 = 0.01;
const NBAR: f64 = 1e4;
const AXIS: ProjectionAxis = ProjectionAxis::Bisector;

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("{verdict} criterion {id:>2} {name}: {detail}\n");
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn probe(r: f64) -> SqueezedProbe {
    SqueezedProbe::new(NBAR, r, THETA).unwrap()
}

fn qubus(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qubus")).args(args).output().unwrap()
}

#[test]
fn c01_lossless_anchor() {
    let res = discrimination_error_on(&probe(0.0), 1.0, AXIS).unwrap();
    let pass = (res.p_error - 0.23).abs() <= 0.06;
    report(1, "lossless P_E anchor", pass, format!("P_E={:.6} target 0.23±0.06", res.p_error));
}

#[test]
fn c02_loss_limit() {
    let mut worst = 0.0f64;
    for r in [0.0, 0.5, 1.0, 1.5] {
        let pe = discrimination_error_on(&probe(r), 1e-4, AXIS).unwrap().p_error;
        worst = worst.max((pe - 0.5).abs());
    }
    report(2, "loss limit", worst <= 1e-3, format!("max|P_E(1e-4)-0.5|={worst:.2e}"));
}

#[test]
fn c03_variance_curve() {
    let etas: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let coherent = probe(0.0);
    let squeezed = probe(1.5);
    let mut coherent_dev = 0.0f64;
    let mut affine_dev = 0.0f64;
    let mut branch_dev = 0.0f64;
    let var = |eta: f64| lossy_variance(1.5, 0.0, eta);
    let (v0, v1) = (var(0.0), var(1.0));
    for &eta in &etas {
        for axis in [ProjectionAxis::Bisector, ProjectionAxis::BellPhase] {
            for d in branch_densities_on(&coherent, eta, axis).unwrap() {
                coherent_dev = coherent_dev.max((d.variance - 0.5).abs());
            }
        }
        affine_dev = affine_dev.max((var(eta) - (v0 + eta * (v1 - v0))).abs());
        // the Bell branch is read along its squeezed quadrature on this axis
        let d = branch_densities_on(&squeezed, eta, ProjectionAxis::BellPhase).unwrap();
        branch_dev = branch_dev.max((d[1].variance - var(eta)).abs());
    }
    let e3 = (-3.0f64).exp() / 2.0;
    let pass = coherent_dev == 0.0
        && affine_dev <= 1e-15
        && v0 == 0.5
        && (v1 - e3).abs() <= 1e-15
        && branch_dev <= 1e-15;
    report(
        3,
        "variance curve",
        pass,
        format!(
            "coherent dev={coherent_dev:e} var(0)={v0} var(1)={v1:.15e} (e^-3/2={e3:.15e}) affine dev={affine_dev:.1e}"
        ),
    );
}

#[test]
fn c04_squeezing_advantage() {
    let (p0, p1) = (probe(0.0), probe(1.0));
    let mut margin = f64::INFINITY;
    let mut at = 0.0;
    for i in 1..=50 {
        let eta = i as f64 / 50.0;
        let gap = discrimination_error_on(&p0, eta, AXIS).unwrap().p_error
            - discrimination_error_on(&p1, eta, AXIS).unwrap().p_error;
        if gap < margin {
            margin = gap;
            at = eta;
        }
    }
    report(4, "squeezing advantage", margin > 0.0, format!("min P_E(r=0)-P_E(r=1)={margin:.3e} at eta={at}"));
}

#[test]
fn c05_threshold_table() {
    let rows = [
        ("coherent n=1", false, 1, KNILL_THRESHOLD, 0.999),
        ("squeezed n=1", true, 1, KNILL_THRESHOLD, 0.993),
        ("coherent n=7 1e-2", false, 7, KNILL_THRESHOLD, 0.94),
        ("squeezed n=7 1e-2", true, 7, KNILL_THRESHOLD, 0.87),
        ("coherent n=7 4e-4", false, 7, FT_THRESHOLD, 0.99),
        ("squeezed n=7 4e-4", true, 7, FT_THRESHOLD, 0.954),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, squeezed, n, target, expect) in rows {
        let mut template = OptimizationProblem::new(1.0, CodeSpec::new(n).unwrap(), squeezed).unwrap();
        template.theta = THETA;
        let star = threshold_transmittance(&template, target, 1e-3).unwrap().eta_star();
        let ok = star.is_some_and(|s| (s - expect).abs() <= 0.02);
        pass &= ok;
        let got = star.map_or("unreachable".to_string(), |s| format!("{s:.3}"));
        parts.push(format!("{label}: {got} vs {expect}{}", if ok { "" } else { " MISS" }));
    }
    report(5, "threshold table", pass, parts.join("; "));
}

#[test]
fn c06_monte_carlo_oracle() {
    let mut worst = 0.0f64;
    let mut failed = 0;
    let mut index = 0u64;
    for n_bar in [1e4, 4e4] {
        for r in [0.0, 1.0] {
            for eta in [1.0, 0.95, 0.9] {
                let p = SqueezedProbe::new(n_bar, r, THETA).unwrap();
                let exact = discrimination_error_on(&p, eta, AXIS).unwrap();
                let config = OracleConfig {
                    seed: 0x00AC_CE97 + index,
                    samples: 10_000_000,
                    ..OracleConfig::default()
                };
                index += 1;
                let est = mc_discrimination(&p, eta, AXIS, &exact.window.unwrap(), &config).unwrap();
                worst = worst.max(((est.p_error - exact.p_error) / est.std_err).abs());
                if !est.agrees_with(exact.p_error, 3.0) {
                    failed += 1;
                }
            }
        }
    }
    report(6, "Monte Carlo oracle", failed == 0, format!("12 points, {failed} outside 3σ, max|z|={worst:.2}"));
}

#[test]
fn c07_gamma_oracle() {
    let config = OracleConfig::default();
    let mut worst = 0.0f64;
    let mut unity = 0.0f64;
    for r in [0.0f64, 0.75, 1.5] {
        for beta in [1.0, 10.0, 30.0, 100.0, 300.0] {
            let p = SqueezedProbe::new(beta * beta + r.sinh().powi(2), r, THETA).unwrap();
            for tau in [1e-3, 1e-2, 0.1, 0.5, 1.0] {
                let exact = qubus_core::dephasing::wigner_overlap_gamma_with(&p, tau, GammaConvention::Overlap).unwrap();
                let quad = quad_gamma(&p, tau, GammaConvention::Overlap, &config).unwrap();
                worst = worst.max((quad / exact - 1.0).abs());
            }
        }
        let p = SqueezedProbe { theta: 0.0, ..probe(r) };
        let exact = qubus_core::dephasing::wigner_overlap_gamma_with(&p, 0.5, GammaConvention::Overlap).unwrap();
        let quad = quad_gamma(&p, 0.5, GammaConvention::Overlap, &config).unwrap();
        unity = unity.max((exact - 1.0).abs()).max((quad - 1.0).abs());
    }
    let pass = worst <= 1e-6 && unity <= 1e-10;
    report(7, "gamma oracle", pass, format!("75 points max rel={worst:.2e}; max|gamma(0)-1|={unity:.1e}"));
}

#[test]
fn c08_qecc_closed_forms() {
    let mut worst = 0.0f64;
    let mut leads = Vec::new();
    let mut pass = true;
    for (n, coef, power) in [(3, 3.0, 2), (7, 35.0, 4)] {
        let code = CodeSpec::new(n).unwrap();
        for p in [0.001, 0.01, 0.1, 0.3, 0.5] {
            let (_, closed) = logical_rates(1.0 - p, p, code);
            worst = worst.max((closed - enumerate_code(p, n).unwrap()).abs());
        }
        let p: f64 = 1e-3;
        let lead = enumerate_code(p, n).unwrap() / p.powi(power);
        pass &= (lead / coef - 1.0).abs() <= 0.05;
        leads.push(format!("n={n} lead={lead:.4} (expect {coef})"));
    }
    pass &= worst <= 1e-12;
    report(8, "QECC closed forms", pass, format!("max diff={worst:.1e}; {}", leads.join(", ")));
}

#[test]
fn c09_figure_fig8a() {
    let out = qubus(&["figure", "fig8a"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (lowest, highest) = (col("squeezed_n7"), col("coherent_n1"));
    let curves = header.len() - 1;

    let mut monotone = true;
    for c in 1..=curves {
        monotone &= rows.windows(2).all(|w| w[1][c] <= w[0][c]);
    }
    let mut ordered = true;
    let mut checked = 0;
    for row in rows.iter().filter(|row| row[0] >= 0.85) {
        checked += 1;
        for c in 1..=curves {
            // at η = 1 every curve is exactly zero, so ties are allowed
            ordered &= row[lowest] <= row[c] && row[highest] >= row[c];
        }
    }
    let pass = out.status.success() && curves == 5 && monotone && ordered && checked > 0;
    report(
        9,
        "figure fig8a",
        pass,
        format!("{curves} curves, {} rows, monotone={monotone}, ordering holds at {checked} points in [0.85,1]={ordered}", rows.len()),
    );
}

#[test]
fn c10_verify_determinism() {
    let first = qubus(&["verify", "--seed", "12345"]);
    let second = qubus(&["verify", "--seed", "12345"]);
    let same = first.stdout == second.stdout && first.status.code() == second.status.code();
    let pass = same && first.status.success() && !first.stdout.is_empty();
    report(
        10,
        "verify determinism",
        pass,
        format!("{} bytes, identical={same}, exit={:?}", first.stdout.len(), first.status.code()),
    );
}
