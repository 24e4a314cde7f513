//! Command-line flags, the `key = value` config file, and their merge into a
//! validated [`RunConfig`]. Flags beat the file, the file beats defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use qubus_core::oracle::OracleConfig;
use qubus_core::optimizer::{ModelOptions, DEFAULT_THETA};
use qubus_core::{BetaConvention, CodeSpec, FlipModel, GammaConvention, LossBudget, ProjectionAxis, KNILL_THRESHOLD};

use crate::CliError;

/// Squeezing as given on the command line: a number or `opt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Squeezing {
    Optimize,
    Fixed(f64),
}

impl FromStr for Squeezing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("opt") {
            return Ok(Squeezing::Optimize);
        }
        match s.parse::<f64>() {
            Ok(r) if r >= 0.0 && r.is_finite() => Ok(Squeezing::Fixed(r)),
            _ => Err(format!("expected a non-negative number or `opt`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlipModelArg {
    Environment,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaArg {
    Overlap,
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BetaArg {
    /// `β² = α² − sinh² r`
    Sinh2,
    /// `β² = α² − sinh r`
    Sinh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    /// `λ = (π + θ)/2`
    Bisector,
    /// `λ = π/2 + θ`
    Bell,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Conditional phase shift per atom [rad]
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Mean photon number of the probe
    #[arg(long, global = true, conflicts_with = "alpha")]
    pub nbar: Option<f64>,
    /// Coherent amplitude before photon-number adjustment
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Squeezing amplitude, or `opt` to optimize it
    #[arg(long, global = true)]
    pub r: Option<Squeezing>,
    /// Total transmittance
    #[arg(long, global = true, conflicts_with_all = ["eta1", "eta2"])]
    pub eta: Option<f64>,
    /// Transmittance from atom A to atom B
    #[arg(long, global = true, requires = "eta2")]
    pub eta1: Option<f64>,
    /// Transmittance from atom B to the detector
    #[arg(long, global = true, requires = "eta1")]
    pub eta2: Option<f64>,
    /// Repetition code length (odd)
    #[arg(long, global = true)]
    pub code: Option<usize>,
    #[arg(long = "flip-model", global = true, value_enum)]
    pub flip_model: Option<FlipModelArg>,
    /// Error target for thresholds
    #[arg(long, global = true)]
    pub target: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo samples per check
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Write CSV here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` file with defaults for any of these flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// How the flip overlap is read off the Wigner overlap
    #[arg(long, global = true, value_enum)]
    pub gamma: Option<GammaArg>,
    /// Photon-number adjustment of the amplitude
    #[arg(long = "beta-formula", global = true, value_enum)]
    pub beta_formula: Option<BetaArg>,
    /// Homodyne projection axis
    #[arg(long, global = true, value_enum)]
    pub axis: Option<AxisArg>,
    /// Lower end of the transmittance grid
    #[arg(long = "eta-min", global = true)]
    pub eta_min: Option<f64>,
    /// Upper end of the transmittance grid
    #[arg(long = "eta-max", global = true)]
    pub eta_max: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    pub points: Option<usize>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("config: cannot parse `{value}` for `{key}`")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true).map_err(|_| CliError::Usage(format!("config: invalid value `{value}` for `{key}`")))
}

impl Flags {
    /// Fills unset flags from a config file. A flag from either mutually
    /// exclusive group shadows the whole group in the file.
    pub fn merge_file(&mut self, text: &str) -> Result<(), CliError> {
        let mut file = Flags::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim().replace('_', "-"), value.trim());
            match key.as_str() {
                "theta" => file.theta = Some(parse_value(&key, value)?),
                "nbar" => file.nbar = Some(parse_value(&key, value)?),
                "alpha" => file.alpha = Some(parse_value(&key, value)?),
                "r" => file.r = Some(value.parse().map_err(CliError::Usage)?),
                "eta" => file.eta = Some(parse_value(&key, value)?),
                "eta1" => file.eta1 = Some(parse_value(&key, value)?),
                "eta2" => file.eta2 = Some(parse_value(&key, value)?),
                "code" => file.code = Some(parse_value(&key, value)?),
                "flip-model" => file.flip_model = Some(parse_enum(&key, value)?),
                "target" => file.target = Some(parse_value(&key, value)?),
                "seed" => file.seed = Some(parse_value(&key, value)?),
                "samples" => file.samples = Some(parse_value(&key, value)?),
                "out" => file.out = Some(PathBuf::from(value)),
                "gamma" => file.gamma = Some(parse_enum(&key, value)?),
                "beta-formula" => file.beta_formula = Some(parse_enum(&key, value)?),
                "axis" => file.axis = Some(parse_enum(&key, value)?),
                "eta-min" => file.eta_min = Some(parse_value(&key, value)?),
                "eta-max" => file.eta_max = Some(parse_value(&key, value)?),
                "points" => file.points = Some(parse_value(&key, value)?),
                other => return Err(CliError::Usage(format!("config: unknown key `{other}`"))),
            }
        }
        if file.nbar.is_some() && file.alpha.is_some() {
            return Err(CliError::Usage("config: `nbar` and `alpha` are mutually exclusive".into()));
        }
        if file.eta.is_some() && (file.eta1.is_some() || file.eta2.is_some()) {
            return Err(CliError::Usage("config: `eta` excludes `eta1`/`eta2`".into()));
        }

        if self.nbar.is_none() && self.alpha.is_none() {
            self.nbar = file.nbar;
            self.alpha = file.alpha;
        }
        if self.eta.is_none() && self.eta1.is_none() && self.eta2.is_none() {
            self.eta = file.eta;
            self.eta1 = file.eta1;
            self.eta2 = file.eta2;
        }
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f; } )* };
        }
        fill!(theta, r, code, flip_model, target, seed, samples, out, gamma, beta_formula, axis, eta_min, eta_max, points);
        Ok(())
    }

    pub fn load(mut self) -> Result<RunConfig, CliError> {
        if let Some(path) = self.config.clone() {
            let text = read_config(&path)?;
            self.merge_file(&text)?;
        }
        RunConfig::from_flags(self)
    }
}

fn read_config(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))
}

/// Probe amplitude as specified by the user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitude {
    NBar(f64),
    Alpha(f64),
}

impl Amplitude {
    /// The pre-adjustment amplitude `α` with `α² = n̄`.
    pub fn alpha(self) -> f64 {
        match self {
            Amplitude::NBar(n) => n.sqrt(),
            Amplitude::Alpha(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Loss {
    Total(f64),
    Segments(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub theta: f64,
    /// `None` leaves the amplitude to the command (fixed or optimized).
    pub amplitude: Option<Amplitude>,
    pub r: Option<Squeezing>,
    pub loss: Loss,
    /// `None` leaves the code length to the command.
    pub code: Option<CodeSpec>,
    pub flip_model: FlipModel,
    pub target: f64,
    pub oracle: OracleConfig,
    pub out: Option<PathBuf>,
    pub options: ModelOptions,
    pub eta_range: Option<(f64, f64)>,
    pub points: Option<usize>,
}

pub const DEFAULT_NBAR: f64 = 1e4;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg.into()))
    }
}

fn check_eta(name: &str, eta: f64) -> Result<(), CliError> {
    check(eta > 0.0 && eta <= 1.0, format!("{name} must lie in (0, 1], got {eta}"))
}

impl RunConfig {
    pub fn from_flags(f: Flags) -> Result<Self, CliError> {
        let theta = f.theta.unwrap_or(DEFAULT_THETA);
        check(
            theta > 0.0 && theta < std::f64::consts::FRAC_PI_4,
            format!("theta must lie in (0, pi/4), got {theta}"),
        )?;
        let amplitude = match (f.nbar, f.alpha) {
            (Some(_), Some(_)) => return Err(CliError::Usage("--nbar and --alpha are mutually exclusive".into())),
            (Some(n), None) => {
                check(n > 0.0 && n.is_finite(), format!("nbar must be positive, got {n}"))?;
                Some(Amplitude::NBar(n))
            }
            (None, Some(a)) => {
                check(a > 0.0 && a.is_finite(), format!("alpha must be positive, got {a}"))?;
                Some(Amplitude::Alpha(a))
            }
            (None, None) => None,
        };
        let loss = match (f.eta, f.eta1, f.eta2) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::Usage("--eta excludes --eta1/--eta2".into()))
            }
            (Some(e), None, None) => {
                check_eta("eta", e)?;
                Loss::Total(e)
            }
            (None, Some(a), Some(b)) => {
                check_eta("eta1", a)?;
                check_eta("eta2", b)?;
                Loss::Segments(a, b)
            }
            (None, None, None) => Loss::Total(1.0),
            _ => return Err(CliError::Usage("--eta1 and --eta2 go together".into())),
        };
        let code = match f.code {
            Some(n) => {
                check(n >= 1, "code length must be at least 1")?;
                Some(CodeSpec::new(n).map_err(|_| CliError::Usage(format!("code length must be odd, got {n}")))?)
            }
            None => None,
        };
        let target = f.target.unwrap_or(KNILL_THRESHOLD);
        check(target > 0.0 && target < 1.0, format!("target must lie in (0, 1), got {target}"))?;
        let mut oracle = OracleConfig::default();
        if let Some(seed) = f.seed {
            oracle.seed = seed;
        }
        if let Some(samples) = f.samples {
            check(samples > 0, "samples must be positive")?;
            oracle.samples = samples;
        }
        let options = ModelOptions {
            gamma: match f.gamma.unwrap_or(GammaArg::Overlap) {
                GammaArg::Overlap => GammaConvention::Overlap,
                GammaArg::Amplitude => GammaConvention::Amplitude,
            },
            beta: match f.beta_formula.unwrap_or(BetaArg::Sinh2) {
                BetaArg::Sinh2 => BetaConvention::SinhSquared,
                BetaArg::Sinh => BetaConvention::SinhLiteral,
            },
            axis: match f.axis.unwrap_or(AxisArg::Bisector) {
                AxisArg::Bisector => ProjectionAxis::Bisector,
                AxisArg::Bell => ProjectionAxis::BellPhase,
            },
        };
        let eta_range = match (f.eta_min, f.eta_max) {
            (None, None) => None,
            (lo, hi) => {
                let (lo, hi) = (lo.unwrap_or(1e-3), hi.unwrap_or(1.0));
                check_eta("eta-min", lo)?;
                check_eta("eta-max", hi)?;
                check(lo < hi, "eta-min must be below eta-max")?;
                Some((lo, hi))
            }
        };
        if let Some(p) = f.points {
            check(p >= 2, "points must be at least 2")?;
        }
        Ok(Self {
            theta,
            amplitude,
            r: f.r,
            loss,
            code,
            flip_model: match f.flip_model.unwrap_or(FlipModelArg::Environment) {
                FlipModelArg::Environment => FlipModel::Environment,
                FlipModelArg::Literal => FlipModel::Literal,
            },
            target,
            oracle,
            out: f.out,
            options,
            eta_range,
            points: f.points,
        })
    }

    /// The code length, bare by default.
    pub fn code(&self) -> CodeSpec {
        self.code.unwrap_or_default()
    }

    pub fn budget(&self) -> Result<LossBudget, CliError> {
        Ok(match self.loss {
            Loss::Total(eta) => LossBudget::symmetric(eta, self.flip_model)?,
            Loss::Segments(a, b) => LossBudget::from_segments(a, b, self.flip_model)?,
        })
    }

    /// Evenly spaced transmittances, `default` unless overridden.
    pub fn eta_grid(&self, default: (f64, f64), default_points: usize) -> Vec<f64> {
        let (lo, hi) = self.eta_range.unwrap_or(default);
        let n = self.points.unwrap_or(default_points);
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squeezing_parses_numbers_and_opt() {
        assert_eq!("opt".parse::<Squeezing>(), Ok(Squeezing::Optimize));
        assert_eq!("1.5".parse::<Squeezing>(), Ok(Squeezing::Fixed(1.5)));
        assert!("-1".parse::<Squeezing>().is_err());
    }

    #[test]
    fn defaults() {
        let c = RunConfig::from_flags(Flags::default()).unwrap();
        assert_eq!(c.theta, 0.01);
        assert_eq!(c.loss, Loss::Total(1.0));
        assert_eq!(c.code(), CodeSpec::bare());
        assert_eq!(c.flip_model, FlipModel::Environment);
        assert_eq!(c.amplitude, None);
    }

    #[test]
    fn flags_beat_file() {
        let mut f = Flags {
            eta: Some(0.9),
            theta: Some(0.02),
            ..Default::default()
        };
        f.merge_file("# comment\ntheta = 0.03\neta1 = 0.5\neta2 = 0.5\ncode = 7\nflip_model = literal\n")
            .unwrap();
        let c = RunConfig::from_flags(f).unwrap();
        assert_eq!(c.theta, 0.02);
        assert_eq!(c.loss, Loss::Total(0.9));
        assert_eq!(c.code().n(), 7);
        assert_eq!(c.flip_model, FlipModel::Literal);
    }

    #[test]
    fn file_conflicts_and_garbage_are_usage_errors() {
        let mut f = Flags::default();
        assert!(f.merge_file("nbar = 1\nalpha = 2\n").is_err());
        assert!(Flags::default().merge_file("colour = red\n").is_err());
        assert!(Flags::default().merge_file("theta 0.1\n").is_err());
        assert!(Flags::default().merge_file("eta = x\n").is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        for f in [
            Flags {
                eta: Some(0.0),
                ..Default::default()
            },
            Flags {
                code: Some(4),
                ..Default::default()
            },
            Flags {
                theta: Some(1.0),
                ..Default::default()
            },
            Flags {
                eta1: Some(0.9),
                ..Default::default()
            },
        ] {
            assert!(matches!(RunConfig::from_flags(f), Err(CliError::Usage(_))));
        }
    }
}
