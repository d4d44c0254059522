//! Flat `key = value` run configuration.

use std::f64::consts::PI;
use std::path::PathBuf;

use rotdirac_core::{BasisKind, BasisTruncation, PauliConfig, PhysicalConfig};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Config(format!("format must be csv or json, got `{other}`"))),
        }
    }
}

/// Initial state for `evolve`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Eigenvector of H_eff matched to the k-th tracked basis mode.
    Tracked(usize),
    /// k-th eigenvector of H_eff in ascending energy order.
    Eigen(usize),
    /// Seeded random superposition.
    Random,
    /// Explicit coefficients (re, im) over the basis, normalized on use.
    Coefficients(Vec<(f64, f64)>),
}

/// End of the sampled time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeEnd {
    Period,
    At(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Upper limit on the truncation bound.
    pub leakage: f64,
    /// Upper limit on eigenpair residuals.
    pub residual: f64,
    /// Local relative and absolute tolerance of the brute-force integrator.
    pub integrator: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalConfig,
    pub pauli: Option<PauliConfig>,
    pub basis: BasisKind,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
    pub initial_state: InitialState,
    pub t_end: TimeEnd,
    pub t_samples: usize,
    /// Negative control: evaluate the pipeline with the wrong-sign rotating frame.
    pub sabotage: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            physical: PhysicalConfig::default(),
            pauli: None,
            basis: BasisKind::OscillatorShell { shells: 2 },
            tolerances: Tolerances { leakage: 1e-2, residual: 1e-9, integrator: 1e-12 },
            out: PathBuf::from("results"),
            format: Format::Csv,
            seed: 1,
            initial_state: InitialState::Tracked(0),
            t_end: TimeEnd::Period,
            t_samples: 17,
            sabotage: false,
        }
    }
}

/// Real number, optionally written with `pi`: `0.5`, `pi`, `pi/3`, `2*pi`, `10*pi/4`.
fn parse_real(key: &str, value: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("{key}: cannot parse `{value}` as a number"));
    let compact: String = value.chars().filter(|c| !c.is_whitespace()).collect();
    let (numerator, denominator) = match compact.split_once('/') {
        Some((n, d)) => (n.to_string(), Some(d.parse::<f64>().map_err(|_| bad())?)),
        None => (compact.clone(), None),
    };
    let base = if let Some(factor) = numerator.strip_suffix("pi") {
        let factor = factor.strip_suffix('*').unwrap_or(factor);
        let factor = match factor {
            "" => 1.0,
            "-" => -1.0,
            f => f.parse::<f64>().map_err(|_| bad())?,
        };
        factor * PI
    } else {
        numerator.parse::<f64>().map_err(|_| bad())?
    };
    let x = match denominator {
        Some(d) => base / d,
        None => base,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse `{value}` as an integer")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got `{value}`"))),
    }
}

fn parse_initial_state(value: &str) -> Result<InitialState, CliError> {
    let bad = || CliError::Config(format!("initial_state: cannot parse `{value}`"));
    if value == "random" {
        return Ok(InitialState::Random);
    }
    let (kind, arg) = value.split_once(':').ok_or_else(bad)?;
    match kind {
        "tracked" => Ok(InitialState::Tracked(arg.trim().parse().map_err(|_| bad())?)),
        "eigen" => Ok(InitialState::Eigen(arg.trim().parse().map_err(|_| bad())?)),
        "coefficients" => {
            let coeffs = arg
                .split(';')
                .map(|pair| {
                    let (re, im) = pair.split_once(',').ok_or_else(bad)?;
                    Ok((parse_real("initial_state", re)?, parse_real("initial_state", im)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(InitialState::Coefficients(coeffs))
        }
        _ => Err(bad()),
    }
}

impl RunConfig {
    /// Parse the flat format: one `key = value` per line, `#` starts a comment.
    /// Unknown and repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen = std::collections::HashSet::new();
        let mut basis_name = "shell".to_string();
        let mut shells = 2u32;
        let mut trunc = BasisTruncation::new(1, 1, 1, true);
        let mut mu_a: Option<f64> = None;
        let mut pauli_charge: Option<i8> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
            let p = &mut cfg.physical;
            match key {
                "b" => p.b = parse_real(key, value)?,
                "charge_sign" => p.charge_sign = parse_int(key, value)?,
                "theta_b" => p.theta_b = parse_real(key, value)?,
                "omega" => p.omega = parse_real(key, value)?,
                "d" => p.d = parse_real(key, value)?,
                "basis" => basis_name = value.to_string(),
                "shells" => shells = parse_int(key, value)?,
                "n_z_max" => trunc.n_z_max = parse_int(key, value)?,
                "n_rho_max" => trunc.n_rho_max = parse_int(key, value)?,
                "m_abs_max" => trunc.m_abs_max = parse_int(key, value)?,
                "include_negative_energy" => trunc.include_negative_energy = parse_bool(key, value)?,
                "mu_a" => mu_a = Some(parse_real(key, value)?),
                "pauli_charge" => pauli_charge = Some(parse_int(key, value)?),
                "leakage_tolerance" => cfg.tolerances.leakage = parse_real(key, value)?,
                "residual_tolerance" => cfg.tolerances.residual = parse_real(key, value)?,
                "integrator_tolerance" => cfg.tolerances.integrator = parse_real(key, value)?,
                "out" => cfg.out = PathBuf::from(value),
                "format" => cfg.format = value.parse()?,
                "seed" => cfg.seed = parse_int(key, value)?,
                "initial_state" => cfg.initial_state = parse_initial_state(value)?,
                "t_end" => {
                    cfg.t_end = if value == "period" { TimeEnd::Period } else { TimeEnd::At(parse_real(key, value)?) }
                }
                "t_samples" => cfg.t_samples = parse_int(key, value)?,
                "sabotage" => cfg.sabotage = parse_bool(key, value)?,
                _ => return Err(CliError::Config(format!("line {}: unknown key `{key}`", lineno + 1))),
            }
        }

        cfg.basis = match basis_name.as_str() {
            "shell" => BasisKind::OscillatorShell { shells },
            "box" => BasisKind::LandauBox(trunc),
            other => return Err(CliError::Config(format!("basis must be shell or box, got `{other}`"))),
        };
        if mu_a.is_none() && pauli_charge.is_some() {
            return Err(CliError::Config("pauli_charge requires mu_a".into()));
        }
        cfg.pauli = match mu_a {
            Some(mu) => Some(
                PauliConfig::new(cfg.physical, mu, pauli_charge.unwrap_or(cfg.physical.charge_sign))
                    .map_err(|e| CliError::Config(e.to_string()))?,
            ),
            None => None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.physical.validate().map_err(|e| CliError::Config(e.to_string()))?;
        let t = &self.tolerances;
        for (name, v) in [
            ("leakage_tolerance", t.leakage),
            ("residual_tolerance", t.residual),
            ("integrator_tolerance", t.integrator),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.t_samples < 2 {
            return Err(CliError::Config("t_samples must be at least 2".into()));
        }
        if let TimeEnd::At(t) = self.t_end {
            if t < 0.0 {
                return Err(CliError::Config("t_end must be nonnegative".into()));
            }
        }
        Ok(())
    }
}
