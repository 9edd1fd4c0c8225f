//! Run configuration: schema, parsing, defaults and validation.
//!
//! Rates are quoted in units of the pulse coupling Γ, so Γ = 1 throughout and
//! times are in units of 1/Γ.

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use qpulse_core::{optimal_pulse, Params, Pulse};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Dynamics,
    CompareShapes,
    OptimalPulse,
    MinTime,
    Power,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Dynamics => "dynamics",
            Self::CompareShapes => "compare-shapes",
            Self::OptimalPulse => "optimal-pulse",
            Self::MinTime => "min-time",
            Self::Power => "power",
            Self::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Square,
    DecayExp,
    Gaussian,
    Delta,
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    CouplingOverGammaPulse,
    GammaTProduct,
    GammaEnvOverGammaPulse,
}

impl Axis {
    pub fn column(self) -> &'static str {
        match self {
            Self::CouplingOverGammaPulse => "f (Gamma)",
            Self::GammaTProduct => "T (1/Gamma)",
            Self::GammaEnvOverGammaPulse => "Gamma_env (Gamma)",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::CouplingOverGammaPulse => "coupling_over_gamma_pulse",
            Self::GammaTProduct => "gamma_t_product",
            Self::GammaEnvOverGammaPulse => "gamma_env_over_gamma_pulse",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default)]
    pub gamma_env_ratio: f64,
    #[serde(default = "default_coupling")]
    pub coupling_ratio: f64,
    #[serde(default = "one")]
    pub omega_b_ratio: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            gamma_env_ratio: 0.0,
            coupling_ratio: default_coupling(),
            omega_b_ratio: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    #[serde(default = "default_shape")]
    pub shape: Shape,
    /// ΓT: square duration, exponential timescale, Gaussian width, delta arrival time.
    /// For `compare-shapes` it is the shared ΓT_σ.
    #[serde(default = "default_width")]
    pub width: f64,
    /// ΓT of the truncated optimal pulse.
    #[serde(default = "default_truncation")]
    pub truncation: f64,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self {
            shape: default_shape(),
            width: default_width(),
            truncation: default_truncation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: default_points(),
            start: None,
            end: None,
        }
    }
}

/// One sweep axis, given either as an explicit value list or as an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub axis: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

impl SweepAxis {
    pub fn range(axis: Axis, start: f64, end: f64, points: usize) -> Self {
        Self {
            axis,
            values: None,
            start: Some(start),
            end: Some(end),
            points: Some(points),
        }
    }

    pub fn list(axis: Axis, values: Vec<f64>) -> Self {
        Self {
            axis,
            values: Some(values),
            start: None,
            end: None,
            points: None,
        }
    }

    /// Grid values in ascending sweep order. Assumes a validated axis.
    pub fn grid(&self) -> Vec<f64> {
        if let Some(v) = &self.values {
            return v.clone();
        }
        let (a, b, n) = (
            self.start.unwrap_or(0.0),
            self.end.unwrap_or(0.0),
            self.points.unwrap_or(1),
        );
        qpulse_core::uniform_grid(a, b, n)
    }

    fn problems(&self, out: &mut Vec<String>, k: usize) {
        let field = format!("sweep_axes[{k}]");
        let min_ok = |x: f64| match self.axis {
            Axis::GammaEnvOverGammaPulse => x >= 0.0,
            _ => x > 0.0,
        };
        let bound = match self.axis {
            Axis::GammaEnvOverGammaPulse => ">= 0",
            _ => "> 0",
        };
        match (&self.values, self.start, self.end, self.points) {
            (Some(v), None, None, None) => {
                if v.is_empty() {
                    out.push(format!("{field}.values: must not be empty"));
                }
                for x in v {
                    if !x.is_finite() || !min_ok(*x) {
                        out.push(format!("{field}.values: {x} must be finite and {bound}"));
                    }
                }
            }
            (None, Some(a), Some(b), Some(n)) => {
                for (name, x) in [("start", a), ("end", b)] {
                    if !x.is_finite() || !min_ok(x) {
                        out.push(format!("{field}.{name}: {x} must be finite and {bound}"));
                    }
                }
                if n == 0 {
                    out.push(format!("{field}.points: must be >= 1"));
                }
                if b < a || (n == 1 && a != b) {
                    out.push(format!(
                        "{field}: range [{a}, {b}] with {n} points is not ascending"
                    ));
                }
            }
            _ => out.push(format!(
                "{field}: give either `values` or all of `start`, `end`, `points`"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance of the excitation-ledger quadratures.
    #[serde(default = "default_quadrature_tol")]
    pub quadrature: f64,
    /// Largest accepted |ledger total − 1|.
    #[serde(default = "default_ledger_tol")]
    pub ledger: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature: default_quadrature_tol(),
            ledger: default_ledger_tol(),
        }
    }
}

impl Tolerances {
    /// Applies `QPULSE_TOL`: a bare number sets the ledger tolerance, otherwise
    /// a comma-separated list of `quadrature=…`/`ledger=…` pairs.
    pub fn apply_env(&mut self, raw: &str) -> Result<(), CliError> {
        let bad = |msg: String| CliError::Validation(vec![format!("QPULSE_TOL: {msg}")]);
        let raw = raw.trim();
        if let Ok(x) = raw.parse::<f64>() {
            self.ledger = x;
            return Ok(());
        }
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| bad(format!("`{}` is not a number", value.trim())))?;
            match key.trim() {
                "quadrature" => self.quadrature = value,
                "ledger" => self.ledger = value,
                other => return Err(bad(format!("unknown tolerance `{other}`"))),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub pulse: PulseConfig,
    #[serde(default)]
    pub grid: GridConfig,
    /// Charge threshold for `min-time`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep_axes: Vec<SweepAxis>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: ParamsConfig::default(),
            pulse: PulseConfig::default(),
            grid: GridConfig::default(),
            threshold: None,
            sweep_axes: Vec::new(),
            output: OutputConfig::default(),
            tolerances: Tolerances::default(),
        }
    }

    /// Parses TOML, or JSON when the text starts with `{`. The result is not yet validated.
    pub fn parse(source: &str) -> Result<Self, CliError> {
        if source.trim_start().starts_with('{') {
            serde_json::from_str(source).map_err(|e| CliError::Parse(e.to_string()))
        } else {
            toml::from_str(source).map_err(|e| CliError::Parse(e.to_string()))
        }
    }

    /// Parses and validates.
    pub fn parse_config(source: &str) -> Result<Self, CliError> {
        let cfg = Self::parse(source)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn render_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config is always representable as JSON")
    }

    pub fn system_params(&self) -> Result<Params, CliError> {
        let p = &self.params;
        Params::in_units_of_gamma(p.gamma_env_ratio, p.coupling_ratio, p.omega_b_ratio)
            .map_err(CliError::from)
    }

    /// The configured pulse for the given system parameters.
    pub fn pulse_spec(&self, params: &Params) -> Result<Pulse, CliError> {
        build_pulse(
            self.pulse.shape,
            self.pulse.width,
            self.pulse.truncation,
            params,
        )
    }

    /// Every violated invariant, or `Ok` when there are none.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut out = Vec::new();
        let p = &self.params;
        if !(p.gamma_env_ratio.is_finite() && p.gamma_env_ratio >= 0.0) {
            out.push(format!(
                "gamma_env: {} must be finite and >= 0",
                p.gamma_env_ratio
            ));
        }
        if !(p.coupling_ratio.is_finite() && p.coupling_ratio > 0.0) {
            out.push(format!(
                "coupling: {} must be finite and > 0",
                p.coupling_ratio
            ));
        }
        if !(p.omega_b_ratio.is_finite() && p.omega_b_ratio > 0.0) {
            out.push(format!(
                "omega_b: {} must be finite and > 0",
                p.omega_b_ratio
            ));
        }
        let pulse = &self.pulse;
        let width_ok = match pulse.shape {
            Shape::Delta => pulse.width.is_finite(),
            _ => pulse.width.is_finite() && pulse.width > 0.0,
        };
        if !width_ok {
            out.push(format!(
                "pulse.width: {} must be finite and > 0",
                pulse.width
            ));
        }
        if !(pulse.truncation.is_finite() && pulse.truncation > 0.0) {
            out.push(format!(
                "pulse.truncation: {} must be finite and > 0",
                pulse.truncation
            ));
        }
        if self.grid.points < 2 {
            out.push(format!("grid.points: {} must be >= 2", self.grid.points));
        }
        if let (Some(a), Some(b)) = (self.grid.start, self.grid.end) {
            if !(a.is_finite() && b.is_finite() && b > a) {
                out.push(format!(
                    "grid: [{a}, {b}] is not a finite ascending interval"
                ));
            }
        }
        for (name, x) in [("grid.start", self.grid.start), ("grid.end", self.grid.end)] {
            if matches!(x, Some(v) if !v.is_finite()) {
                out.push(format!("{name}: must be finite"));
            }
        }
        match (self.command, self.threshold) {
            (Command::MinTime, None) => out.push("threshold: required by min-time".into()),
            (_, Some(x)) if !(x.is_finite() && x > 0.0 && x < 1.0) => {
                out.push(format!("threshold: {x} must lie in (0, 1)"))
            }
            _ => {}
        }
        for (name, tol) in [
            ("tolerances.quadrature", self.tolerances.quadrature),
            ("tolerances.ledger", self.tolerances.ledger),
        ] {
            if !(tol.is_finite() && tol > 0.0) {
                out.push(format!("{name}: {tol} must be finite and > 0"));
            }
        }
        for (k, axis) in self.sweep_axes.iter().enumerate() {
            axis.problems(&mut out, k);
        }
        let n_axes = self.sweep_axes.len();
        match self.command {
            Command::Sweep => {
                if !(1..=2).contains(&n_axes) {
                    out.push(format!("sweep_axes: sweep takes 1 or 2 axes, got {n_axes}"));
                }
                if n_axes == 2 && self.sweep_axes[0].axis == self.sweep_axes[1].axis {
                    out.push("sweep_axes: the two axes must differ".into());
                }
                if pulse.shape == Shape::Delta
                    && self
                        .sweep_axes
                        .iter()
                        .any(|a| a.axis == Axis::GammaTProduct)
                {
                    out.push("sweep_axes: a delta pulse has no width to sweep".into());
                }
            }
            Command::OptimalPulse => {
                if n_axes > 1
                    || self
                        .sweep_axes
                        .iter()
                        .any(|a| a.axis != Axis::CouplingOverGammaPulse)
                {
                    out.push("sweep_axes: optimal-pulse accepts at most one coupling_over_gamma_pulse axis".into());
                }
            }
            _ if n_axes > 0 => out.push(format!("sweep_axes: not used by {}", self.command.name())),
            _ => {}
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(out))
        }
    }
}

/// Pulse of the given shape with ΓT-scaled width parameter.
pub fn build_pulse(
    shape: Shape,
    width: f64,
    truncation: f64,
    params: &Params,
) -> Result<Pulse, CliError> {
    let pulse = match shape {
        Shape::Square => Pulse::square(width)?,
        Shape::DecayExp => Pulse::decay_exp(width)?,
        Shape::Gaussian => Pulse::gaussian(width)?,
        Shape::Delta => Pulse::delta(width)?,
        Shape::Optimal => optimal_pulse(params, truncation)?,
    };
    Ok(pulse)
}

fn default_coupling() -> f64 {
    0.25
}

fn one() -> f64 {
    1.0
}

fn default_shape() -> Shape {
    Shape::Gaussian
}

fn default_width() -> f64 {
    3.0
}

fn default_truncation() -> f64 {
    40.0
}

fn default_points() -> usize {
    qpulse_core::dynamics::DEFAULT_GRID_POINTS
}

fn default_quadrature_tol() -> f64 {
    1e-10
}

fn default_ledger_tol() -> f64 {
    qpulse_core::dynamics::LEDGER_TOL
}
