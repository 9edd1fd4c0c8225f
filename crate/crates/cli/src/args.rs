use std::fs;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{Command, Format, RunConfig, Shape};
use crate::error::CliError;
use crate::recipes::FigureRecipe;

/// Single-photon charging of a quantum battery. Rates are in units of Γ, times in 1/Γ.
#[derive(Debug, Parser)]
#[command(name = "qpulse", version)]
pub struct Cli {
    pub command: Command,
    /// TOML or JSON run configuration.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Start from a figure preset.
    #[arg(long, value_name = "NAME", conflicts_with = "config")]
    pub recipe: Option<FigureRecipe>,
    /// Γ⊥/Γ.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub gamma_env_ratio: Option<f64>,
    /// f/Γ.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub coupling_ratio: Option<f64>,
    #[arg(long, value_name = "SHAPE")]
    pub pulse: Option<Shape>,
    /// ΓT of the pulse (ΓT_σ for compare-shapes).
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub pulse_width: Option<f64>,
    /// Charge to reach for min-time.
    #[arg(long, value_name = "P", allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    /// ΓT at which the optimal pulse is cut off.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub truncation: Option<f64>,
    /// Number of time samples.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<Format>,
}

impl Cli {
    /// Builds the run configuration: recipe or file, then `QPULSE_TOL`, then flags.
    pub fn resolve(&self, env_tol: Option<&str>) -> Result<RunConfig, CliError> {
        let mut cfg = match (&self.recipe, &self.config) {
            (Some(r), _) => r.config(),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)?;
                RunConfig::parse(&text).map_err(|e| match e {
                    CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
                    other => other,
                })?
            }
            (None, None) => RunConfig::new(self.command),
        };
        cfg.command = self.command;
        if let Some(raw) = env_tol {
            cfg.tolerances.apply_env(raw)?;
        }
        if let Some(x) = self.gamma_env_ratio {
            cfg.params.gamma_env_ratio = x;
        }
        if let Some(x) = self.coupling_ratio {
            cfg.params.coupling_ratio = x;
        }
        if let Some(s) = self.pulse {
            cfg.pulse.shape = s;
        }
        if let Some(x) = self.pulse_width {
            cfg.pulse.width = x;
        }
        if let Some(x) = self.threshold {
            cfg.threshold = Some(x);
        }
        if let Some(x) = self.truncation {
            cfg.pulse.truncation = x;
        }
        if let Some(n) = self.grid {
            cfg.grid.points = n;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
