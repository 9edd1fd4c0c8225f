//! Preset configurations for the standard figures.

use clap::ValueEnum;

use crate::config::{Axis, Command, RunConfig, Shape, SweepAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureRecipe {
    /// |α₁(t)|² under the optimal pulse at the exceptional point.
    #[value(name = "fig7-optimal-dynamics")]
    OptimalDynamics,
    /// Optimal pulse shapes for several couplings, lossless charger.
    #[value(name = "fig8-optimal-shapes")]
    OptimalShapes,
    /// Square, exponential, Gaussian and optimal pulses at equal ΓT_σ = 2√3.
    #[value(name = "figC-pulse-compare")]
    PulseCompare,
    /// Peak charge over the (f/Γ, ΓT) plane for a Gaussian pulse.
    #[value(name = "figGauss-sweep")]
    GaussSweep,
    /// Peak charge against f/Γ for a Gaussian pulse with ΓT = 3.
    #[value(name = "figGauss-ep-slice")]
    GaussEpSlice,
    /// Optimal pulses with an environment loss Γ⊥ = Γ/2.
    #[value(name = "figD-lossy-optimal")]
    LossyOptimal,
}

impl FigureRecipe {
    pub const ALL: [Self; 6] = [
        Self::OptimalDynamics,
        Self::OptimalShapes,
        Self::PulseCompare,
        Self::GaussSweep,
        Self::GaussEpSlice,
        Self::LossyOptimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OptimalDynamics => "fig7-optimal-dynamics",
            Self::OptimalShapes => "fig8-optimal-shapes",
            Self::PulseCompare => "figC-pulse-compare",
            Self::GaussSweep => "figGauss-sweep",
            Self::GaussEpSlice => "figGauss-ep-slice",
            Self::LossyOptimal => "figD-lossy-optimal",
        }
    }

    pub fn config(self) -> RunConfig {
        match self {
            Self::OptimalDynamics => {
                let mut c = RunConfig::new(Command::OptimalPulse);
                c.pulse.shape = Shape::Optimal;
                c
            }
            Self::OptimalShapes => {
                let mut c = RunConfig::new(Command::OptimalPulse);
                c.pulse.shape = Shape::Optimal;
                c.sweep_axes = vec![SweepAxis::list(
                    Axis::CouplingOverGammaPulse,
                    vec![0.1, 0.25, 0.5, 1.0],
                )];
                c
            }
            Self::PulseCompare => {
                let mut c = RunConfig::new(Command::CompareShapes);
                c.pulse.width = 2.0 * 3f64.sqrt();
                c
            }
            Self::GaussSweep => {
                let mut c = RunConfig::new(Command::Sweep);
                c.sweep_axes = vec![
                    SweepAxis::range(Axis::CouplingOverGammaPulse, 0.05, 1.0, 20),
                    SweepAxis::range(Axis::GammaTProduct, 0.1, 10.0, 34),
                ];
                c
            }
            Self::GaussEpSlice => {
                let mut c = RunConfig::new(Command::Sweep);
                c.pulse.width = 3.0;
                c.sweep_axes = vec![SweepAxis::range(
                    Axis::CouplingOverGammaPulse,
                    0.025,
                    1.0,
                    40,
                )];
                c
            }
            Self::LossyOptimal => {
                let mut c = RunConfig::new(Command::OptimalPulse);
                c.params.gamma_env_ratio = 0.5;
                c.params.coupling_ratio = 0.375;
                c.pulse.shape = Shape::Optimal;
                c.sweep_axes = vec![SweepAxis::list(
                    Axis::CouplingOverGammaPulse,
                    vec![0.2, 0.375, 0.75],
                )];
                c
            }
        }
    }
}
