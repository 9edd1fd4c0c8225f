//! Command-line driver: configuration, figure presets, runners and output tables.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod recipes;
pub mod run;

pub use args::Cli;
pub use config::{Axis, Command, Format, RunConfig, Shape, SweepAxis, Tolerances};
pub use error::CliError;
pub use output::Table;
pub use recipes::FigureRecipe;
pub use run::{execute, run};
