use std::process::ExitCode;

use clap::Parser;
use qpulse_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_tol = std::env::var("QPULSE_TOL").ok();
    match cli
        .resolve(env_tol.as_deref())
        .and_then(|cfg| execute(&cfg))
    {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
