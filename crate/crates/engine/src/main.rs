use std::io;
use std::process::ExitCode;

use clap::Parser;
use qsim_engine::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsim: {e:#}");
            ExitCode::FAILURE
        }
    }
}
