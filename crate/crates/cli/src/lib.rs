//! Command-line front end: expression parsing, job configuration and
//! dispatch to the sieve, certifier and simulator.

pub mod config;
pub mod dispatch;
pub mod expr;

use clap::Parser;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("run failed: {0}")]
    Run(String),
    #[error("write failed: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => dispatch::EXIT_INPUT,
            CliError::Run(_) | CliError::Io(_) => dispatch::EXIT_NOT_CERTIFIED,
        }
    }
}

/// Full run from command-line arguments; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match config::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { dispatch::EXIT_INPUT } else { dispatch::EXIT_OK };
        }
    };
    let result = config::JobConfig::from_cli(&cli)
        .and_then(|c| dispatch::dispatch(&c))
        .and_then(|o| dispatch::write_artifacts(&o.artifacts).map(|_| o));
    match result {
        Ok(o) => {
            print!("{}", o.stdout);
            o.status
        }
        Err(e) => {
            eprintln!("curvsieve: {e}");
            e.exit_code()
        }
    }
}
