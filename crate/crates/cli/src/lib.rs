//! Command-line front end for `hlf-core`. Every command prints one JSON
//! object on stdout.

pub mod commands;
pub mod expr;
pub mod input;

use std::fmt;

use serde_json::json;

/// Why a command failed; decides the exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit code 1.
    Usage(String),
    /// The library rejected a well-formed request: exit code 2.
    Domain(hlf_core::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// A library error raised while building an input descriptor.
    pub fn input(e: hlf_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<hlf_core::Error> for CliError {
    fn from(e: hlf_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<expr::ParseError> for CliError {
    fn from(e: expr::ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Runs the program on `args` (including the program name) and returns
/// what to print on stdout, what to print on stderr, and the exit code.
pub fn run_args<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (e.to_string(), String::new(), 0);
            }
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            return (json!({ "error": first }).to_string(), e.to_string(), 1);
        }
    };
    let seed = std::env::var("HLF_SEED").ok();
    match commands::run(&cli.command, seed.as_deref()) {
        Ok(v) => (v.to_string(), String::new(), 0),
        Err(e) => (json!({ "error": e.to_string() }).to_string(), String::new(), e.exit_code()),
    }
}
