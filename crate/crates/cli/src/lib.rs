//! Command-line front end and HTTP service over `trotter-core`.

pub mod args;
pub mod commands;
pub mod output;
pub mod service;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] trotter_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for numerical breakdowns, 1 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or(s).trim()
}

/// Collapses a clap diagnostic to one line, dropping usage and hint lines.
fn clap_line(rendered: &str) -> String {
    rendered
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty() && !l.starts_with("tip:"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Diagnostics are a single line on `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = writeln!(stderr, "error: a subcommand is required (see --help)");
                    1
                }
                _ => {
                    let _ = writeln!(stderr, "{}", clap_line(&e.render().to_string()));
                    1
                }
            };
        }
    };
    if cli.threads == Some(0) {
        let _ = writeln!(stderr, "error: --threads must be at least 1");
        return 1;
    }
    if let Command::Serve(s) = &cli.command {
        let rt = match tokio::runtime::Builder::new_multi_thread()
            .enable_all()
            .build()
        {
            Ok(rt) => rt,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot start runtime: {e}");
                return 1;
            }
        };
        return match rt.block_on(service::serve(&s.host, s.port, cli.threads)) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        };
    }
    match execute_with_threads(&cli).and_then(|text| emit(&cli.command, &text, stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", first_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn execute_with_threads(cli: &Cli) -> Result<String, CliError> {
    match cli.threads {
        None => commands::execute(&cli.command),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Io(format!("cannot build thread pool: {e}")))?
            .install(|| commands::execute(&cli.command)),
    }
}

fn output_path(cmd: &Command) -> Option<&std::path::Path> {
    let out = match cmd {
        Command::Enumerate(a) => &a.out,
        Command::Metrics(a) => &a.out,
        Command::Bounds(a) => &a.out,
        Command::Trotter(a) => &a.out,
        Command::BoundSweep(a) => &a.out,
        Command::Concentrate(a) => &a.out,
        Command::Cloud(a) => &a.out,
        Command::AsRun(a) => &a.out,
        Command::AppendixCheck(a) => &a.out,
        Command::Serve(_) => return None,
    };
    out.output.as_deref()
}

fn emit(cmd: &Command, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match output_path(cmd) {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}
