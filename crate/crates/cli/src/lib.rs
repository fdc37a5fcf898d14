//! Command-line front end: metric files, catalog access, verification
//! suites and CSV/JSON output.

pub mod args;
pub mod commands;
pub mod metric_file;
pub mod report;
pub mod resolve;

use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;
use tpgr::analysis::{AnalysisError, AxisError};
use tpgr::catalog::CatalogError;
use tpgr::{ParseError, TensorError};

pub use args::{Cli, Command};
pub use commands::{Artifact, Outcome};
pub use metric_file::{emit_metric_file, parse_metric_file, MetricFileError};
pub use report::{Check, RunReport, Status};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    MetricFile(#[from] MetricFileError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Axis(#[from] AxisError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::MetricFile(_)
            | CliError::Parse(_)
            | CliError::Axis(_)
            | CliError::Usage(_)
            | CliError::Csv(_) => EXIT_USAGE,
            CliError::Catalog(_) | CliError::Tensor(_) | CliError::Analysis(_) => EXIT_NUMERIC,
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs `command`, writes its output and returns the process exit code.
///
/// CSV goes to `--out` when given and to stdout otherwise, in which case the
/// report moves to stderr. A catalog metric goes to `--emit` or stdout.
pub fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute_inner(command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute_inner(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let common = command.common();
    let outcome = commands::run(command)?;
    let rendered = if common.json {
        outcome.report.to_json() + "\n"
    } else {
        outcome.report.to_table()
    };
    let io = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    let mut report_to_stderr = false;
    match (&outcome.artifact, command) {
        (Some(Artifact::Csv(csv)), _) => match &common.out {
            Some(path) => write_file(path, csv)?,
            None => {
                stdout.write_all(csv.as_bytes()).map_err(io)?;
                report_to_stderr = true;
            }
        },
        (Some(Artifact::MetricFile(text)), Command::Catalog { emit, .. }) => match emit {
            Some(path) => write_file(path, text)?,
            None if !common.json => {
                stdout.write_all(text.as_bytes()).map_err(io)?;
                report_to_stderr = true;
            }
            None => {}
        },
        _ => {
            if let Some(path) = &common.out {
                write_file(path, &(outcome.report.to_json() + "\n"))?;
            }
        }
    }
    if report_to_stderr {
        stderr.write_all(rendered.as_bytes()).map_err(io)?;
    } else {
        stdout.write_all(rendered.as_bytes()).map_err(io)?;
    }
    Ok(if outcome.report.passed() { EXIT_PASS } else { EXIT_FAIL })
}
