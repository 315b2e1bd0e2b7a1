//! Library behind the `tclgen` executable.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use tclgen_core::terms::{Kind, RenderFormat};
use tclgen_core::TclError;
use thiserror::Error;

pub mod commands;
pub mod config;

pub use config::{RunConfig, Setup};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical validation failed: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<TclError> for CliError {
    fn from(e: TclError) -> Self {
        match e {
            TclError::Numerical(_) => CliError::Numerical(e.to_string()),
            TclError::Io(m) => CliError::Io(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Schrodinger,
    Adjoint,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Schrodinger => Kind::Schrodinger,
            KindArg::Adjoint => Kind::Adjoint,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Diagram,
    Latex,
}

impl From<FormatArg> for RenderFormat {
    fn from(f: FormatArg) -> RenderFormat {
        match f {
            FormatArg::Text => RenderFormat::OperatorText,
            FormatArg::Diagram => RenderFormat::DiagramAscii,
            FormatArg::Latex => RenderFormat::Latex,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tclgen",
    version,
    about = "Time-convolutionless master equations: symbolic terms and numerics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the order given in the config.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the terms of one generator order.
    Terms {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Schrodinger)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Term counts of the recursive and Van Kampen forms.
    Count {
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Write the generator on every grid node.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Schrodinger)]
        kind: KindArg,
    },
    /// Integrate the state (or, with `--kind adjoint`, the observable).
    Propagate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Schrodinger)]
        kind: KindArg,
    },
    /// Exact reduced dynamics of system plus bath.
    Oracle {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Truncated equation against the exact dynamics.
    Compare {
        #[command(flatten)]
        run: RunArgs,
    },
}

fn load(run: &RunArgs) -> Result<Setup, CliError> {
    let cfg = RunConfig::load(&run.config)?;
    let base = run.config.parent().unwrap_or(Path::new("."));
    cfg.setup(base, run.order)
}

/// Runs one command, writing its text or JSON summary to `out`.
pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<(), CliError> {
    let text = match cli.command {
        Command::Terms {
            order,
            kind,
            format,
        } => commands::terms(order, kind.into(), format.into())?,
        Command::Count { order } => commands::count(order)?,
        Command::Evaluate { run, kind } => {
            summary(commands::evaluate(&load(&run)?, kind.into(), &run.out)?)
        }
        Command::Propagate { run, kind } => {
            summary(commands::propagate(&load(&run)?, kind.into(), &run.out)?)
        }
        Command::Oracle { run } => summary(commands::oracle(&load(&run)?, &run.out)?),
        Command::Compare { run } => summary(commands::compare(&load(&run)?, &run.out)?),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn summary(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n"
}
