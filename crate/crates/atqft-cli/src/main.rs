//! `atqft`: evaluate the level-N dilogarithm, run identity checks, compute
//! knot state integrals and edit triangulation files.

mod cmd_dilog;
mod cmd_knot;
mod cmd_tri;
mod cmd_verify;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use atqft::Error;
use clap::{Args, Parser, Subcommand};

use crate::config::Format;

/// Exit statuses.
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NonConvergent(_)
            | Error::PoleHit(_)
            | Error::EvalFailure(_)
            | Error::DivergentProduct(_)
            | Error::NoConvergence(_)
            | Error::DegenerateSaddle(_)
            | Error::IllConditioned(_)
            | Error::PoleOnContour(..) => EXIT_NUMERIC,
            Error::NotBalanced(..)
            | Error::BadStar(_)
            | Error::BoundaryGauge(_)
            | Error::NonPositive(_) => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

#[derive(Parser)]
#[command(name = "atqft", version, about = "Level-N quantum dilogarithm and knot state integrals")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate D_b(x, n), and Φ_b(x) when N = 1.
    Dilog(cmd_dilog::DilogArgs),
    /// Run identity checks over a (b, N) grid.
    Verify(cmd_verify::VerifyArgs),
    /// Knot state integrals, sweeps, volume fits and H-limits.
    #[command(subcommand)]
    Knot(cmd_knot::KnotCmd),
    /// Triangulation files: census, 3-2 moves, gauge action, admissibility.
    #[command(subcommand)]
    Tri(cmd_tri::TriCmd),
}

/// Output options shared by the report-producing commands.
#[derive(Args, Clone, Debug)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Dilog(a) => cmd_dilog::run(a),
        Cmd::Verify(a) => cmd_verify::run(a),
        Cmd::Knot(k) => cmd_knot::run(k),
        Cmd::Tri(t) => cmd_tri::run(t),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
