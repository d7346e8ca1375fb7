use atqft::identities::{default_grid, run_suite, IdentityReport, Tolerances, SUITE};
use atqft::Cplx;
use clap::Args;
use serde::Serialize;

use crate::config::{parse_b, parse_list, RunConfig};
use crate::report::{write_out, Report, Residual};
use crate::{CmdResult, Failure, OutArgs, EXIT_FAILED};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated suite names, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Comma-separated levels; default `1,3,5`.
    #[arg(long = "N")]
    pub n_list: Option<String>,
    /// Modular parameter, repeatable; default grid when absent.
    #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
    pub b: Vec<Cplx>,
    /// Override every tolerance with this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct Row {
    identity: String,
    b_re: f64,
    b_im: f64,
    n: u32,
    detail: String,
    max_residual: f64,
    tolerance: f64,
    points: usize,
    passed: bool,
    error: String,
}

impl From<&IdentityReport> for Row {
    fn from(r: &IdentityReport) -> Self {
        Self {
            identity: r.name.clone(),
            b_re: r.params.b.re,
            b_im: r.params.b.im,
            n: r.params.n,
            detail: r.params.detail.clone(),
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            points: r.points_checked,
            passed: r.passed,
            error: r.error.clone().unwrap_or_default(),
        }
    }
}

fn uniform(t: f64) -> Tolerances {
    Tolerances {
        pointwise: t,
        duality: t,
        n1_reduction: t,
        representation: t,
        closed_form: t,
        fourier_closed_form: t,
        quadrature: t,
        pentagon: t,
        residue: t,
    }
}

pub fn run(a: VerifyArgs) -> CmdResult {
    let names: Vec<&str> = if a.suite == "all" {
        SUITE.to_vec()
    } else {
        a.suite.split(',').map(str::trim).collect()
    };
    if let Some(bad) = names.iter().find(|n| !SUITE.contains(n)) {
        return Err(Failure::usage(format!(
            "unknown suite `{bad}`; known: {}",
            SUITE.join(", ")
        )));
    }
    let ns: Vec<u32> = match &a.n_list {
        Some(s) => parse_list(s).map_err(Failure::usage)?,
        None => vec![1, 3, 5],
    };
    let grid: Vec<(Cplx, u32)> = if a.b.is_empty() {
        default_grid().into_iter().filter(|g| ns.contains(&g.1)).collect()
    } else {
        a.b.iter().flat_map(|&b| ns.iter().map(move |&n| (b, n))).collect()
    };
    for &(b, n) in &grid {
        atqft::ModularParam::new(b, n)?;
    }
    let tol = a.tol.map(uniform).unwrap_or_default();
    let reports = run_suite(&names, &grid, &tol);
    let residuals = reports
        .iter()
        .map(|r| Residual {
            name: format!("{} b={} N={}", r.name, r.params.b, r.params.n),
            value: r.max_residual,
            tolerance: Some(r.tolerance),
            passed: r.passed,
        })
        .collect();
    let cfg = RunConfig::new("verify")
        .with_n(&ns)
        .set("suites", &names)
        .set("b", a.b.iter().map(|b| [b.re, b.im]).collect::<Vec<_>>())
        .set("tolerances", tol);
    let rep = Report::new(cfg, reports.iter().map(Row::from).collect(), residuals);
    write_out(&rep.render(a.out.format).map_err(Failure::usage)?, a.out.out.as_deref())
        .map_err(Failure::usage)?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    eprintln!("{} checks, {failed} failed", reports.len());
    Ok(if rep.passed && !reports.is_empty() { 0 } else { EXIT_FAILED })
}
