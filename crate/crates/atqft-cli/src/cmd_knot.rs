use atqft::asymptotics::{saddle_volume, sweep, extract_volume, FitModel};
use atqft::partition::{chi_41, chi_52, h_limit_41, h_limit_52, Knot};
use atqft::{Contour, Cplx, ModularParam, Real};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{parse_b, parse_complex, parse_knot, parse_list, RunConfig};
use crate::report::{write_out, Report, Residual};
use crate::{CmdResult, Failure, OutArgs, EXIT_FAILED};

#[derive(Subcommand, Debug)]
pub enum KnotCmd {
    /// One evaluation of χ_K(x, λ).
    Chi(ChiArgs),
    /// χ_K(0) over a list of real b.
    Sweep(SweepArgs),
    /// Sweep, then fit 2πb²N log|χ_K(0)| and compare with the saddle volume.
    Volume(VolumeArgs),
    /// Regularised H-triangulation limit a₀ → 0.
    Hlimit(HlimitArgs),
}

#[derive(Args, Debug)]
pub struct KnotSel {
    #[arg(long, value_parser = parse_knot)]
    pub knot: Knot,
    #[arg(long = "N", default_value_t = 1)]
    pub n_level: u32,
}

#[derive(Args, Debug)]
pub struct ChiArgs {
    #[command(flatten)]
    pub sel: KnotSel,
    #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
    pub b: Cplx,
    #[arg(long, value_parser = parse_complex, default_value = "0", allow_hyphen_values = true)]
    pub x: Cplx,
    /// Residue class of x in Z/N.
    #[arg(long, default_value_t = 0)]
    pub k: i64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: Real,
    /// Height of the integration line; defaults to the saddle height.
    #[arg(long, allow_hyphen_values = true)]
    pub contour: Option<Real>,
    #[arg(long)]
    pub tol: Option<Real>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sel: KnotSel,
    #[arg(long = "b-list", default_value = "0.30,0.25,0.20,0.15,0.10")]
    pub b_list: String,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fit {
    Pure,
    Quadratic,
    Quartic,
}

impl From<Fit> for FitModel {
    fn from(f: Fit) -> Self {
        match f {
            Fit::Pure => FitModel::Pure,
            Fit::Quadratic => FitModel::Quadratic,
            Fit::Quartic => FitModel::Quartic,
        }
    }
}

#[derive(Args, Debug)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub sel: KnotSel,
    #[arg(long = "b-list", default_value = "0.30,0.25,0.20,0.15,0.10")]
    pub b_list: String,
    #[arg(long, value_enum, default_value = "quartic")]
    pub fit: Fit,
    /// Relative tolerance against the saddle-point volume; 1% at N = 1, 2% above.
    #[arg(long)]
    pub rel_tol: Option<Real>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct HlimitArgs {
    #[command(flatten)]
    pub sel: KnotSel,
    #[arg(long, value_parser = parse_b, default_value = "0.5")]
    pub b: Cplx,
    /// Decreasing a₀ values; default (0.08, 0.04, 0.02)/√N.
    #[arg(long = "a0-list")]
    pub a0_list: Option<String>,
    /// Default 0.3/√N.
    #[arg(long)]
    pub c0: Option<Real>,
    /// 5_2 only: a₁ - a₃ = slope · a₀.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub slope: Real,
    #[arg(long, default_value_t = 1e-3)]
    pub rel_tol: Real,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Serialize)]
struct ValueRow {
    knot: &'static str,
    n: u32,
    b_re: Real,
    b_im: Real,
    lambda: Real,
    re: Real,
    im: Real,
    err: Real,
    nodes: usize,
}

#[derive(Serialize)]
struct LimitRow {
    knot: &'static str,
    n: u32,
    a0: Real,
    re: Real,
    im: Real,
    residual: Real,
}

fn param(b: Cplx, n: u32) -> Result<ModularParam, Failure> {
    Ok(ModularParam::new(b, n)?)
}

fn emit<R: Serialize>(rep: &Report<R>, out: &OutArgs) -> Result<(), Failure> {
    let text = rep.render(out.format).map_err(Failure::usage)?;
    write_out(&text, out.out.as_deref()).map_err(Failure::usage)
}

fn b_list(s: &str) -> Result<Vec<Real>, Failure> {
    parse_list(s).map_err(Failure::usage)
}

pub fn run(cmd: KnotCmd) -> CmdResult {
    match cmd {
        KnotCmd::Chi(a) => chi(a),
        KnotCmd::Sweep(a) => run_sweep(a),
        KnotCmd::Volume(a) => volume(a),
        KnotCmd::Hlimit(a) => hlimit(a),
    }
}

fn chi(a: ChiArgs) -> CmdResult {
    let p = param(a.b, a.sel.n_level)?;
    let x = p.point(a.x, a.k);
    let contour = a.contour.map(|d| {
        let c = Contour::at(d);
        a.tol.map_or(c, |t| c.with_tol(t))
    });
    let r = match a.sel.knot {
        Knot::FigureEight => chi_41(x, a.lambda, &p, contour)?,
        Knot::FiveTwo => chi_52(x, a.lambda, &p, contour)?,
    };
    let row = ValueRow {
        knot: a.sel.knot.name(),
        n: p.n,
        b_re: p.b.re,
        b_im: p.b.im,
        lambda: a.lambda,
        re: r.value.re,
        im: r.value.im,
        err: r.err_estimate,
        nodes: r.nodes_used,
    };
    let cfg = RunConfig::new("knot chi")
        .with_b(p.b)
        .with_n(&[p.n])
        .set("knot", a.sel.knot.name())
        .set("x", [a.x.re, a.x.im])
        .set("k", a.k)
        .set("lambda", a.lambda)
        .set("contour", a.contour);
    emit(&Report::new(cfg, vec![row], Vec::new()), &a.out)?;
    Ok(0)
}

fn sweep_rows(knot: Knot, bs: &[Real], n: u32) -> Result<Vec<ValueRow>, Failure> {
    Ok(sweep(knot, bs, n)?
        .into_iter()
        .map(|s| ValueRow {
            knot: knot.name(),
            n,
            b_re: s.b,
            b_im: 0.0,
            lambda: 0.0,
            re: s.value.re,
            im: s.value.im,
            err: s.err,
            nodes: s.nodes,
        })
        .collect())
}

fn run_sweep(a: SweepArgs) -> CmdResult {
    let bs = b_list(&a.b_list)?;
    let rows = sweep_rows(a.sel.knot, &bs, a.sel.n_level)?;
    let cfg = RunConfig::new("knot sweep")
        .with_n(&[a.sel.n_level])
        .set("knot", a.sel.knot.name())
        .set("b_list", &bs);
    emit(&Report::new(cfg, rows, Vec::new()), &a.out)?;
    Ok(0)
}

fn volume(a: VolumeArgs) -> CmdResult {
    let bs = b_list(&a.b_list)?;
    let n = a.sel.n_level;
    let rows = sweep_rows(a.sel.knot, &bs, n)?;
    let pts: Vec<(Real, Real)> = rows.iter().map(|r| (r.b_re, r.re.hypot(r.im))).collect();
    let fit = extract_volume(&pts, n, a.fit.into())?;
    let reference = saddle_volume(a.sel.knot, &param(Cplx::new(bs[0], 0.0), n)?)?;
    let rel = (fit.volume - reference).abs() / reference;
    let tol = a.rel_tol.unwrap_or(if n == 1 { 0.01 } else { 0.02 });
    let residuals = vec![
        Residual {
            name: "fitted volume".into(),
            value: fit.volume,
            tolerance: None,
            passed: true,
        },
        Residual {
            name: "fitted volume std".into(),
            value: fit.volume_std(),
            tolerance: None,
            passed: true,
        },
        Residual {
            name: "saddle volume".into(),
            value: reference,
            tolerance: None,
            passed: true,
        },
        Residual {
            name: "relative difference".into(),
            value: rel,
            tolerance: Some(tol),
            passed: rel < tol,
        },
    ];
    let cfg = RunConfig::new("knot volume")
        .with_n(&[n])
        .set("knot", a.sel.knot.name())
        .set("b_list", &bs)
        .set("fit", format!("{:?}", a.fit).to_lowercase())
        .set("coefficients", &fit.coefficients);
    let rep = Report::new(cfg, rows, residuals);
    emit(&rep, &a.out)?;
    eprintln!("fitted volume {:.7} (saddle {reference:.7}, rel {rel:.2e})", fit.volume);
    Ok(if rep.passed { 0 } else { EXIT_FAILED })
}

fn hlimit(a: HlimitArgs) -> CmdResult {
    let n = a.sel.n_level;
    let p = param(a.b, n)?;
    let sn = p.sqrt_n();
    let a0: Vec<Real> = match &a.a0_list {
        Some(s) => parse_list(s).map_err(Failure::usage)?,
        None => [0.08, 0.04, 0.02].iter().map(|v| v / sn).collect(),
    };
    let c0 = a.c0.unwrap_or(0.3 / sn);
    let r = match a.sel.knot {
        Knot::FigureEight => h_limit_41(&a0, c0, &p, None)?,
        Knot::FiveTwo => h_limit_52(&a0, c0, a.slope, &p)?,
    };
    let rows = r
        .a0
        .iter()
        .zip(&r.lhs)
        .zip(&r.residuals)
        .map(|((&a0, v), &res)| LimitRow {
            knot: a.sel.knot.name(),
            n,
            a0,
            re: v.re,
            im: v.im,
            residual: res,
        })
        .collect();
    let residuals = vec![
        Residual {
            name: "extrapolated vs limit".into(),
            value: r.rel_err,
            tolerance: Some(a.rel_tol),
            passed: r.rel_err < a.rel_tol,
        },
        Residual {
            name: "monotone residuals".into(),
            value: if r.monotone { 1.0 } else { 0.0 },
            tolerance: None,
            passed: true,
        },
    ];
    let cfg = RunConfig::new("knot hlimit")
        .with_b(p.b)
        .with_n(&[n])
        .set("knot", a.sel.knot.name())
        .set("c0", c0)
        .set("modulus_only", r.modulus_only)
        .set("extrapolated", [r.extrapolated.re, r.extrapolated.im])
        .set("limit", [r.rhs.re, r.rhs.im]);
    let rep = Report::new(cfg, rows, residuals);
    emit(&rep, &a.out)?;
    Ok(if rep.passed { 0 } else { EXIT_FAILED })
}
