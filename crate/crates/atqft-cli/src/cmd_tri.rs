use std::fs;
use std::path::{Path, PathBuf};

use atqft::triangulation::{
    gauge_transform, h2_vanishes, is_balanced, pachner_32, shape_polytope_point, weights,
    LeveledShape, TriangulationFile,
};
use atqft::Real;
use clap::{Args, Subcommand};
use serde::Serialize;

use crate::config::{parse_edge, RunConfig};
use crate::report::{write_out, Report, Residual};
use crate::{CmdResult, Failure, OutArgs, EXIT_FAILED};

#[derive(Subcommand, Debug)]
pub enum TriCmd {
    /// Census, edge weights and balance.
    Info(InfoArgs),
    /// 3-2 move along a balanced degree-three edge; prints the new file.
    Pachner32(PachnerArgs),
    /// Gauge action of one internal edge on the shape and level.
    Gauge(GaugeArgs),
    /// Nonempty balanced shape polytope and vanishing H₂.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
pub struct InfoArgs {
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct PachnerArgs {
    #[arg(long, value_parser = parse_edge)]
    pub edge: usize,
    pub file: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GaugeArgs {
    #[arg(long, value_parser = parse_edge)]
    pub edge: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Real,
    pub file: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub file: PathBuf,
}

fn load(path: &Path) -> Result<TriangulationFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e: atqft::Error| Failure::usage(format!("{}: {e}", path.display())))
}

pub fn run(cmd: TriCmd) -> CmdResult {
    match cmd {
        TriCmd::Info(a) => info(a),
        TriCmd::Pachner32(a) => pachner(a),
        TriCmd::Gauge(a) => gauge(a),
        TriCmd::Check(a) => check(a),
    }
}

fn info(a: InfoArgs) -> CmdResult {
    let f = load(&a.file)?;
    let x = &f.manifold;
    let c = x.census();
    println!("census: {}/{}/{}/{}", c[0], c[1], c[2], c[3]);
    println!("level: {}", f.level_n);
    let signs: Vec<String> = x.signs().iter().map(|s| format!("{s:+}")).collect();
    println!("signs: {}", signs.join(" "));
    match &f.shape {
        None => println!("shape: none"),
        Some(s) => {
            let w = weights(x, s)?;
            for (e, we) in w.iter().enumerate() {
                let kind = if x.is_internal(e) { "internal" } else { "boundary" };
                let bal = if x.is_internal(e) {
                    if is_balanced(x, s, e) { " balanced" } else { " unbalanced" }
                } else {
                    ""
                };
                println!(
                    "e{e}: degree {} weight {we}π {kind}{bal}",
                    x.tet_edges_over(e).len()
                );
            }
        }
    }
    Ok(0)
}

fn pachner(a: PachnerArgs) -> CmdResult {
    let f = load(&a.file)?;
    let shape = f
        .shape
        .as_ref()
        .ok_or_else(|| Failure::usage("3-2 move needs a shape (`angles` lines)"))?;
    let mv = pachner_32(&f.manifold, shape, a.edge)?;
    let g = TriangulationFile {
        level_n: f.level_n,
        manifold: mv.manifold,
        shape: Some(mv.shape),
    };
    write_out(&g.to_string(), a.out.as_deref()).map_err(Failure::usage)?;
    eprintln!("level shift: {}", mv.level_shift);
    Ok(0)
}

#[derive(Serialize)]
struct AngleRow {
    tet: usize,
    a01_over_pi: Real,
    a02_over_pi: Real,
    a03_over_pi: Real,
}

fn gauge(a: GaugeArgs) -> CmdResult {
    let f = load(&a.file)?;
    let x = &f.manifold;
    let shape = f
        .shape
        .as_ref()
        .ok_or_else(|| Failure::usage("gauge action needs a shape (`angles` lines)"))?;
    if a.edge >= x.n_edges() {
        return Err(atqft::Error::UnknownEdge(a.edge).into());
    }
    let mut g = vec![0.0; x.n_edges()];
    g[a.edge] = a.t;
    let ls = LeveledShape {
        shape: shape.to_radians(),
        level: 0.0,
    };
    let out = gauge_transform(x, &ls, &g)?;
    let pi = std::f64::consts::PI;
    let rows = out
        .shape
        .angles
        .iter()
        .enumerate()
        .map(|(t, r)| AngleRow {
            tet: t,
            a01_over_pi: r[0] / pi,
            a02_over_pi: r[1] / pi,
            a03_over_pi: r[2] / pi,
        })
        .collect();
    let (w0, w1) = (weights(x, &ls.shape)?, weights(x, &out.shape)?);
    let drift = w0
        .iter()
        .zip(&w1)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, Real::max);
    let residuals = vec![Residual {
        name: "edge weight drift".into(),
        value: drift,
        tolerance: Some(1e-12),
        passed: drift < 1e-12,
    }];
    let cfg = RunConfig::new("tri gauge")
        .with_n(&[f.level_n])
        .set("edge", a.edge)
        .set("t", a.t)
        .set("level", out.level);
    let rep = Report::new(cfg, rows, residuals);
    let text = rep.render(a.out.format).map_err(Failure::usage)?;
    write_out(&text, a.out.out.as_deref()).map_err(Failure::usage)?;
    Ok(if rep.passed { 0 } else { EXIT_FAILED })
}

fn check(a: CheckArgs) -> CmdResult {
    let f = load(&a.file)?;
    let polytope = shape_polytope_point(&f.manifold, true).is_some();
    let h2 = h2_vanishes(&f.manifold);
    let ok = polytope && h2;
    println!("balanced shape polytope nonempty: {polytope}");
    println!("H2 vanishes: {h2}");
    println!("admissible: {ok}");
    Ok(if ok { 0 } else { EXIT_FAILED })
}
