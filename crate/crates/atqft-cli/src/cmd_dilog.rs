use atqft::qdilog::{d_b, d_b_poch, phi_b};
use atqft::{Cplx, ModularParam};
use clap::{Args, ValueEnum};

use crate::config::{parse_b, parse_complex};
use crate::{CmdResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    /// Product of `N` Faddeev factors, each a contour integral.
    Integral,
    /// Ratio of infinite q-Pochhammer symbols (`|b| = 1`, `Im b² > 0`).
    Poch,
}

#[derive(Args, Debug)]
pub struct DilogArgs {
    #[arg(long, value_parser = parse_b, allow_hyphen_values = true)]
    pub b: Cplx,
    #[arg(long = "N")]
    pub n_level: u32,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub x: Cplx,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, value_enum, default_value = "integral")]
    pub repr: Repr,
}

fn pair(label: &str, z: Cplx) -> String {
    format!("{label} {} {}\n", z.re, z.im)
}

pub fn run(a: DilogArgs) -> CmdResult {
    let p = ModularParam::new(a.b, a.n_level).map_err(Failure::from)?;
    let pt = p.point(a.x, a.n);
    let (v, how) = match a.repr {
        Repr::Integral => (d_b(pt, &p)?, "integral: product of N Faddeev factors"),
        Repr::Poch => (d_b_poch(pt, &p)?, "q-Pochhammer ratio"),
    };
    let mut out = pair("D_b", v);
    if p.n == 1 {
        out += &pair("Phi_b", phi_b(a.x, &p)?);
    }
    out += &format!("representation: {how}\n");
    print!("{out}");
    Ok(0)
}
