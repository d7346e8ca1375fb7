//! Argument parsing shared by the subcommands.

use atqft::partition::Knot;
use atqft::{Cplx, Real};
use clap::ValueEnum;
use serde::Serialize;

/// `0.8`, `0.6,0.2` or `exp:θ`.
pub fn parse_b(s: &str) -> Result<Cplx, String> {
    if let Some(t) = s.strip_prefix("exp:") {
        let th: Real = t.trim().parse().map_err(|_| format!("bad angle in `{s}`"))?;
        return Ok(Cplx::from_polar(1.0, th));
    }
    parse_complex(s)
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Cplx, String> {
    let num = |t: &str| -> Result<Real, String> {
        t.trim().parse().map_err(|_| format!("bad number `{t}` in `{s}`"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Cplx::new(num(re)?, num(im)?)),
        None => Ok(Cplx::new(num(s)?, 0.0)),
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| format!("bad list entry `{t}`")))
        .collect()
}

pub fn parse_knot(s: &str) -> Result<Knot, String> {
    match s {
        "4_1" | "41" => Ok(Knot::FigureEight),
        "5_2" | "52" => Ok(Knot::FiveTwo),
        _ => Err(format!("unknown knot `{s}` (expected 4_1 or 5_2)")),
    }
}

/// `e3` or `3`.
pub fn parse_edge(s: &str) -> Result<usize, String> {
    s.strip_prefix('e')
        .unwrap_or(s)
        .parse()
        .map_err(|_| format!("bad edge `{s}`"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Echo of the effective parameters, embedded in every report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub b: Option<[Real; 2]>,
    pub n: Vec<u32>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub extra: serde_json::Map<String, serde_json::Value>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn with_b(mut self, b: Cplx) -> Self {
        self.b = Some([b.re, b.im]);
        self
    }

    pub fn with_n(mut self, n: &[u32]) -> Self {
        self.n = n.to_vec();
        self
    }

    pub fn set(mut self, k: &str, v: impl Serialize) -> Self {
        self.extra
            .insert(k.into(), serde_json::to_value(v).unwrap_or(serde_json::Value::Null));
        self
    }
}
