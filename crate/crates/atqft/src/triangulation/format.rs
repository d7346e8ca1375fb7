//! Line-oriented text format:
//!
//! ```text
//! tets 2 N 3
//! glue 0.0 1.2
//! angles 0 1/3 1/3 1/3
//! ```
//!
//! Angles are rational multiples of `π`. Signs are not stored; they are
//! derived from the gluings with tetrahedron 0 of each component positive.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use super::{FaceRef, PiMultiple, PseudoManifold, Shape};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TriangulationFile {
    pub level_n: u32,
    pub manifold: PseudoManifold,
    pub shape: Option<Shape<PiMultiple>>,
}

fn parse_face(s: &str) -> Result<FaceRef> {
    let (t, f) = s
        .split_once('.')
        .ok_or_else(|| Error::Parse(format!("expected tet.face, got `{s}`")))?;
    let num = |x: &str| {
        x.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad index `{x}` in `{s}`")))
    };
    Ok(FaceRef::new(num(t)?, num(f)?))
}

fn parse_angle(s: &str) -> Result<PiMultiple> {
    Rational64::from_str(s)
        .map(PiMultiple)
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

impl FromStr for TriangulationFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header = None;
        let mut gluings = Vec::new();
        let mut angles: Vec<Option<[PiMultiple; 3]>> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            let err = || Error::Parse(format!("line {}: `{line}`", ln + 1));
            match tok[0] {
                "tets" => {
                    if header.is_some() || tok.len() != 4 || tok[2] != "N" {
                        return Err(err());
                    }
                    let n: usize = tok[1].parse().map_err(|_| err())?;
                    let level: u32 = tok[3].parse().map_err(|_| err())?;
                    if level == 0 {
                        return Err(err());
                    }
                    angles = vec![None; n];
                    header = Some((n, level));
                }
                "glue" => {
                    if header.is_none() || tok.len() != 3 {
                        return Err(err());
                    }
                    gluings.push((parse_face(tok[1])?, parse_face(tok[2])?));
                }
                "angles" => {
                    if header.is_none() || tok.len() != 5 {
                        return Err(err());
                    }
                    let t: usize = tok[1].parse().map_err(|_| err())?;
                    let slot = angles.get_mut(t).ok_or_else(err)?;
                    if slot.is_some() {
                        return Err(err());
                    }
                    *slot = Some([
                        parse_angle(tok[2])?,
                        parse_angle(tok[3])?,
                        parse_angle(tok[4])?,
                    ]);
                }
                _ => return Err(err()),
            }
        }
        let (n, level_n) = header.ok_or_else(|| Error::Parse("missing `tets` header".into()))?;
        let manifold = PseudoManifold::oriented(n, &gluings)?;
        let shape = if angles.iter().all(Option::is_none) {
            None
        } else if let Some(t) = angles.iter().position(Option::is_none) {
            return Err(Error::Parse(format!("tetrahedron {t} has no angles")));
        } else {
            Some(Shape::new(angles.into_iter().map(Option::unwrap).collect()))
        };
        Ok(Self {
            level_n,
            manifold,
            shape,
        })
    }
}

impl fmt::Display for TriangulationFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tets {} N {}", self.manifold.n_tets(), self.level_n)?;
        for (a, b) in self.manifold.gluings() {
            writeln!(f, "glue {}.{} {}.{}", a.tet, a.face, b.tet, b.face)?;
        }
        if let Some(s) = &self.shape {
            for (t, a) in s.angles.iter().enumerate() {
                writeln!(f, "angles {t} {} {} {}", a[0], a[1], a[2])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG8: &str = "tets 2 N 3\nglue 0.0 1.2\nglue 0.1 1.3\nglue 0.2 1.0\nglue 0.3 1.1\nangles 0 1/3 1/3 1/3\nangles 1 1/3 1/3 1/3\n";

    #[test]
    fn round_trip_is_exact() {
        let f: TriangulationFile = FIG8.parse().unwrap();
        assert_eq!(f.to_string(), FIG8);
        assert_eq!(f.manifold, PseudoManifold::figure_eight());
        let g: TriangulationFile = f.to_string().parse().unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let txt = format!("# figure eight\n\n{FIG8}");
        let f: TriangulationFile = txt.parse().unwrap();
        assert_eq!(f.to_string(), FIG8);
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "glue 0.0 1.2\n",
            "tets 2 N 0\n",
            "tets 2 N 3\nglue 0.0\n",
            "tets 2 N 3\nangles 5 1 0 0\n",
            "tets 2 N 3\nangles 0 1/3 x 1/3\n",
            "tets 1 N 1\nglue 0.0 0.0\n",
            "tets 2 N 3\nangles 0 1/3 1/3 1/3\n",
            "tets 1 N 1\nfoo\n",
        ] {
            assert!(bad.parse::<TriangulationFile>().is_err(), "{bad}");
        }
    }
}
