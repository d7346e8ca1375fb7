//! Faddeev's `Φ_b`.
//!
//! Inside the strip `|Im z| <= min(Re b, Re b⁻¹)/2` the defining integral is
//! moved off the real axis onto `Im w = ±δ` and evaluated with the trapezoid
//! rule, which converges geometrically for this analytic integrand. Which line
//! is used depends on the sign of `Re z` so the exponential `e^{-2izw}` is
//! never amplified; crossing the pole at `w = 0` costs the residue term
//! `iπz² + iπ(b² + b⁻²)/12`. Outside the strip the difference equations
//! ladder `z` back in.

use std::f64::consts::PI;

use crate::{c, Cplx, Error, Real, Result, I};

/// Geometric-convergence budget: trapezoid aliasing and truncation are both
/// pushed below `e^{-BUDGET}`. The aliasing error of the sum grows like
/// `e^{2a|Re z|}`, but the sum is then scaled by `e^{-2δ|Re z|}` with `δ > a`,
/// so one step size serves every `Re z`.
const BUDGET: Real = 40.0;
/// Ladder steps before giving up.
pub(crate) const MAX_LADDER: usize = 512;
/// `|1 + e^u|` below this in a denominator counts as a pole.
const POLE_EPS: Real = 1e-12;

pub(crate) struct FaddeevTable {
    delta: Real,
    h: Real,
    k: i64,
    g_up: Vec<Cplx>,
    g_lo: Vec<Cplx>,
    steps: [Cplx; 2],
    thr: Real,
    res_const: Cplx,
}

impl FaddeevTable {
    pub(crate) fn new(b: Cplx) -> Self {
        let binv = b.inv();
        let m = b.re.min(binv.re);
        let delta = PI * m / 2.0;
        let a = 0.9 * delta;
        let steps = if b.re <= binv.re {
            [b, binv]
        } else {
            [binv, b]
        };
        let h = 2.0 * PI * a / BUDGET;
        let l = (BUDGET + 5.0 + (1.0 / h).ln().max(0.0)) / b.re.max(binv.re);
        let k = (l / h).ceil() as i64;
        let weight = |w: Cplx| h / (4.0 * (w * b).sinh() * (w / b).sinh() * w);
        let (mut g_up, mut g_lo) = (Vec::new(), Vec::new());
        for i in -k..=k {
            let t = i as Real * h;
            g_up.push(weight(c(t, delta)));
            g_lo.push(weight(c(t, -delta)));
        }
        Self {
            delta,
            h,
            k,
            g_up,
            g_lo,
            steps,
            // A hair of slack so points exactly on the edge do not stall the ladder.
            thr: m / 2.0 * (1.0 + 1e-9),
            res_const: I * PI * (b * b + binv * binv) / 12.0,
        }
    }

    /// `log Φ_b(z)` for `|Im z| <= thr`.
    fn log_strip(&self, z: Cplx) -> Cplx {
        let upper = z.re <= 0.0;
        let g = if upper { &self.g_up } else { &self.g_lo };
        let r = (-2.0 * I * z * self.h).exp();
        let mut s = Cplx::new(0.0, 0.0);
        let mut pw = Cplx::new(0.0, 0.0);
        for (idx, gi) in g.iter().enumerate() {
            if idx % 16 == 0 {
                let t = (idx as i64 - self.k) as Real * self.h;
                pw = (-2.0 * I * z * t).exp();
            } else {
                pw *= r;
            }
            s += gi * pw;
        }
        let sigma = if upper { 1.0 } else { -1.0 };
        let out = s * (2.0 * sigma * z * self.delta).exp();
        if upper {
            out
        } else {
            out + I * PI * z * z + self.res_const
        }
    }

    /// A logarithm of `Φ_b(z)` (defined up to `2πi Z`).
    pub(crate) fn log_phi(&self, z0: Cplx) -> Result<Cplx> {
        let mut z = z0;
        let mut acc = Cplx::new(0.0, 0.0);
        let mut it = 0;
        while z.im.abs() > self.thr {
            let mut best: Option<(Cplx, Cplx, Real)> = None;
            for &s in &self.steps {
                for sg in [1.0, -1.0] {
                    let nz = z - sg * I * s;
                    if nz.im.abs() < z.im.abs() - 1e-14
                        && best.is_none_or(|(bz, _, _)| nz.im.abs() < bz.im.abs())
                    {
                        best = Some((nz, s, sg));
                    }
                }
            }
            let (nz, s, sg) = best.ok_or_else(|| Error::EvalFailure("ladder stalled".into()))?;
            if sg > 0.0 {
                // Φ(w + is) = Φ(w) / (1 + e^{2πsw + iπs²}) with w = nz.
                let u = 2.0 * PI * s * nz + I * PI * s * s;
                if (1.0 + u.exp()).norm() < POLE_EPS {
                    return Err(Error::PoleHit(z0));
                }
                acc -= log1p_exp(u);
            } else {
                // Φ(w) = Φ(w + is)(1 + e^{2πsw + iπs²}) with w = z.
                acc += log1p_exp(2.0 * PI * s * z + I * PI * s * s);
            }
            z = nz;
            it += 1;
            if it > MAX_LADDER {
                return Err(Error::EvalFailure(format!(
                    "ladder exceeded {MAX_LADDER} steps"
                )));
            }
        }
        Ok(acc + self.log_strip(z))
    }
}

/// `log(1 + w)` without cancellation for small `w`.
pub(crate) fn ln1p(w: Cplx) -> Cplx {
    if w.norm() < 1e-4 {
        let mut term = w;
        let mut s = Cplx::new(0.0, 0.0);
        for k in 1..=6 {
            s += term / k as Real;
            term *= -w;
        }
        s
    } else {
        (1.0 + w).ln()
    }
}

/// `log(1 + e^u)` without overflow.
pub(crate) fn log1p_exp(u: Cplx) -> Cplx {
    if u.re > 0.0 {
        u + ln1p((-u).exp())
    } else {
        ln1p(u.exp())
    }
}
