//! Special functions: Faddeev's `Φ_b`, the level-N dilogarithm `D_b`,
//! q-Pochhammer symbols, `Li₂`, the Lobachevsky function and the cyclic
//! dilogarithm `φ_x(n)`.

pub(crate) mod faddeev;

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{ANPoint, Cplx, Error, ModularParam, Real, Result, I};
pub(crate) use faddeev::ln1p;

/// Which closed representations of `D_b` are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DilogRegime {
    RealB,
    UnitCircleB,
}

impl DilogRegime {
    pub fn of(p: &ModularParam) -> Self {
        if p.is_real_b() {
            DilogRegime::RealB
        } else {
            DilogRegime::UnitCircleB
        }
    }
}

/// A pole of `D_b` together with its residue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleDatum {
    pub l: u32,
    pub m: u32,
    pub location: ANPoint,
    pub residue: Cplx,
}

/// `log Φ_b(z)`, branch continuous from `Φ_b(0) = e^{πi(b²+b⁻²)/24}`
/// along the ladder.
pub fn log_phi_b(z: Cplx, p: &ModularParam) -> Result<Cplx> {
    p.faddeev.log_phi(z)
}

pub fn phi_b(z: Cplx, p: &ModularParam) -> Result<Cplx> {
    Ok(log_phi_b(z, p)?.exp())
}

/// The `N` arguments of `Φ_b` whose product is `D_b(x, n)`.
pub fn d_b_factors(a: ANPoint, p: &ModularParam) -> Vec<Cplx> {
    let nf = p.n as Real;
    let base = a.x / p.sqrt_n() + (1.0 - 1.0 / nf) * p.c_b;
    (0..p.n)
        .map(|j| {
            let frac = ((j + a.n()) % p.n) as Real / nf;
            base - I * (j as Real) / (p.b * nf) - I * p.b * frac
        })
        .collect()
}

pub fn log_d_b(a: ANPoint, p: &ModularParam) -> Result<Cplx> {
    let mut s = Cplx::new(0.0, 0.0);
    for z in d_b_factors(a, p) {
        s += log_phi_b(z, p).map_err(|e| match e {
            Error::PoleHit(_) => Error::PoleHit(a.x),
            other => other,
        })?;
    }
    Ok(s)
}

pub fn d_b(a: ANPoint, p: &ModularParam) -> Result<Cplx> {
    Ok(log_d_b(a, p)?.exp())
}

/// `1 / D_b(a)`, computed without forming `D_b` (which may underflow).
pub fn d_b_inv(a: ANPoint, p: &ModularParam) -> Result<Cplx> {
    Ok((-log_d_b(a, p)?).exp())
}

/// `χ^±(x, n) = e^{2π b^{±1} x/√N} e^{±2πin/N}`.
pub fn chi_pm(sign: i32, a: ANPoint, p: &ModularParam) -> Cplx {
    let nf = p.n as Real;
    let (bb, s) = if sign >= 0 {
        (p.b, 1.0)
    } else {
        (p.b.inv(), -1.0)
    };
    (2.0 * PI * bb * a.x / p.sqrt_n()).exp()
        * Cplx::from_polar(1.0, s * 2.0 * PI * a.n() as Real / nf)
}

/// Upper bound on factors in an infinite product before giving up.
const POCH_MAX_TERMS: usize = 10_000_000;

/// `log (x; q)_∞` as a sum of principal logarithms.
pub fn log_qpoch_inf(x: Cplx, q: Cplx) -> Result<Cplx> {
    if q.norm() >= 1.0 {
        return Err(Error::DivergentProduct(q.norm()));
    }
    let mut s = Cplx::new(0.0, 0.0);
    let mut t = x;
    for _ in 0..POCH_MAX_TERMS {
        if t.norm() < 1e-18 {
            return Ok(s);
        }
        s += ln1p(-t);
        t *= q;
    }
    Err(Error::EvalFailure(format!(
        "(x; q)_inf with |q| = {} did not settle",
        q.norm()
    )))
}

pub fn qpoch_inf(x: Cplx, q: Cplx) -> Result<Cplx> {
    if q.norm() >= 1.0 {
        return Err(Error::DivergentProduct(q.norm()));
    }
    let mut s = Cplx::new(1.0, 0.0);
    let mut t = x;
    for _ in 0..POCH_MAX_TERMS {
        if t.norm() < 1e-18 {
            return Ok(s);
        }
        s *= 1.0 - t;
        t *= q;
    }
    Err(Error::EvalFailure(format!(
        "(x; q)_inf with |q| = {} did not settle",
        q.norm()
    )))
}

/// First `k` factors of `(x; q)_∞`.
pub fn qpoch_partial(x: Cplx, q: Cplx, k: usize) -> Cplx {
    let mut s = Cplx::new(1.0, 0.0);
    let mut t = x;
    for _ in 0..k {
        s *= 1.0 - t;
        t *= q;
    }
    s
}

/// `(x; q)_k`; for negative `k` the usual `1 / (x q^k; q)_{-k}`.
pub fn qpoch_fin(x: Cplx, q: Cplx, k: i64) -> Cplx {
    if k >= 0 {
        qpoch_partial(x, q, k as usize)
    } else {
        qpoch_partial(x * q.powi(k as i32), q, (-k) as usize).inv()
    }
}

/// `Q = q²ω` and `Q̃ = q̃²ω̄`, the nomes of the product formula.
fn nomes(p: &ModularParam) -> (Cplx, Cplx) {
    let q = p.q_poch * p.q_poch * p.omega;
    let qt = p.q_tilde_poch * p.q_tilde_poch / p.omega;
    (q, qt)
}

fn require_unit(p: &ModularParam, what: &str) -> Result<()> {
    if p.is_real_b() {
        return Err(Error::RegimeError(format!(
            "{what} needs Im b > 0; b = {} is real",
            p.b
        )));
    }
    Ok(())
}

/// `log D_b` from the ratio of infinite q-Pochhammer symbols.
pub fn log_d_b_poch(a: ANPoint, p: &ModularParam) -> Result<Cplx> {
    require_unit(p, "the product formula")?;
    let (q, qt) = nomes(p);
    let cn = p.cb_n();
    let num = log_qpoch_inf(chi_pm(1, a.shift(cn), p), q)?;
    let den = log_qpoch_inf(chi_pm(-1, a.shift(-cn), p), qt)?;
    Ok(num - den)
}

pub fn d_b_poch(a: ANPoint, p: &ModularParam) -> Result<Cplx> {
    Ok(log_d_b_poch(a, p)?.exp())
}

/// `x_{l,m} = c_b/√N + i(l/b + m b)/√N`, `n = m - l`.
pub fn pole_location(l: u32, m: u32, p: &ModularParam) -> ANPoint {
    let x = p.cb_n() + I * (l as Real / p.b + m as Real * p.b) / p.sqrt_n();
    p.point(x, m as i64 - l as i64)
}

/// Zeros sit at the negatives of the poles.
pub fn zero_location(l: u32, m: u32, p: &ModularParam) -> ANPoint {
    -pole_location(l, m, p)
}

/// Pole `(l, m)` with its closed-form residue.
pub fn residue_at(l: u32, m: u32, p: &ModularParam) -> Result<PoleDatum> {
    require_unit(p, "the residue formula")?;
    let (q, qt) = nomes(p);
    let li = l as i64;
    let ratio = (log_qpoch_inf(q, q)? - log_qpoch_inf(qt, qt)?).exp();
    let tail = (-qt).powi(l as i32) * qt.powi((li * (li - 1) / 2) as i32)
        / (qpoch_fin(q, q, m as i64) * qpoch_fin(qt, qt, li));
    let residue = -(p.sqrt_n() * p.b / (2.0 * PI)) * ratio * tail;
    Ok(PoleDatum {
        l,
        m,
        location: pole_location(l, m, p),
        residue,
    })
}

/// `B_{2k} / (2k+1)!` for `k = 1..`, through `ζ(2k)`.
fn bernoulli_coeffs() -> &'static [Real; 24] {
    static C: OnceLock<[Real; 24]> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = [0.0; 24];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i as i32 + 1;
            let zeta = match k {
                1 => PI.powi(2) / 6.0,
                2 => PI.powi(4) / 90.0,
                3 => PI.powi(6) / 945.0,
                _ => (1..200).map(|n| (n as Real).powi(-2 * k)).sum(),
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta / ((2 * k + 1) as Real * (2.0 * PI).powi(2 * k));
        }
        out
    })
}

/// `Li₂` for `|z| <= 1`, `Re z <= 1/2`: Bernoulli series in `-log(1-z)`.
fn li2_core(z: Cplx) -> Cplx {
    let u = -ln1p(-z);
    let u2 = u * u;
    let mut s = u - u2 / 4.0;
    let mut pw = u * u2;
    for &b in bernoulli_coeffs() {
        let t = b * pw;
        s += t;
        if t.norm() < 1e-18 * s.norm() {
            break;
        }
        pw *= u2;
    }
    s
}

fn li2_unchecked(z: Cplx) -> Cplx {
    let pi2_6 = PI * PI / 6.0;
    if z.norm() > 1.0 {
        let l = (-z).ln();
        return -li2_unchecked(z.inv()) - pi2_6 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        return -li2_core(1.0 - z) + pi2_6 - z.ln() * ln1p(-z);
    }
    li2_core(z)
}

/// The dilogarithm, principal branch with cut `[1, ∞)`.
pub fn li2(z: Cplx) -> Result<Cplx> {
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::BranchCut(z));
    }
    Ok(li2_unchecked(z))
}

/// `Λ(θ) = ½ Im Li₂(e^{2iθ})`.
pub fn lobachevsky(theta: Real) -> Real {
    let t = theta.rem_euclid(PI);
    if t == 0.0 || t.sin() == 0.0 {
        return 0.0;
    }
    0.5 * li2_unchecked(Cplx::from_polar(1.0, 2.0 * t)).im
}

/// The cyclic dilogarithm `φ_x(n)`, principal branches throughout.
pub fn cyclic_phi(x: Cplx, n: i64, p: &ModularParam) -> Result<Cplx> {
    let nn = p.n as i64;
    let nf = p.n as Real;
    let sn = p.sqrt_n();
    let big = 1.0 + (x * sn).exp();
    if big.norm() < 1e-14 {
        return Err(Error::SingularInput(format!(
            "1 + e^(x√N) vanishes at x = {x}"
        )));
    }
    let ex = (x / sn).exp();
    let wbar = |j: i64| Cplx::from_polar(1.0, -2.0 * PI * (j as Real + 0.5) / nf);
    let mut v = big.powf(-(nf - 1.0) / (2.0 * nf));
    for j in 0..nn {
        v *= (1.0 - ex * wbar(j)).powf(j as Real / nf);
    }
    let root = big.powf(1.0 / nf);
    for k in 0..n.rem_euclid(nn) {
        v *= (1.0 - ex * wbar(k)) / root;
    }
    Ok(v)
}
