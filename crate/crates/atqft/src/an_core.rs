//! The locally compact group `A_N = R x Z/NZ`: parameters, points, kernels
//! and quadrature against the normalised Haar measure `(1/√N) Σ_n ∫ dx`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qdilog::faddeev::FaddeevTable;
use crate::{c, Cplx, Error, Real, Result, I};

/// The pair `(b, N)` with every derived constant.
#[derive(Clone)]
pub struct ModularParam {
    pub b: Cplx,
    pub n: u32,
    pub c_b: Cplx,
    pub omega: Cplx,
    pub q_poch: Cplx,
    pub q_tilde_poch: Cplx,
    pub zeta0: Cplx,
    pub zeta_inv: Cplx,
    pub(crate) faddeev: Arc<FaddeevTable>,
}

impl fmt::Debug for ModularParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModularParam")
            .field("b", &self.b)
            .field("N", &self.n)
            .finish()
    }
}

/// Tolerance on `Im b (|b| - 1) = 0`.
const REGIME_TOL: Real = 1e-12;

impl ModularParam {
    pub fn new(b: Cplx, n: u32) -> Result<Self> {
        if !(b.re > 0.0) || !b.im.is_finite() {
            return Err(Error::InvalidParam(format!(
                "Re b must be positive, got b = {b}"
            )));
        }
        if b.im < 0.0 {
            return Err(Error::InvalidParam(format!(
                "Im b must be non-negative, got b = {b}"
            )));
        }
        if (b.im * (b.norm() - 1.0)).abs() > REGIME_TOL {
            return Err(Error::InvalidParam(format!(
                "b must be real or on the unit circle, got b = {b}"
            )));
        }
        if n == 0 || n % 2 == 0 {
            return Err(Error::InvalidParam(format!(
                "N must be odd and positive, got {n}"
            )));
        }
        let nf = n as Real;
        let c_b = I * (b + b.inv()) / 2.0;
        let c2 = c_b * c_b;
        Ok(Self {
            b,
            n,
            c_b,
            omega: Cplx::from_polar(1.0, 2.0 * PI / nf),
            q_poch: (I * PI * b * b / nf).exp(),
            q_tilde_poch: (-I * PI / (b * b) / nf).exp(),
            zeta0: (-I * PI * (nf - 4.0 * c2 / nf) / 12.0).exp(),
            zeta_inv: (I * PI * (nf + 2.0 * c2 / nf) / 6.0).exp(),
            faddeev: Arc::new(FaddeevTable::new(b)),
        })
    }

    pub fn real(b: Real, n: u32) -> Result<Self> {
        Self::new(c(b, 0.0), n)
    }

    /// `b = e^{iθ}`.
    pub fn unit(theta: Real, n: u32) -> Result<Self> {
        Self::new(Cplx::from_polar(1.0, theta), n)
    }

    /// The same level with `b` replaced by `1/b`.
    pub fn dual(&self) -> Result<Self> {
        let binv = self.b.inv();
        // 1/e^{iθ} sits in the lower half plane; Φ_b is even in b so use the mirror.
        let b = if binv.im < 0.0 {
            c(binv.re, -binv.im)
        } else {
            binv
        };
        if b.im != 0.0 {
            return Err(Error::InvalidParam(
                "b -> 1/b leaves the first quadrant for |b| = 1".into(),
            ));
        }
        Self::new(b, self.n)
    }

    pub fn sqrt_n(&self) -> Real {
        (self.n as Real).sqrt()
    }

    /// `c_b / √N`, the recurring shift.
    pub fn cb_n(&self) -> Cplx {
        self.c_b / self.sqrt_n()
    }

    pub fn point(&self, x: impl Into<Cplx>, n: i64) -> ANPoint {
        ANPoint::new(x, n, self.n)
    }

    pub fn is_real_b(&self) -> bool {
        self.b.im == 0.0
    }
}

/// A point `(x, n)` of `A_N`; `x` is complex so shifted contours can be sampled.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ANPoint {
    pub x: Cplx,
    n: u32,
    modulus: u32,
}

impl ANPoint {
    pub fn new(x: impl Into<Cplx>, n: i64, modulus: u32) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Self {
            x: x.into(),
            n: n.rem_euclid(modulus as i64) as u32,
            modulus,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn with_x(self, x: Cplx) -> Self {
        Self { x, ..self }
    }

    pub fn with_n(self, n: i64) -> Self {
        Self::new(self.x, n, self.modulus)
    }

    /// Shift the continuous coordinate only.
    pub fn shift(self, dx: Cplx) -> Self {
        self.with_x(self.x + dx)
    }

    /// The residue as a signed integer in `(-N/2, N/2]`.
    pub fn n_signed(&self) -> i64 {
        let n = self.n as i64;
        let m = self.modulus as i64;
        if 2 * n > m {
            n - m
        } else {
            n
        }
    }
}

impl Add for ANPoint {
    type Output = ANPoint;
    fn add(self, o: ANPoint) -> ANPoint {
        debug_assert_eq!(self.modulus, o.modulus);
        ANPoint::new(self.x + o.x, self.n as i64 + o.n as i64, self.modulus)
    }
}

impl Sub for ANPoint {
    type Output = ANPoint;
    fn sub(self, o: ANPoint) -> ANPoint {
        debug_assert_eq!(self.modulus, o.modulus);
        ANPoint::new(self.x - o.x, self.n as i64 - o.n as i64, self.modulus)
    }
}

impl Neg for ANPoint {
    type Output = ANPoint;
    fn neg(self) -> ANPoint {
        ANPoint::new(-self.x, -(self.n as i64), self.modulus)
    }
}

/// Horizontal integration line `R + i d`, truncated adaptively.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub offset_d: Real,
    pub x_max: Real,
    pub rel_tol: Real,
    pub max_nodes: usize,
}

impl Default for Contour {
    fn default() -> Self {
        Self {
            offset_d: 0.0,
            x_max: 8.0,
            rel_tol: 1e-11,
            max_nodes: 2_000_000,
        }
    }
}

impl Contour {
    pub fn at(offset_d: Real) -> Self {
        Self {
            offset_d,
            ..Self::default()
        }
    }

    pub fn with_tol(self, rel_tol: Real) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn with_x_max(self, x_max: Real) -> Self {
        Self { x_max, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Cplx,
    pub err_estimate: Real,
    pub nodes_used: usize,
}

/// `⟨(x,n),(y,m)⟩ = e^{2πixy} e^{-2πinm/N}`.
pub fn fourier_kernel(a: ANPoint, a2: ANPoint) -> Cplx {
    let m = a.modulus as u64;
    let nm = (a.n as u64 * a2.n as u64) % m;
    (2.0 * PI * I * a.x * a2.x).exp() * Cplx::from_polar(1.0, -2.0 * PI * nm as Real / m as Real)
}

/// `⟨(x,n)⟩ = e^{πix²} e^{-πin(n+N)/N}`.
pub fn gauss_kernel(a: ANPoint) -> Cplx {
    let m = a.modulus as u64;
    let n = a.n as u64;
    let k = (n * (n + m)) % (2 * m);
    (PI * I * a.x * a.x).exp() * Cplx::from_polar(1.0, -PI * k as Real / m as Real)
}

/// `(1/√N) Σ_n ∫_{R+id} f(x,n) dx` for an infallible integrand.
pub fn haar_integrate<F>(f: F, contour: &Contour, p: &ModularParam) -> Result<QuadratureResult>
where
    F: Fn(ANPoint) -> Cplx + Sync,
{
    haar_integrate_fallible(|a| Ok(f(a)), contour, p)
}

/// As [`haar_integrate`] but the integrand may fail (poles, overflow).
pub fn haar_integrate_fallible<F>(
    f: F,
    contour: &Contour,
    p: &ModularParam,
) -> Result<QuadratureResult>
where
    F: Fn(ANPoint) -> Result<Cplx> + Sync,
{
    let nn = p.n;
    let d = contour.offset_d;
    // The scale is Σ|f_n| so that exact cancellation across residues is
    // recognised as zero rather than chased into roundoff.
    let g = |t: Real| -> Result<(Cplx, Real)> {
        let x = c(t, d);
        let mut s = Cplx::new(0.0, 0.0);
        let mut m = 0.0;
        for n in 0..nn {
            let v = f(ANPoint::new(x, n as i64, nn))?;
            s += v;
            m += v.norm();
        }
        Ok((s, m))
    };
    let mut r = integrate_scaled(g, contour)?;
    let norm = p.sqrt_n();
    r.value /= norm;
    r.err_estimate /= norm;
    r.nodes_used *= nn as usize;
    Ok(r)
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [Real; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [Real; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [Real; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: Real,
    b: Real,
    val: Cplx,
    err: Real,
    l1: Real,
}

fn gk15<G>(g: &G, a: Real, b: Real) -> Result<Panel>
where
    G: Fn(Real) -> Result<(Cplx, Real)>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (fc, mc) = g(mid)?;
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    let mut l1 = mc * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, m1) = g(mid - dx)?;
        let (f2, m2) = g(mid + dx)?;
        rk += (f1 + f2) * WGK[j];
        l1 += (m1 + m2) * WGK[j];
        if j % 2 == 1 {
            rg += (f1 + f2) * WG[j / 2];
        }
    }
    let val = rk * half;
    if !val.re.is_finite() || !val.im.is_finite() {
        return Err(Error::NonConvergent(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok(Panel {
        a,
        b,
        val,
        err: ((rk - rg) * half).norm(),
        l1: l1 * half.abs(),
    })
}

/// Floor on the attainable error relative to `∫|f|`: cancellation below this
/// is roundoff, not quadrature error.
const CANCEL_FLOOR: Real = 1e-15;
/// Hard cap on how far the truncation window may grow.
const X_MAX_CAP: Real = 4096.0;

/// Adaptive GK15 over `[-X, X]`, with `X` grown until the outermost panels are
/// negligible. Panel evaluations run in parallel; sums are taken in order.
pub fn integrate_line<G>(g: G, contour: &Contour) -> Result<QuadratureResult>
where
    G: Fn(Real) -> Result<Cplx> + Sync,
{
    integrate_scaled(|t| g(t).map(|v| (v, v.norm())), contour)
}

/// [`integrate_line`] where the integrand also reports the magnitude against
/// which cancellation is judged.
fn integrate_scaled<G>(g: G, contour: &Contour) -> Result<QuadratureResult>
where
    G: Fn(Real) -> Result<(Cplx, Real)> + Sync,
{
    if !(contour.x_max > 0.0) || !(contour.rel_tol > 0.0) {
        return Err(Error::PreconditionViolated(
            "contour needs x_max > 0 and rel_tol > 0".into(),
        ));
    }
    let eval = |iv: Vec<(Real, Real)>| -> Result<Vec<Panel>> {
        iv.into_par_iter().map(|(a, b)| gk15(&g, a, b)).collect()
    };
    let unit_panels = |lo: Real, hi: Real| -> Vec<(Real, Real)> {
        let k = ((hi - lo).ceil() as usize).max(1);
        let w = (hi - lo) / k as Real;
        (0..k)
            .map(|i| (lo + i as Real * w, lo + (i + 1) as Real * w))
            .collect()
    };

    let mut xm = contour.x_max;
    let mut panels = eval(unit_panels(-xm, xm))?;
    let mut nodes = 15 * panels.len();
    loop {
        loop {
            let total: Cplx = panels.iter().map(|p| p.val).sum();
            let err: Real = panels.iter().map(|p| p.err).sum();
            let l1: Real = panels.iter().map(|p| p.l1).sum();
            let target = contour.rel_tol * total.norm() + CANCEL_FLOOR * l1 + Real::MIN_POSITIVE;
            if err <= target {
                break;
            }
            if nodes > contour.max_nodes {
                return Err(Error::NonConvergent(format!(
                    "error {err:.3e} above target {target:.3e} after {nodes} nodes"
                )));
            }
            let share = target / panels.len() as Real;
            let worst = panels.iter().map(|p| p.err).fold(0.0, Real::max);
            let mut keep = Vec::with_capacity(panels.len());
            let mut split = Vec::new();
            for p in &panels {
                if p.err > share.max(0.1 * worst) {
                    let m = 0.5 * (p.a + p.b);
                    split.push((p.a, m));
                    split.push((m, p.b));
                } else {
                    keep.push(*p);
                }
            }
            nodes += 15 * split.len();
            keep.extend(eval(split)?);
            keep.sort_by(|x, y| x.a.total_cmp(&y.a));
            panels = keep;
        }
        let total: Cplx = panels.iter().map(|p| p.val).sum();
        let l1: Real = panels.iter().map(|p| p.l1).sum();
        let edge = |pred: &dyn Fn(&Panel) -> bool| -> Real {
            panels.iter().filter(|p| pred(p)).map(|p| p.l1).sum()
        };
        let left = edge(&|p| p.a < -xm + 1.0);
        let right = edge(&|p| p.b > xm - 1.0);
        let tol = 0.1 * contour.rel_tol * total.norm() + CANCEL_FLOOR * l1;
        if left <= tol && right <= tol {
            let err: Real = panels.iter().map(|p| p.err).sum();
            return Ok(QuadratureResult {
                value: total,
                err_estimate: err + left + right,
                nodes_used: nodes,
            });
        }
        let grow = (0.5 * xm).max(2.0);
        if xm + grow > X_MAX_CAP || nodes > contour.max_nodes {
            return Err(Error::NonConvergent(format!(
                "integrand not decaying: tail mass {:.3e} at |x| = {xm}",
                left.max(right)
            )));
        }
        let mut fresh = Vec::new();
        if left > tol {
            fresh.extend(unit_panels(-xm - grow, -xm));
        }
        if right > tol {
            fresh.extend(unit_panels(xm, xm + grow));
        }
        // Both sides grow together so the window stays symmetric.
        if left <= tol {
            fresh.extend(unit_panels(-xm - grow, -xm));
        }
        if right <= tol {
            fresh.extend(unit_panels(xm, xm + grow));
        }
        xm += grow;
        nodes += 15 * fresh.len();
        panels.extend(eval(fresh)?);
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    }
}

/// Fixed composite Kronrod-15 rule on `[a, b]` split into `panels` pieces.
pub fn kronrod_panels<G>(g: G, a: Real, b: Real, panels: usize) -> Result<Cplx>
where
    G: Fn(Real) -> Result<Cplx>,
{
    let w = (b - a) / panels as Real;
    let mut s = Cplx::new(0.0, 0.0);
    for k in 0..panels {
        let lo = a + k as Real * w;
        s += gk15(&|t| g(t).map(|v| (v, v.norm())), lo, lo + w)?.val;
    }
    Ok(s)
}

/// `(2πi)^{-1} ∮ f` over the circle `|z - z0| = r` (trapezoid rule, which is
/// spectrally accurate for periodic analytic integrands).
pub fn circle_integral<F>(f: F, z0: Cplx, r: Real, nodes: usize) -> Result<Cplx>
where
    F: Fn(Cplx) -> Result<Cplx>,
{
    let mut s = Cplx::new(0.0, 0.0);
    for k in 0..nodes {
        let e = Cplx::from_polar(1.0, 2.0 * PI * k as Real / nodes as Real);
        s += f(z0 + r * e)? * r * e;
    }
    Ok(s / nodes as Real)
}

/// `F(f)(x) = ∫ f(y) ⟨x,y⟩ dy`, sampled on demand.
pub fn fourier_transform<'a, F>(
    f: F,
    p: &'a ModularParam,
    contour: Contour,
) -> impl Fn(ANPoint) -> Result<QuadratureResult> + 'a
where
    F: Fn(ANPoint) -> Result<Cplx> + Sync + 'a,
{
    move |x| haar_integrate_fallible(|y| Ok(f(y)? * fourier_kernel(x, y)), &contour, p)
}

/// `f̃(x) = ∫ f(y) ⟨x,y⟩^{-1} dy` (the conjugate kernel on real arguments).
pub fn inverse_fourier<'a, F>(
    f: F,
    p: &'a ModularParam,
    contour: Contour,
) -> impl Fn(ANPoint) -> Result<QuadratureResult> + 'a
where
    F: Fn(ANPoint) -> Result<Cplx> + Sync + 'a,
{
    move |x| haar_integrate_fallible(|y| Ok(f(y)? / fourier_kernel(x, y)), &contour, p)
}
