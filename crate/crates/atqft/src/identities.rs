//! Numerical verification of the global identities satisfied by `D_b`.
//!
//! Every check returns an [`IdentityReport`]; failures are data, not errors.
//! Integrals that would only converge conditionally are moved onto a
//! horizontal line inside the pole-free strip, using the known pole lattice.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::an_core::{gauss_kernel, haar_integrate_fallible, inverse_fourier, Contour};
use crate::charged::{charged_symmetries_check, ChargeTriple};
use crate::qdilog::{chi_pm, d_b, d_b_poch, log_d_b, phi_b};
use crate::{c, ANPoint, Cplx, Error, ModularParam, Real, Result, I};

/// Tolerance registry; acceptance tests read from here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Pointwise identities of `D_b` (inversion, unitarity, difference equations).
    pub pointwise: Real,
    pub duality: Real,
    pub n1_reduction: Real,
    pub representation: Real,
    /// Two closed forms of the same quantity.
    pub closed_form: Real,
    /// The two Fourier closed forms.
    pub fourier_closed_form: Real,
    /// Anything involving one numerical integral.
    pub quadrature: Real,
    pub pentagon: Real,
    pub residue: Real,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pointwise: 1e-8,
            duality: 1e-9,
            n1_reduction: 1e-10,
            representation: 1e-8,
            closed_form: 1e-10,
            fourier_closed_form: 1e-12,
            quadrature: 1e-6,
            pentagon: 1e-5,
            residue: 1e-6,
        }
    }
}

/// The parameter cell a report refers to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRecord {
    pub b: Cplx,
    pub n: u32,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub params: ParamRecord,
    /// Worst residual of the main comparison.
    pub max_residual: Real,
    pub tolerance: Real,
    /// Worst disagreement between closed forms, where the identity has two.
    pub closed_form_residual: Option<Real>,
    pub closed_form_tolerance: Option<Real>,
    pub points_checked: usize,
    pub passed: bool,
    /// Set when a check could not be carried out.
    pub error: Option<String>,
}

impl IdentityReport {
    fn new(name: &str, p: &ModularParam, detail: String, tol: Real) -> Self {
        Self {
            name: name.to_string(),
            params: ParamRecord {
                b: p.b,
                n: p.n,
                detail,
            },
            max_residual: 0.0,
            tolerance: tol,
            closed_form_residual: None,
            closed_form_tolerance: None,
            points_checked: 0,
            passed: false,
            error: None,
        }
    }

    fn closed_forms(mut self, tol: Real) -> Self {
        self.closed_form_residual = Some(0.0);
        self.closed_form_tolerance = Some(tol);
        self
    }

    fn record(&mut self, r: Real) {
        self.max_residual = self.max_residual.max(r);
        if r.is_nan() {
            self.max_residual = Real::NAN;
        }
        self.points_checked += 1;
    }

    fn record_closed(&mut self, r: Real) {
        let cur = self.closed_form_residual.unwrap_or(0.0);
        self.closed_form_residual = Some(if r.is_nan() { Real::NAN } else { cur.max(r) });
    }

    fn finish(mut self) -> Self {
        let main = self.max_residual < self.tolerance;
        let closed = match (self.closed_form_residual, self.closed_form_tolerance) {
            (Some(r), Some(t)) => r < t,
            _ => true,
        };
        self.passed = main && closed && self.error.is_none() && self.points_checked > 0;
        self
    }

    fn failed(mut self, e: Error) -> Self {
        self.error = Some(e.to_string());
        self.passed = false;
        self
    }
}

fn rel(lhs: Cplx, rhs: Cplx) -> Real {
    (lhs - rhs).norm() / rhs.norm()
}

/// 15 points on `[-1, 1] x Z/N` used by the pointwise checks; `x = 0` is
/// avoided because the shifted arguments hit a pole there at `b = 1`.
pub fn pointwise_grid(p: &ModularParam) -> Vec<ANPoint> {
    (0..15)
        .map(|k| p.point(-0.99 + 1.97 * k as Real / 14.0, k as i64))
        .collect()
}

fn dpt(x: Cplx, n: i64, p: &ModularParam) -> Result<Cplx> {
    d_b(p.point(x, n), p)
}

/// `D_b(x,n) D_b(-x,-n) = ⟨x,n⟩ / ζ_inv`.
pub fn check_inversion(p: &ModularParam, tol: &Tolerances) -> IdentityReport {
    let mut r = IdentityReport::new("inversion", p, "15-point grid".into(), tol.pointwise);
    for a in pointwise_grid(p) {
        let lhs = match d_b(a, p).and_then(|u| Ok(u * d_b(-a, p)?)) {
            Ok(v) => v,
            Err(e) => return r.failed(e),
        };
        r.record((lhs - gauss_kernel(a) / p.zeta_inv).norm());
    }
    r.finish()
}

/// `|b| = 1`: `|D_b(x,n)| = 1`; `b` real: `conj D_b(x,n) · D_b(x,-n) = 1`.
pub fn check_unitarity(p: &ModularParam, tol: &Tolerances) -> IdentityReport {
    let detail = if p.is_real_b() { "b real" } else { "|b| = 1" };
    let mut r = IdentityReport::new("unitarity", p, detail.into(), tol.pointwise);
    for a in pointwise_grid(p) {
        let partner = if p.is_real_b() {
            a.with_n(-(a.n() as i64))
        } else {
            a
        };
        let v = match d_b(a, p).and_then(|u| Ok(u.conj() * d_b(partner, p)?)) {
            Ok(v) => v,
            Err(e) => return r.failed(e),
        };
        r.record((v - 1.0).norm());
    }
    r.finish()
}

/// `D_b(x, -n) = D_{1/b}(x, n)`; only meaningful for real `b`.
pub fn check_duality(p: &ModularParam, tol: &Tolerances) -> Option<IdentityReport> {
    let q = p.dual().ok()?;
    let mut r = IdentityReport::new("duality", p, "b -> 1/b".into(), tol.duality);
    for a in pointwise_grid(p) {
        let v = d_b(a.with_n(-(a.n() as i64)), p).and_then(|u| Ok((u, d_b(a, &q)?)));
        match v {
            Ok((u, w)) => r.record((u - w).norm()),
            Err(e) => return Some(r.failed(e)),
        }
    }
    Some(r.finish())
}

/// The four shift relations in the directions `i b^{±1}/√N`.
pub fn check_difference_equations(p: &ModularParam, tol: &Tolerances) -> IdentityReport {
    let mut r = IdentityReport::new(
        "difference",
        p,
        "both signs, both directions".into(),
        tol.pointwise,
    );
    let nf = p.n as Real;
    let sn = p.sqrt_n();
    for a in pointwise_grid(p) {
        for sign in [1i32, -1] {
            let bb = if sign > 0 { p.b } else { p.b.inv() };
            let s = sign as i64;
            let chi = chi_pm(sign, a, p);
            let ph_up = (-PI * I * (nf - 1.0) / nf).exp() * (PI * I * bb * bb / nf).exp();
            let ph_dn = (PI * I * (nf - 1.0) / nf).exp() * (-PI * I * bb * bb / nf).exp();
            let step = I * bb / sn;
            let res = (|| -> Result<(Cplx, Cplx, Cplx)> {
                let d0 = d_b(a, p)?;
                let up = dpt(a.x + step, a.n() as i64 + s, p)?;
                let dn = dpt(a.x - step, a.n() as i64 - s, p)?;
                Ok((d0, up, dn))
            })();
            let (d0, up, dn) = match res {
                Ok(v) => v,
                Err(e) => return r.failed(e),
            };
            r.record(rel(up, d0 / (1.0 + chi * ph_up)));
            r.record(rel(dn, d0 * (1.0 + chi * ph_dn)));
        }
    }
    r.finish()
}

/// `D_b(x, 0) = Φ_b(x)` at `N = 1` on 20 points.
pub fn check_n1_reduction(p: &ModularParam, tol: &Tolerances) -> Option<IdentityReport> {
    if p.n != 1 {
        return None;
    }
    let mut r = IdentityReport::new("n1_reduction", p, "20 points".into(), tol.n1_reduction);
    for k in 0..20 {
        let x = c(-2.0 + 4.0 * k as Real / 19.0, 0.1 * ((k % 5) as Real - 2.0));
        match d_b(p.point(x, 0), p).and_then(|d| Ok((d, phi_b(x, p)?))) {
            Ok((d, f)) => r.record((d - f).norm()),
            Err(e) => return Some(r.failed(e)),
        }
    }
    Some(r.finish())
}

/// Integral route against the q-Pochhammer route, `|b| = 1` only.
pub fn check_representation(p: &ModularParam, tol: &Tolerances) -> Option<IdentityReport> {
    if p.is_real_b() {
        return None;
    }
    let mut r = IdentityReport::new(
        "representation",
        p,
        "integral vs product".into(),
        tol.representation,
    );
    let s = p.cb_n().im;
    for a in pointwise_grid(p) {
        for off in [0.0, 0.4 * s, -0.4 * s] {
            let a = a.shift(c(0.0, off));
            match d_b(a, p).and_then(|u| Ok((u, d_b_poch(a, p)?))) {
                Ok((u, w)) => r.record(rel(u, w)),
                Err(e) => return Some(r.failed(e)),
            }
        }
    }
    Some(r.finish())
}

/// Width of the pole-free strip of `D_b` around the real axis.
fn strip(p: &ModularParam) -> Real {
    p.cb_n().im
}

fn integrate(
    f: impl Fn(ANPoint) -> Result<Cplx> + Sync,
    d: Real,
    p: &ModularParam,
) -> Result<Cplx> {
    let contour = Contour::at(d).with_tol(1e-9);
    Ok(haar_integrate_fallible(f, &contour, p)?.value)
}

/// `∫ D_b(x)⟨x,(w,c)⟩ dx` and `∫ D_b(x)⁻¹⟨x,(w,c)⟩ dx` against both closed
/// forms each. Convergent for `-Im c_b/√N < Im w < 0`.
pub fn check_fourier_formula(
    w: Cplx,
    cc: i64,
    p: &ModularParam,
    tol: &Tolerances,
) -> IdentityReport {
    let detail = format!("w = {w}, c = {cc}");
    let r = IdentityReport::new("fourier", p, detail, tol.quadrature)
        .closed_forms(tol.fourier_closed_form);
    match fourier_residuals(w, cc, p) {
        Ok(list) => {
            let mut r = r;
            for (num, cf) in list {
                r.record(num);
                r.record_closed(cf);
            }
            r.finish()
        }
        Err(e) => r.failed(e),
    }
}

/// `(numeric vs closed, closed vs closed)` for `D` and `D⁻¹`.
pub fn fourier_residuals(w: Cplx, cc: i64, p: &ModularParam) -> Result<[(Real, Real); 2]> {
    let cn = p.cb_n();
    let wp = p.point(w, cc);
    let g = gauss_kernel(wp);
    let sigma = (w.im.abs() + strip(p)) / 2.0;
    let kern = |x: ANPoint| crate::an_core::fourier_kernel(x, wp);
    let lhs_p = integrate(|x| Ok(d_b(x, p)? * kern(x)), sigma, p)?;
    let d_neg = dpt(-w - cn, -cc, p)?;
    let d_pos = dpt(w + cn, cc, p)?;
    let r1 = (2.0 * PI * I * w * cn).exp() * p.zeta0 / d_neg;
    let r2 = d_pos / (g * p.zeta0);
    let lhs_m = integrate(|x| Ok((-log_d_b(x, p)?).exp() * kern(x)), -sigma, p)?;
    let s1 = g * p.zeta0 / d_neg;
    let s2 = d_pos * (-2.0 * PI * I * w * cn).exp() / p.zeta0;
    Ok([(rel(lhs_p, r1), rel(r1, r2)), (rel(lhs_m, s1), rel(s1, s2))])
}

/// Which of the three convergence inequalities fail, if any.
pub fn summation_conditions(u: Cplx, v: Cplx, w: Cplx, p: &ModularParam) -> Vec<&'static str> {
    let cn = p.cb_n();
    let mut bad = Vec::new();
    if !((v + cn).im > 0.0) {
        bad.push("Im(v + c_b/√N) > 0");
    }
    if !((cn - u).im > 0.0) {
        bad.push("Im(-u + c_b/√N) > 0");
    }
    if !((v - u).im < w.im && w.im < 0.0) {
        bad.push("Im(v - u) < Im w < 0");
    }
    bad
}

/// `Ψ = ∫ D_b(x+u, a+d)/D_b(x+v, b+d) e^{2πiwx} e^{-2πicd/N}` against both
/// closed forms; requires `Im b > 0` and the convergence inequalities.
pub fn check_summation(
    u: Cplx,
    v: Cplx,
    w: Cplx,
    abc: (i64, i64, i64),
    p: &ModularParam,
    tol: &Tolerances,
) -> Result<IdentityReport> {
    if p.is_real_b() {
        return Err(Error::RegimeError(
            "summation formula needs Im b > 0".into(),
        ));
    }
    let bad = summation_conditions(u, v, w, p);
    if !bad.is_empty() {
        return Err(Error::PreconditionViolated(bad.join("; ")));
    }
    let (a, b, cc) = abc;
    let detail = format!("u = {u}, v = {v}, w = {w}, (a,b,c) = ({a},{b},{cc})");
    let mut r =
        IdentityReport::new("summation", p, detail, tol.quadrature).closed_forms(tol.closed_form);
    match summation_values(u, v, w, abc, p) {
        Ok((num, r1, r2)) => {
            r.record(rel(num, r1));
            r.record_closed(rel(r1, r2));
            Ok(r.finish())
        }
        Err(e) => Ok(r.failed(e)),
    }
}

/// `(numeric Ψ, first closed form, second closed form)`.
pub fn summation_values(
    u: Cplx,
    v: Cplx,
    w: Cplx,
    (a, b, cc): (i64, i64, i64),
    p: &ModularParam,
) -> Result<(Cplx, Cplx, Cplx)> {
    let n = p.n as i64;
    let nf = p.n as Real;
    let cn = p.cb_n();
    let num = integrate(
        |x| {
            let d = x.n() as i64;
            let top = log_d_b(p.point(x.x + u, a + d), p)?;
            let bot = log_d_b(p.point(x.x + v, b + d), p)?;
            let ph = 2.0 * PI * I * w * x.x - 2.0 * PI * I * ((cc * d).rem_euclid(n)) as Real / nf;
            Ok((top - bot + ph).exp())
        },
        0.0,
        p,
    )?;
    let om = |k: i64| Cplx::from_polar(1.0, 2.0 * PI * k.rem_euclid(n) as Real / nf);
    let r1 = p.zeta0 * dpt(v - u - w + cn, b - a - cc, p)?
        / (dpt(-w - cn, -cc, p)? * dpt(v - u + cn, b - a, p)?)
        * (2.0 * PI * I * w * (cn - u)).exp()
        * om(a * cc);
    let r2 = dpt(w + cn, cc, p)? * dpt(-v + u - cn, a - b, p)?
        / dpt(-v + u + w - cn, a - b + cc, p)?
        * (2.0 * PI * I * w * (-cn - v)).exp()
        * om(b * cc)
        / p.zeta0;
    Ok((num, r1, r2))
}

/// `D̃(w, c) = ∫ D_b(y) ⟨(w,c),y⟩⁻¹ dy = D_b(c_b/√N - w, -c) ⟨w,c⟩⁻¹ / ζ₀`,
/// valid for `0 < Im w < Im c_b/√N`.
pub fn d_tilde(w: ANPoint, p: &ModularParam) -> Result<Cplx> {
    let ld = log_d_b(p.point(p.cb_n() - w.x, -(w.n() as i64)), p)?;
    Ok(ld.exp() / (gauss_kernel(w) * p.zeta0))
}

/// `D̃` by quadrature on `Im y = τ`, `Im w < τ < Im c_b/√N`.
pub fn d_tilde_numeric(w: ANPoint, tau: Real, p: &ModularParam) -> Result<Cplx> {
    let contour = Contour::at(tau).with_tol(1e-10);
    Ok(inverse_fourier(|y| d_b(y, p), p, contour)(w)?.value)
}

/// `(⟨x,y⟩ D̃(x) D̃(y), ∫ D̃(x-z) D̃(z) D̃(y-z) ⟨z⟩ dz)` on `Im z = σ`.
pub fn pentagon_sides(
    x: ANPoint,
    y: ANPoint,
    sigma: Real,
    p: &ModularParam,
) -> Result<(Cplx, Cplx)> {
    let lhs = crate::an_core::fourier_kernel(x, y) * d_tilde(x, p)? * d_tilde(y, p)?;
    let rhs = integrate(
        |z| Ok(d_tilde(x - z, p)? * d_tilde(z, p)? * d_tilde(y - z, p)? * gauss_kernel(z)),
        sigma,
        p,
    )?;
    Ok((lhs, rhs))
}

/// A contour height for the pentagon integral, or why none exists.
pub fn pentagon_contour(x: ANPoint, y: ANPoint, p: &ModularParam) -> Result<Real> {
    let lo = 0.0f64.max(x.x.im + y.x.im - strip(p));
    let hi = x.x.im.min(y.x.im);
    if !(lo < hi) {
        return Err(Error::PreconditionViolated(format!(
            "no contour: need max(0, Im(x+y) - Im c_b/√N) < min(Im x, Im y), got {lo} >= {hi}"
        )));
    }
    Ok(0.5 * (lo + hi))
}

pub fn check_integral_pentagon(
    x: ANPoint,
    y: ANPoint,
    p: &ModularParam,
    tol: &Tolerances,
) -> IdentityReport {
    let detail = format!("x = ({}, {}), y = ({}, {})", x.x, x.n(), y.x, y.n());
    let mut r = IdentityReport::new("pentagon", p, detail, tol.pentagon);
    let res = pentagon_contour(x, y, p).and_then(|s| pentagon_sides(x, y, s, p));
    match res {
        Ok((lhs, rhs)) => {
            r.record(rel(rhs, lhs));
            r.finish()
        }
        Err(e) => r.failed(e),
    }
}

/// Default Fourier sample points, scaled to the strip.
pub fn fourier_points(p: &ModularParam) -> Vec<(Cplx, i64)> {
    // Deeper points converge too, but the chirp e^{iπx²} of the tail makes
    // them expensive as Im w approaches -Im c_b/√N.
    let s = strip(p);
    vec![
        (c(0.0, -0.3 * s), 0),
        (c(0.15, -0.45 * s), 1),
        (c(-0.2, -0.55 * s), 2),
        (c(0.3, -0.5 * s), 4),
    ]
}

/// Default admissible summation points, scaled to the strip.
pub fn summation_points(p: &ModularParam) -> Vec<(Cplx, Cplx, Cplx, (i64, i64, i64))> {
    let s = strip(p);
    vec![
        (
            c(0.0, 0.4 * s),
            c(0.0, -0.4 * s),
            c(-0.1, -0.5 * s),
            (0, 0, 0),
        ),
        (
            c(0.0, 0.4 * s),
            c(0.0, -0.4 * s),
            c(-0.1, -0.5 * s),
            (1, 2, 1),
        ),
        (
            c(0.1, 0.3 * s),
            c(-0.05, -0.5 * s),
            c(0.2, -0.6 * s),
            (2, 0, 1),
        ),
    ]
}

/// Default pentagon points, in the upper half of the strip.
pub fn pentagon_points(p: &ModularParam) -> Vec<(ANPoint, ANPoint)> {
    let s = strip(p);
    vec![
        (p.point(c(0.1, 0.35 * s), 1), p.point(c(-0.2, 0.3 * s), 2)),
        (p.point(c(0.0, 0.3 * s), 0), p.point(c(0.0, 0.3 * s), 0)),
        (p.point(c(-0.3, 0.25 * s), 2), p.point(c(0.25, 0.4 * s), 1)),
    ]
}

/// Names accepted by [`run_suite`].
pub const SUITE: &[&str] = &[
    "inversion",
    "unitarity",
    "duality",
    "difference",
    "n1_reduction",
    "representation",
    "fourier",
    "summation",
    "pentagon",
    "charged",
];

/// `b ∈ {0.7, 1.0, 1.3, e^{iπ/5}, e^{iπ/6}}`, `N ∈ {1, 3, 5}`.
pub fn default_grid() -> Vec<(Cplx, u32)> {
    let bs = [
        c(0.7, 0.0),
        c(1.0, 0.0),
        c(1.3, 0.0),
        Cplx::from_polar(1.0, PI / 5.0),
        Cplx::from_polar(1.0, PI / 6.0),
    ];
    bs.iter().flat_map(|&b| [1, 3, 5].map(|n| (b, n))).collect()
}

fn run_one(name: &str, p: &ModularParam, tol: &Tolerances) -> Vec<IdentityReport> {
    match name {
        "inversion" => vec![check_inversion(p, tol)],
        "unitarity" => vec![check_unitarity(p, tol)],
        "duality" => check_duality(p, tol).into_iter().collect(),
        "difference" => vec![check_difference_equations(p, tol)],
        "n1_reduction" => check_n1_reduction(p, tol).into_iter().collect(),
        "representation" => check_representation(p, tol).into_iter().collect(),
        "fourier" => fourier_points(p)
            .into_iter()
            .map(|(w, k)| check_fourier_formula(w, k, p, tol))
            .collect(),
        "summation" if !p.is_real_b() => summation_points(p)
            .into_iter()
            .map(|(u, v, w, abc)| {
                check_summation(u, v, w, abc, p, tol).unwrap_or_else(|e| {
                    IdentityReport::new(
                        "summation",
                        p,
                        format!("u = {u}, v = {v}, w = {w}"),
                        tol.quadrature,
                    )
                    .failed(e)
                })
            })
            .collect(),
        "pentagon" => pentagon_points(p)
            .into_iter()
            .map(|(x, y)| check_integral_pentagon(x, y, p, tol))
            .collect(),
        "charged" => {
            let t = 0.2 / p.sqrt_n();
            let ch = ChargeTriple::new(t, t, p.n).expect("0.4/√N < 1/√N");
            let grid: Vec<ANPoint> = [(0.1, 0), (-0.4, 1), (0.3, 2)]
                .iter()
                .map(|&(x, n)| p.point(x, n))
                .collect();
            let mut r = IdentityReport::new("charged", p, format!("a = c = {t}"), tol.quadrature);
            match charged_symmetries_check(ch, p, &grid) {
                Ok(s) => {
                    r.record(s.tilde);
                    r.record(s.conj_with_i);
                    r.record(s.conj_tilde);
                    r.points_checked = s.points;
                    vec![r.finish()]
                }
                Err(e) => vec![r.failed(e)],
            }
        }
        _ => Vec::new(),
    }
}

/// Run the named checks over every `(b, N)` cell, skipping regime-incompatible ones.
pub fn run_suite(names: &[&str], grid: &[(Cplx, u32)], tol: &Tolerances) -> Vec<IdentityReport> {
    let cells: Vec<(&str, (Cplx, u32))> = names
        .iter()
        .flat_map(|&n| grid.iter().map(move |&g| (n, g)))
        .collect();
    cells
        .into_par_iter()
        .flat_map_iter(|(name, (b, n))| match ModularParam::new(b, n) {
            Ok(p) => run_one(name, &p, tol),
            Err(_) => Vec::new(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_checks_pass_on_a_cell() {
        let tol = Tolerances::default();
        for p in [
            ModularParam::real(0.7, 3).unwrap(),
            ModularParam::unit(PI / 5.0, 3).unwrap(),
        ] {
            for r in [
                check_inversion(&p, &tol),
                check_unitarity(&p, &tol),
                check_difference_equations(&p, &tol),
            ] {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn duality_only_for_real_b() {
        let tol = Tolerances::default();
        let p = ModularParam::real(0.7, 5).unwrap();
        assert!(check_duality(&p, &tol).unwrap().passed);
        assert!(check_duality(&ModularParam::unit(0.5, 3).unwrap(), &tol).is_none());
    }

    #[test]
    fn summation_rejects_third_inequality() {
        let p = ModularParam::unit(PI / 5.0, 1).unwrap();
        let tol = Tolerances::default();
        let e = check_summation(
            c(0.0, -0.2),
            c(0.0, 0.2),
            c(-0.1, -0.05),
            (0, 0, 0),
            &p,
            &tol,
        );
        match e {
            Err(Error::PreconditionViolated(m)) => {
                assert!(m.contains("Im(v - u) < Im w < 0"), "{m}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fourier_divergent_region_fails() {
        let p = ModularParam::real(0.8, 1).unwrap();
        let r = check_fourier_formula(c(0.0, 0.3), 0, &p, &Tolerances::default());
        assert!(!r.passed);
        assert!(r.error.unwrap().contains("quadrature"));
    }

    #[test]
    fn empty_suite() {
        assert!(run_suite(&[], &default_grid(), &Tolerances::default()).is_empty());
    }

    #[test]
    fn pentagon_contour_bounds() {
        let p = ModularParam::real(0.8, 3).unwrap();
        let real = p.point(0.0, 0);
        assert!(pentagon_contour(real, real, &p).is_err());
    }
}
