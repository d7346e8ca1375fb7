//! Semiclassical (`b → 0`) analysis of the `4₁` and `5₂` state integrals.
//!
//! Potentials live in the rescaled variable `x = 2πb y` where the integrand
//! behaves like `e^{h(x)/(2πi b² N)}`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::partition::{chi_41, chi_52, Knot};
use crate::qdilog::{cyclic_phi, li2, lobachevsky};
use crate::{Cplx, Error, ModularParam, Real, Result, I};

type ComplexFn = Arc<dyn Fn(Cplx) -> Result<Cplx> + Send + Sync>;

/// A holomorphic potential with its first two derivatives.
#[derive(Clone)]
pub struct Potential {
    pub name: String,
    pub h: ComplexFn,
    pub dh: ComplexFn,
    pub d2h: ComplexFn,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential").field("name", &self.name).finish()
    }
}

/// Principal `log(1 + e^u)`, without overflow for large `Re u`.
fn log1p_exp(u: Cplx) -> Cplx {
    if u.re > 30.0 {
        let t = u.im - 2.0 * PI * ((u.im + PI) / (2.0 * PI)).floor();
        Cplx::new(u.re, t) + (1.0 + (-u).exp()).ln()
    } else {
        (1.0 + u.exp()).ln()
    }
}

/// `e^u / (1 + e^u)`.
fn logistic(u: Cplx) -> Cplx {
    if u.re > 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// `h(x) = Li₂(-e^{-√N x}) - Li₂(-e^{√N x})`.
pub fn potential_41(p: &ModularParam) -> Potential {
    let sn = p.sqrt_n();
    let nf = p.n as Real;
    Potential {
        name: "4_1".into(),
        h: Arc::new(move |x: Cplx| Ok(li2(-(-sn * x).exp())? - li2(-(sn * x).exp())?)),
        dh: Arc::new(move |x: Cplx| Ok(sn * (log1p_exp(-sn * x) + log1p_exp(sn * x)))),
        d2h: Arc::new(move |x: Cplx| Ok(nf * (logistic(sn * x) - logistic(-sn * x)))),
    }
}

/// `V(y) = -3 Li₂(-e^{√N y}) - N y²/2`.
///
/// Each `1/φ_b` contributes `-Li₂(-e^{√N y})` and the Gaussian `⟨z⟩`
/// contributes `-N y²/2` under `z = y/(2πb)`.
pub fn potential_52(p: &ModularParam) -> Potential {
    let sn = p.sqrt_n();
    let nf = p.n as Real;
    Potential {
        name: "5_2".into(),
        h: Arc::new(move |y: Cplx| Ok(-3.0 * li2(-(sn * y).exp())? - 0.5 * nf * y * y)),
        dh: Arc::new(move |y: Cplx| Ok(3.0 * sn * log1p_exp(sn * y) - nf * y)),
        d2h: Arc::new(move |y: Cplx| Ok(3.0 * nf * logistic(sn * y) - nf)),
    }
}

/// Saddle seeds: `-2πi/(3√N)` for `4₁`, and `u*/√N` for `5₂` with `u*` the
/// root of `3 log(1 + e^u) = u` in the lower half plane.
pub fn default_seed(knot: Knot, p: &ModularParam) -> Cplx {
    let sn = p.sqrt_n();
    match knot {
        Knot::FigureEight => Cplx::new(-0.5, -2.0) / sn,
        Knot::FiveTwo => Cplx::new(-0.4, -2.1) / sn,
    }
}

pub fn potential(knot: Knot, p: &ModularParam) -> Potential {
    match knot {
        Knot::FigureEight => potential_41(p),
        Knot::FiveTwo => potential_52(p),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleResult {
    pub x_star: Cplx,
    pub h_at: Cplx,
    pub d2h_at: Cplx,
    pub newton_iters: usize,
    /// `|h'|` before each Newton step and after the last.
    pub residuals: Vec<Real>,
}

pub const NEWTON_MAX_ITERS: usize = 50;
pub const SADDLE_TOL: Real = 1e-12;
pub const DEGENERATE_TOL: Real = 1e-10;

/// Newton iteration on `h'`.
pub fn find_saddle(pot: &Potential, seed: Cplx) -> Result<SaddleResult> {
    let mut x = seed;
    let mut residuals = Vec::new();
    for it in 0..=NEWTON_MAX_ITERS {
        let g = (pot.dh)(x)?;
        residuals.push(g.norm());
        let d2 = (pot.d2h)(x)?;
        if g.norm() < SADDLE_TOL {
            if d2.norm() < DEGENERATE_TOL {
                return Err(Error::DegenerateSaddle(d2.norm()));
            }
            return Ok(SaddleResult {
                x_star: x,
                h_at: (pot.h)(x)?,
                d2h_at: d2,
                newton_iters: it,
                residuals,
            });
        }
        if d2.norm() < DEGENERATE_TOL {
            return Err(Error::DegenerateSaddle(d2.norm()));
        }
        x -= g / d2;
    }
    Err(Error::NoConvergence(NEWTON_MAX_ITERS))
}

/// `4Λ(π/6)`.
pub fn vol_41() -> Real {
    4.0 * lobachevsky(PI / 6.0)
}

/// `-2πi/(3√N)`.
pub fn x0_41(p: &ModularParam) -> Cplx {
    Cplx::new(0.0, -2.0 * PI / (3.0 * p.sqrt_n()))
}

/// `g₄₁(x₀) = (1/√N) Σ_k φ_{-x₀}(k) conj φ_{x₀}(k)`, the conjugate continued
/// off the real line as `conj(φ_{conj x}(k))`.
pub fn g_41(p: &ModularParam) -> Result<Cplx> {
    let x0 = x0_41(p);
    let mut s = Cplx::new(0.0, 0.0);
    for k in 0..p.n as i64 {
        s += cyclic_phi(-x0, k, p)? * cyclic_phi(x0.conj(), k, p)?.conj();
    }
    Ok(s / p.sqrt_n())
}

/// `γ_N = |Π_{j=1}^{N-1} (1 - e^{-2πij/N})^{j/N}|`.
pub fn gamma_n(p: &ModularParam) -> Real {
    let nf = p.n as Real;
    (1..p.n)
        .map(|j| {
            let jf = j as Real;
            (1.0 - Cplx::from_polar(1.0, -2.0 * PI * jf / nf)).norm().powf(jf / nf)
        })
        .product()
}

/// The Baseilhac–Benedetti value `H⁰_N` at the conjugate complete structure,
/// from its closed double product and sum:
/// `P² S / (√N γ_N)` with `P = |Π_{j<N} (1 - e^{-iπ/3N} e^{-2πij/N})^{j/N}|`
/// and `S = Σ_k Π_{j≤k} |1 - e^{-iπ/3N} e^{2πij/N}|⁻²`.
pub fn bb_41(p: &ModularParam) -> Real {
    let nf = p.n as Real;
    let rot = Cplx::from_polar(1.0, -PI / (3.0 * nf));
    let pp: Real = (1..p.n)
        .map(|j| {
            let jf = j as Real;
            (1.0 - rot * Cplx::from_polar(1.0, -2.0 * PI * jf / nf))
                .norm()
                .powf(jf / nf)
        })
        .product();
    let mut s = 0.0;
    let mut term = 1.0;
    for k in 0..p.n {
        if k > 0 {
            let w = 1.0 - rot * Cplx::from_polar(1.0, 2.0 * PI * k as Real / nf);
            term /= w.norm_sqr();
        }
        s += term;
    }
    pp * pp * s / (p.sqrt_n() * gamma_n(p))
}

/// `√(i h''(x*)/N)`, principal branch.
fn hessian_factor(d2h: Cplx, p: &ModularParam) -> Cplx {
    (I * d2h / p.n as Real).sqrt()
}

/// Leading term `e^{h(x₀)/(2πi b² N)} g₄₁ / √(i h''(x₀)/N)`.
pub fn leading_41(p: &ModularParam) -> Result<Cplx> {
    let pot = potential_41(p);
    let x0 = x0_41(p);
    let h = (pot.h)(x0)?;
    let d2 = (pot.d2h)(x0)?;
    let nf = p.n as Real;
    Ok((h / (2.0 * PI * I * p.b * p.b * nf)).exp() * g_41(p)? / hessian_factor(d2, p))
}

/// `(1/√N) Σ_n ⟨n⟩ φ_{y*}(n)⁻³`, the finite-level factor of the `5₂` integrand
/// at its saddle.
pub fn g_52(y_star: Cplx, p: &ModularParam) -> Result<Cplx> {
    let nn = p.n as i64;
    let nf = p.n as Real;
    let mut s = Cplx::new(0.0, 0.0);
    for n in 0..nn {
        let k = (n * (n + nn)).rem_euclid(2 * nn) as Real;
        s += Cplx::from_polar(1.0, -PI * k / nf) / cyclic_phi(y_star, n, p)?.powi(3);
    }
    Ok(s / p.sqrt_n())
}

/// Leading term of `χ₅₂(0)` at the saddle of [`potential_52`].
pub fn leading_52(p: &ModularParam) -> Result<Cplx> {
    let s = find_saddle(&potential_52(p), default_seed(Knot::FiveTwo, p))?;
    let nf = p.n as Real;
    Ok((s.h_at / (2.0 * PI * I * p.b * p.b * nf)).exp() * g_52(s.x_star, p)?
        / hessian_factor(s.d2h_at, p))
}

/// `-Im` of the potential at its saddle.
pub fn saddle_volume(knot: Knot, p: &ModularParam) -> Result<Real> {
    let s = find_saddle(&potential(knot, p), default_seed(knot, p))?;
    Ok(-s.h_at.im)
}

// ---------------------------------------------------------------------------
// Volume fits

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeFit {
    /// `-V̂`.
    pub volume: Real,
    /// `V`, then `C` and `C₂` as the model has them.
    pub coefficients: Vec<Real>,
    /// Row-major covariance of `coefficients`; zero when the fit is exact.
    pub covariance: Vec<Real>,
    /// `√(Σ r²)`.
    pub residual_norm: Real,
    pub samples: usize,
}

impl VolumeFit {
    pub fn volume_std(&self) -> Real {
        self.covariance[0].max(0.0).sqrt()
    }
}

/// Right-hand side of the volume fit `2πb²N log|J| = V + ...`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitModel {
    /// `V` alone.
    Pure,
    /// `V + C b²`.
    Quadratic,
    /// `V + C b² + C₂ b⁴`. The `(1 + O(b²))` correction to the leading term
    /// feeds the `b⁴` coefficient, which is sizeable for `N > 1`.
    #[default]
    Quartic,
}

impl FitModel {
    pub fn n_coefficients(self) -> usize {
        match self {
            FitModel::Pure => 1,
            FitModel::Quadratic => 2,
            FitModel::Quartic => 3,
        }
    }
}

/// Least-squares fit of `2πb²N log|J|` against `model`.
pub fn extract_volume(samples: &[(Real, Real)], n: u32, model: FitModel) -> Result<VolumeFit> {
    let k = model.n_coefficients();
    let mut bs: Vec<Real> = samples.iter().map(|s| s.0).collect();
    bs.sort_by(Real::total_cmp);
    bs.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * b.abs().max(1.0));
    if samples.len() < 3 || bs.len() < k {
        return Err(Error::IllConditioned(format!(
            "{} samples with {} distinct b for {k} coefficients",
            samples.len(),
            bs.len()
        )));
    }
    if let Some(s) = samples.iter().find(|s| !(s.0 > 0.0) || !(s.1 > 0.0)) {
        return Err(Error::PreconditionViolated(format!(
            "need b > 0 and a positive modulus, got {s:?}"
        )));
    }
    let m = samples.len();
    let nf = n as Real;
    let x = DMatrix::from_fn(m, k, |i, j| samples[i].0.powi(2 * j as i32));
    let y = DVector::from_fn(m, |i, _| {
        let (b, v) = samples[i];
        2.0 * PI * b * b * nf * v.ln()
    });
    let svd = x.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !(cond < 1e12) {
        return Err(Error::IllConditioned(format!("design condition number {cond:.3e}")));
    }
    let coef = svd
        .solve(&y, 1e-14)
        .map_err(|e| Error::IllConditioned(e.to_string()))?;
    let r = &y - &x * &coef;
    let rss = r.norm_squared();
    let xtx_inv = (x.transpose() * &x)
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("singular normal matrix".into()))?;
    let sigma2 = if m > k { rss / (m - k) as Real } else { 0.0 };
    let cov = xtx_inv * sigma2;
    Ok(VolumeFit {
        volume: -coef[0],
        coefficients: coef.iter().copied().collect(),
        covariance: cov.transpose().iter().copied().collect(),
        residual_norm: rss.sqrt(),
        samples: m,
    })
}

/// One row of a `b` sweep of `J(0, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub b: Real,
    pub value: Cplx,
    pub err: Real,
    pub nodes: usize,
}

/// `χ_K(0)` at each real `b`, in parallel.
pub fn sweep(knot: Knot, bs: &[Real], n: u32) -> Result<Vec<SweepSample>> {
    bs.par_iter()
        .map(|&b| {
            let p = ModularParam::real(b, n)?;
            let o = p.point(0.0, 0);
            let r = match knot {
                Knot::FigureEight => chi_41(o, 0.0, &p, None)?,
                Knot::FiveTwo => chi_52(o, 0.0, &p, None)?,
            };
            Ok(SweepSample {
                b,
                value: r.value,
                err: r.err_estimate,
                nodes: r.nodes_used,
            })
        })
        .collect()
}

/// Sweep followed by [`extract_volume`].
pub fn volume_from_sweep(
    knot: Knot,
    bs: &[Real],
    n: u32,
    model: FitModel,
) -> Result<(Vec<SweepSample>, VolumeFit)> {
    let rows = sweep(knot, bs, n)?;
    let pts: Vec<(Real, Real)> = rows.iter().map(|r| (r.b, r.value.norm())).collect();
    let fit = extract_volume(&pts, n, model)?;
    Ok((rows, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn fd_check(pot: &Potential, x: Cplx) {
        let h = 1e-5;
        let d1 = ((pot.h)(x + h).unwrap() - (pot.h)(x - h).unwrap()) / (2.0 * h);
        let d2 = ((pot.dh)(x + h).unwrap() - (pot.dh)(x - h).unwrap()) / (2.0 * h);
        let a1 = (pot.dh)(x).unwrap();
        let a2 = (pot.d2h)(x).unwrap();
        assert!((d1 - a1).norm() < 1e-6 * a1.norm().max(1.0), "{x}: {d1} vs {a1}");
        assert!((d2 - a2).norm() < 1e-6 * a2.norm().max(1.0), "{x}: {d2} vs {a2}");
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for n in [1, 3] {
            let p = ModularParam::real(0.5, n).unwrap();
            for x in [c(0.3, -0.4), c(-0.7, -1.1), c(0.1, -2.0), c(1.2, 0.5), c(-0.2, 0.9)] {
                fd_check(&potential_41(&p), x);
                fd_check(&potential_52(&p), x);
            }
        }
    }

    #[test]
    fn potential_41_values() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let pot = potential_41(&p);
        assert!((pot.h)(c(0.0, 0.0)).unwrap().norm() < 1e-15);
        let d = (pot.dh)(c(0.0, 0.0)).unwrap();
        assert!((d - c(2.0 * 2f64.ln(), 0.0)).norm() < 1e-14);
        let h = (pot.h)(x0_41(&p)).unwrap();
        assert!((h.im + vol_41()).abs() < 1e-12, "{h}");
        assert!((vol_41() - 2.029_883_212_819_307).abs() < 1e-12);
    }

    #[test]
    fn saddle_41() {
        for n in [1, 3, 5] {
            let p = ModularParam::real(0.5, n).unwrap();
            let s = find_saddle(&potential_41(&p), default_seed(Knot::FigureEight, &p)).unwrap();
            assert!((s.x_star - x0_41(&p)).norm() < 1e-12, "{s:?}");
            assert!((s.d2h_at - c(0.0, -3f64.sqrt() * n as Real)).norm() < 1e-10);
            assert!(*s.residuals.last().unwrap() < SADDLE_TOL);
            let den = hessian_factor(s.d2h_at, &p);
            assert!((den - c(3f64.powf(0.25), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn newton_converges_quadratically() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let s = find_saddle(&potential_41(&p), c(-0.3, -1.9)).unwrap();
        let r = &s.residuals;
        // once in the basin, each step roughly squares the residual
        let k = r.iter().position(|&v| v < 1e-2).unwrap();
        if k + 2 < r.len() {
            assert!(r[k + 1] < 10.0 * r[k] * r[k], "{r:?}");
        }
    }

    #[test]
    fn saddle_at_origin_is_flagged() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let r = find_saddle(&potential_41(&p), c(0.0, 0.0));
        assert!(matches!(r, Err(Error::DegenerateSaddle(_)) | Err(Error::NoConvergence(_))));
    }

    #[test]
    fn saddle_52() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let s = find_saddle(&potential_52(&p), default_seed(Knot::FiveTwo, &p)).unwrap();
        assert!((s.x_star - c(-0.421_799_361_5, -2.111_573_164)).norm() < 1e-8, "{s:?}");
        assert!((s.h_at - c(1.379_194_31, -2.828_122_088)).norm() < 1e-8, "{s:?}");
        let p3 = ModularParam::real(0.5, 3).unwrap();
        assert!((saddle_volume(Knot::FiveTwo, &p3).unwrap() - 2.828_122_088).abs() < 1e-8);
    }

    #[test]
    fn finite_level_factors() {
        let p1 = ModularParam::real(0.5, 1).unwrap();
        assert_eq!(g_41(&p1).unwrap(), c(1.0, 0.0));
        assert_eq!(gamma_n(&p1), 1.0);
        assert_eq!(bb_41(&p1), 1.0);
        let y = default_seed(Knot::FiveTwo, &p1);
        assert_eq!(g_52(y, &p1).unwrap(), c(1.0, 0.0));
        for n in [3, 5, 7] {
            let p = ModularParam::real(0.5, n).unwrap();
            let g = g_41(&p).unwrap();
            assert!(g.im.abs() < 1e-12 && g.re > 0.0, "{g}");
            assert!((g.re - gamma_n(&p) * bb_41(&p)).abs() < 1e-10);
        }
        // frozen from the cyclic-dilogarithm route
        let p3 = ModularParam::real(0.5, 3).unwrap();
        assert!((g_41(&p3).unwrap().re - 2.401_873_910_352_007).abs() < 1e-12);
    }

    #[test]
    fn synthetic_volume_fit() {
        let bs = [0.3, 0.25, 0.2, 0.15, 0.1];
        for n in [1, 3] {
            let pts: Vec<(Real, Real)> = bs
                .iter()
                .map(|&b| (b, leading_41(&ModularParam::real(b, n).unwrap()).unwrap().norm()))
                .collect();
            let fit = extract_volume(&pts, n, FitModel::Quadratic).unwrap();
            assert!((fit.volume - vol_41()).abs() < 1e-6, "{fit:?}");
        }
    }

    #[test]
    fn fit_rejects_degenerate_designs() {
        let r = extract_volume(&[(0.2, 1.0), (0.2, 2.0), (0.2, 3.0)], 1, FitModel::Quadratic);
        assert!(matches!(r, Err(Error::IllConditioned(_))));
        let r = extract_volume(&[(0.2, 1.0), (0.3, 2.0)], 1, FitModel::Pure);
        assert!(matches!(r, Err(Error::IllConditioned(_))));
    }

    #[test]
    fn fit_covariance_vanishes_on_exact_data() {
        let pts: Vec<(Real, Real)> = [0.3, 0.2, 0.1, 0.25]
            .iter()
            .map(|&b: &Real| (b, ((-2.0 + 0.5 * b * b) / (2.0 * PI * b * b)).exp()))
            .collect();
        let fit = extract_volume(&pts, 1, FitModel::Quadratic).unwrap();
        assert!((fit.volume - 2.0).abs() < 1e-10);
        assert!((fit.coefficients[1] - 0.5).abs() < 1e-8);
        assert!(fit.volume_std() < 1e-6);
    }
}
