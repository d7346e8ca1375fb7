//! Tetrahedral kernels and the reduced state integrals of `4₁` and `5₂`.
//!
//! Throughout `φ_b(x, n) = D_b(x, -n)` and a conjugated kernel such as
//! `conj⟨x⟩` is continued analytically off the real line as `1/⟨x⟩`.
//!
//! Contours are horizontal lines `Im y = d`. The defaults follow the steepest
//! descent geometry at small `b`: the line passes through the relevant saddle
//! of the semiclassical potential, which keeps the integrand from oscillating
//! wildly and cancelling to many digits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::an_core::{fourier_kernel, gauss_kernel, haar_integrate_fallible, integrate_line};
use crate::charged::{nu, nu_pair, phi_charged, psi_charged, psi_tilde, ChargeTriple};
use crate::qdilog::d_b;
use crate::triangulation::Shape;
use crate::{ANPoint, Contour, Cplx, Error, ModularParam, QuadratureResult, Real, Result, I};

/// Imaginary part of the `5₂` saddle in the rescaled variable `u = √N y`.
pub const SADDLE_52_IM: Real = -2.111573164;

/// `φ_b(x, n) = D_b(x, -n)`.
pub fn phi_b_level(a: ANPoint, p: &ModularParam) -> Result<Cplx> {
    d_b(a.with_n(-(a.n() as i64)), p)
}

/// `Im c_b`, the unit in which all strip widths are measured.
fn s_of(p: &ModularParam) -> Real {
    p.c_b.im
}

/// `2 Im c_b / (1 + |b|²)`: converts a saddle height in the semiclassical
/// variable into a contour height (it is `1/b` for real `b`).
fn saddle_scale(p: &ModularParam) -> Real {
    2.0 * s_of(p) / (1.0 + p.b.norm_sqr())
}

fn check_band(d: Real, lo: Real, hi: Real) -> Result<()> {
    if d > lo && d < hi {
        Ok(())
    } else {
        Err(Error::PoleOnContour(d, lo, hi))
    }
}

/// A point strictly inside `(lo, hi)`, as close to `want` as a 10% margin allows.
fn clamp_into(want: Real, lo: Real, hi: Real) -> Real {
    let m = 0.1 * (hi - lo);
    want.clamp(lo + m, hi - m)
}

// ---------------------------------------------------------------------------
// Tetrahedral kernels

/// Integral kernel of a charged tetrahedral operator with the delta factor
/// kept symbolic. Face variables are ordered `(a₀, a₁, a₂, a₃)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelFactor {
    pub sign: i8,
    pub charges: ChargeTriple,
    /// Coefficients of the argument of `δ`.
    pub delta_constraint: [i8; 4],
    /// The `ν` phases (and `e^{-πiN/12}` for a negative tetrahedron).
    pub prefactor: Cplx,
}

/// The kernel of `T(a,c)` (sign `+1`) or its inverse (sign `-1`).
pub fn tetra_kernel(sign: i8, ch: ChargeTriple, p: &ModularParam) -> Result<KernelFactor> {
    let nf = p.n as Real;
    let (delta_constraint, prefactor) = match sign {
        1 => ([1, -1, 1, 0], nu_pair(ch.a, ch.c, p)),
        -1 => (
            [-1, 1, 0, 1],
            nu_pair(ch.b, ch.c, p) * (-I * PI * nf / 12.0).exp(),
        ),
        s => {
            return Err(Error::PreconditionViolated(format!(
                "tetrahedron sign must be ±1, got {s}"
            )))
        }
    };
    Ok(KernelFactor {
        sign,
        charges: ch,
        delta_constraint,
        prefactor,
    })
}

impl KernelFactor {
    /// The argument of `δ` at `z`.
    pub fn constraint(&self, z: [ANPoint; 4]) -> ANPoint {
        let mut acc = z[0].with_x(Cplx::new(0.0, 0.0)).with_n(0);
        for (k, &cf) in self.delta_constraint.iter().enumerate() {
            match cf {
                1 => acc = acc + z[k],
                -1 => acc = acc - z[k],
                _ => {}
            }
        }
        acc
    }

    /// Everything but the `δ`, at `z = (a₀, a₁, a₂, a₃)`.
    pub fn smooth(&self, z: [ANPoint; 4], p: &ModularParam, contour: Contour) -> Result<Cplx> {
        let w = z[3] - z[2];
        let ch = self.charges;
        if self.sign > 0 {
            // φ̃_{a,c}(x, k) = ψ̃_{a,c}(x, -k)
            let t = psi_tilde(w.with_n(-(w.n() as i64)), ch, p, contour)?;
            Ok(self.prefactor * fourier_kernel(w, z[0]) / gauss_kernel(w) * t)
        } else {
            let bc = ChargeTriple {
                a: ch.b,
                b: ch.a,
                c: ch.c,
            };
            Ok(self.prefactor * fourier_kernel(w, z[1]) * gauss_kernel(w) * phi_charged(w, bc, p)?)
        }
    }
}

// ---------------------------------------------------------------------------
// Angle data

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Knot {
    FigureEight,
    FiveTwo,
}

impl Knot {
    pub fn name(self) -> &'static str {
        match self {
            Knot::FigureEight => "4_1",
            Knot::FiveTwo => "5_2",
        }
    }
}

/// Balance tolerance on charge combinations.
pub const BALANCE_TOL: Real = 1e-12;

/// Charges of a knot complement triangulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnotAngleData {
    pub knot: Knot,
    pub charges: Vec<ChargeTriple>,
    pub signs: Vec<i8>,
    pub n: u32,
}

impl KnotAngleData {
    /// `T₊, T₋` with `2b₊ + c₊ = 2b₋ + c₋`.
    pub fn figure_eight(plus: ChargeTriple, minus: ChargeTriple, n: u32) -> Result<Self> {
        let l = (2.0 * plus.b + plus.c, 2.0 * minus.b + minus.c);
        if (l.0 - l.1).abs() > BALANCE_TOL {
            return Err(Error::Unbalanced(format!(
                "2b₊ + c₊ = {} but 2b₋ + c₋ = {}",
                l.0, l.1
            )));
        }
        Ok(Self {
            knot: Knot::FigureEight,
            charges: vec![plus, minus],
            signs: vec![1, -1],
            n,
        })
    }

    /// Three positive tetrahedra with `2a₃ = a₁ + c₂` and `b₃ = c₁ + b₂`.
    pub fn five_two(t: [ChargeTriple; 3], n: u32) -> Result<Self> {
        let e1 = 2.0 * t[2].a - t[0].a - t[1].c;
        let e2 = t[2].b - t[0].c - t[1].b;
        if e1.abs() > BALANCE_TOL || e2.abs() > BALANCE_TOL {
            return Err(Error::Unbalanced(format!(
                "2a₃ - a₁ - c₂ = {e1}, b₃ - c₁ - b₂ = {e2}"
            )));
        }
        Ok(Self {
            knot: Knot::FiveTwo,
            charges: t.to_vec(),
            signs: vec![1, 1, 1],
            n,
        })
    }

    /// The gauge-invariant combination `λ`.
    pub fn lambda(&self) -> Real {
        let t = &self.charges;
        match self.knot {
            Knot::FigureEight => 2.0 * t[0].b + t[0].c,
            Knot::FiveTwo => -t[0].c + t[1].b - t[1].c + t[2].a,
        }
    }

    /// Dihedral angles `π√N (a, b, c)` for the triangulation fixtures.
    pub fn shape(&self) -> Shape<Real> {
        let k = PI * (self.n as Real).sqrt();
        Shape::new(self.charges.iter().map(|c| [k * c.a, k * c.b, k * c.c]).collect())
    }
}

// ---------------------------------------------------------------------------
// Figure-eight

/// Pole-free band for the `χ₄₁(x)` contour.
pub fn chi_41_band(x: Cplx, p: &ModularParam) -> (Real, Real) {
    let s = s_of(p) / p.sqrt_n();
    ((-s).max(x.im - s), x.im.min(0.0))
}

/// Default contour for `χ₄₁(x)`: through the saddle at `Im u = -2π/3`.
pub fn chi_41_contour(x: Cplx, p: &ModularParam) -> Contour {
    let (lo, hi) = chi_41_band(x, p);
    Contour::at(clamp_into(-saddle_scale(p) / (3.0 * p.sqrt_n()), lo, hi))
}

fn chi_41_integrand(x: ANPoint, y: ANPoint, p: &ModularParam) -> Result<Cplx> {
    let k = fourier_kernel(x, y);
    let g = gauss_kernel(x);
    Ok(phi_b_level(x - y, p)? / phi_b_level(y, p)? * k * k / (g * g))
}

/// `χ₄₁(x, λ) = e^{4πi c_b λ x} ∫ φ_b(x - y)/φ_b(y) ⟨x,y⟩² conj⟨x⟩² dy`.
pub fn chi_41(
    x: ANPoint,
    lam: Real,
    p: &ModularParam,
    contour: Option<Contour>,
) -> Result<QuadratureResult> {
    let contour = contour.unwrap_or_else(|| chi_41_contour(x.x, p));
    let (lo, hi) = chi_41_band(x.x, p);
    check_band(contour.offset_d, lo, hi)?;
    let mut r = haar_integrate_fallible(|y| chi_41_integrand(x, y, p), &contour, p)?;
    let ph = (4.0 * PI * I * p.c_b * lam * x.x).exp();
    r.value *= ph;
    r.err_estimate *= ph.norm();
    Ok(r)
}

/// Both evaluations of the `4₁` partition function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Z41Result {
    /// `σ₊ conj(σ₋)`.
    pub value: Cplx,
    /// The two-dimensional integral.
    pub direct: Option<Cplx>,
    /// `|value - direct| / |value|`.
    pub residual: Option<Real>,
    pub sigma_plus: Cplx,
    pub sigma_minus: Cplx,
    pub lambda: Real,
    /// Height of the `σ` contour.
    pub offset: Real,
}

/// `ν'_{c,b} = ν_{c,b} e^{4πi c_b² (cb - b²)}`.
pub fn nu_prime(c: Real, b: Real, p: &ModularParam) -> Cplx {
    nu_pair(c, b, p) * (4.0 * PI * I * p.c_b * p.c_b * (c * b - b * b)).exp()
}

/// Band in which `∫ e^{4πi c_b λ z} ⟨z⟩² / φ_b(z) dz` converges and avoids poles.
pub fn sigma_band(lam: Real, p: &ModularParam) -> (Real, Real) {
    let s = s_of(p);
    ((-2.0 * s * lam).max(-s / p.sqrt_n()), -s * lam)
}

fn sigma_integral(lam: Real, d: Real, p: &ModularParam, tol: Real) -> Result<Cplx> {
    let contour = Contour::at(d).with_tol(tol);
    let f = |z: ANPoint| -> Result<Cplx> {
        let g = gauss_kernel(z);
        Ok((4.0 * PI * I * p.c_b * lam * z.x).exp() * g * g / phi_b_level(z, p)?)
    };
    Ok(haar_integrate_fallible(f, &contour, p)?.value)
}

/// The `4₁` partition function `σ_{c₊,b₊} conj(σ_{c₋,b₋})`, optionally
/// cross-checked against the two-dimensional integral
/// `ν'₊ conj(ν'₋) ∫∫ φ_b(z₂ - z₀)/φ_b(z₀) e^{4πi c_b λ z₂} ⟨z₀,z₂⟩² conj⟨z₂⟩²`.
pub fn z_41(angles: &KnotAngleData, p: &ModularParam, cross_check: bool) -> Result<Z41Result> {
    if angles.knot != Knot::FigureEight {
        return Err(Error::PreconditionViolated("z_41 needs 4_1 angle data".into()));
    }
    let plus = angles.charges[0];
    let minus = angles.charges[1];
    let again = KnotAngleData::figure_eight(plus, minus, p.n)?;
    let lam = again.lambda();
    let (lo, hi) = sigma_band(lam, p);
    if !(hi - lo > 1e-9) {
        return Err(Error::PreconditionViolated(format!(
            "λ = {lam} leaves no convergent contour (band ({lo}, {hi}))"
        )));
    }
    let d0 = 0.5 * (lo + hi);
    let i_lam = sigma_integral(lam, d0, p, 1e-10)?;
    let nup = nu_prime(plus.c, plus.b, p);
    let num = nu_prime(minus.c, minus.b, p);
    let sigma_plus = nup * i_lam;
    let sigma_minus = num * i_lam;
    let value = sigma_plus * sigma_minus.conj();

    let (direct, residual) = if cross_check {
        let j = direct_41(lam, d0, p)?;
        let dv = nup * num.conj() * j;
        (Some(dv), Some((dv - value).norm() / value.norm()))
    } else {
        (None, None)
    };
    Ok(Z41Result {
        value,
        direct,
        residual,
        sigma_plus,
        sigma_minus,
        lambda: lam,
        offset: d0,
    })
}

/// Tensor trapezoid sum of the `4₁` double integral in the coordinates
/// `(z₀, w = z₂ - z₀)` with `z₀` on `Im = d₀` and `w` on `Im = -d₀`, so that
/// `z₂` stays real. Integrating over `z₂` first runs into catastrophic
/// cancellation at large `|z₂|`.
fn direct_41_grid(lam: Real, d0: Real, h: Real, half_width: Real, p: &ModularParam) -> Result<Cplx> {
    let nn = p.n;
    let k = (half_width / h).ceil() as i64;
    let axis = |d: Real| -> Vec<ANPoint> {
        (-k..=k)
            .flat_map(|j| (0..nn).map(move |m| ANPoint::new(Cplx::new(j as Real * h, d), m as i64, nn)))
            .collect()
    };
    let ys = axis(d0);
    let ws = axis(-d0);
    let inv_phi_y = ys
        .iter()
        .map(|&y| phi_b_level(y, p).map(|v| 1.0 / v))
        .collect::<Result<Vec<_>>>()?;
    let phi_w = ws
        .iter()
        .map(|&w| phi_b_level(w, p))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = Cplx::new(0.0, 0.0);
    for (y, iy) in ys.iter().zip(&inv_phi_y) {
        let mut row = Cplx::new(0.0, 0.0);
        for (w, fw) in ws.iter().zip(&phi_w) {
            let x = *y + *w;
            let kx = fourier_kernel(x, *y);
            let g = gauss_kernel(x);
            row += fw * kx * kx / (g * g) * (4.0 * PI * I * p.c_b * lam * x.x).exp();
        }
        acc += row * iy;
    }
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(Error::NonConvergent("non-finite 2-D sum".into()));
    }
    Ok(acc * h * h / nn as Real)
}

/// The double integral, refined until halving the step and widening the
/// window each change it by less than `1e-8` relative.
fn direct_41(lam: Real, d0: Real, p: &ModularParam) -> Result<Cplx> {
    let mut h = 0.1;
    let mut l = 8.0;
    let mut prev = direct_41_grid(lam, d0, h, l, p)?;
    for _ in 0..10 {
        let finer = direct_41_grid(lam, d0, 0.5 * h, l, p)?;
        let wider = direct_41_grid(lam, d0, h, l + 4.0, p)?;
        let scale = 1e-8 * prev.norm();
        let fine_ok = (finer - prev).norm() <= scale;
        let wide_ok = (wider - prev).norm() <= scale;
        if fine_ok && wide_ok {
            return Ok(prev);
        }
        if !fine_ok {
            h *= 0.5;
        }
        if !wide_ok {
            l += 4.0;
        }
        prev = direct_41_grid(lam, d0, h, l, p)?;
    }
    Err(Error::NonConvergent("2-D trapezoid did not settle".into()))
}

// ---------------------------------------------------------------------------
// 5_2

/// Pole-free band for the `χ₅₂(x)` contour.
pub fn chi_52_band(x: Cplx, p: &ModularParam) -> (Real, Real) {
    let s = s_of(p) / p.sqrt_n();
    (-s + x.im.abs(), 0.0)
}

/// Default contour for `χ₅₂(x)`: through the saddle of the `5₂` potential.
pub fn chi_52_contour(x: Cplx, p: &ModularParam) -> Contour {
    let (lo, hi) = chi_52_band(x, p);
    let want = SADDLE_52_IM * saddle_scale(p) / (2.0 * PI * p.sqrt_n());
    Contour::at(clamp_into(want, lo, hi))
}

fn chi_52_integrand(x: ANPoint, z: ANPoint, p: &ModularParam) -> Result<Cplx> {
    let den = phi_b_level(z + x, p)? * phi_b_level(z, p)? * phi_b_level(z - x, p)?;
    Ok(gauss_kernel(z) / gauss_kernel(x) / den)
}

/// `χ₅₂(x, λ) = e^{2πi c_b λ x} ∫ conj⟨x⟩ ⟨z⟩ / (φ_b(z+x) φ_b(z) φ_b(z-x)) dz`.
pub fn chi_52(
    x: ANPoint,
    lam: Real,
    p: &ModularParam,
    contour: Option<Contour>,
) -> Result<QuadratureResult> {
    let contour = contour.unwrap_or_else(|| chi_52_contour(x.x, p));
    let (lo, hi) = chi_52_band(x.x, p);
    check_band(contour.offset_d, lo, hi)?;
    let mut r = haar_integrate_fallible(|z| chi_52_integrand(x, z, p), &contour, p)?;
    let ph = (2.0 * PI * I * p.c_b * lam * x.x).exp();
    r.value *= ph;
    r.err_estimate *= ph.norm();
    Ok(r)
}

// ---------------------------------------------------------------------------
// H-triangulation limits

/// `ψ̃_{a,c}(0, 0) = ∫ ψ_{a,c}(y, m) dy` on the real line.
///
/// As `a → 0` the integrand decays like `e^{2π Im(c_b) a y}` for `y → -∞`,
/// so the leading tail `e^{αy}/(1 + e^{κy})` with `α = -2πi c_b a` is
/// subtracted and added back in closed form: its integral is
/// `π / (κ sin(πα/κ))` for `0 < Re α < κ`.
pub fn tilde_at_origin(ch: ChargeTriple, p: &ModularParam, tol: Real) -> Result<QuadratureResult> {
    let nn = p.n;
    let alpha = -2.0 * PI * I * p.c_b * ch.a;
    let kappa = 1.0 + 2.0 * alpha.norm();
    let model = |t: Real| -> Cplx {
        if t > 0.0 {
            ((alpha - kappa) * t).exp() / (1.0 + (-kappa * t).exp())
        } else {
            (alpha * t).exp() / (1.0 + (kappa * t).exp())
        }
    };
    let g = |t: Real| -> Result<Cplx> {
        let mut s = Cplx::new(0.0, 0.0);
        for m in 0..nn {
            s += psi_charged(ANPoint::new(Cplx::new(t, 0.0), m as i64, nn), ch, p)?;
        }
        Ok(s - nn as Real * model(t))
    };
    let mut r = integrate_line(g, &Contour::at(0.0).with_tol(tol))?;
    let closed = PI / (kappa * (PI * alpha / kappa).sin());
    r.value = (r.value + nn as Real * closed) / p.sqrt_n();
    r.err_estimate /= p.sqrt_n();
    Ok(r)
}

/// Polynomial extrapolation to `a = 0` through all points (Neville).
pub fn extrapolate_to_zero(a: &[Real], v: &[Cplx]) -> Cplx {
    let mut t = v.to_vec();
    let n = t.len();
    for k in 1..n {
        for i in 0..n - k {
            t[i] = (a[i] * t[i + 1] - a[i + k] * t[i]) / (a[i] - a[i + k]);
        }
    }
    t[0]
}

/// Outcome of a regularised `a₀ → 0` limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HLimitReport {
    pub knot: Knot,
    pub a0: Vec<Real>,
    /// Regularised left-hand side at each `a₀`.
    pub lhs: Vec<Cplx>,
    pub extrapolated: Cplx,
    pub rhs: Cplx,
    /// `|extrapolated - rhs| / |rhs|`.
    pub rel_err: Real,
    /// `|lhs_i - rhs| / |rhs|` along the sequence.
    pub residuals: Vec<Real>,
    pub monotone: bool,
    /// For `5₂` only moduli are compared.
    pub modulus_only: bool,
}

fn check_sequence(a0: &[Real]) -> Result<()> {
    if a0.len() < 2 || a0.iter().any(|&a| !(a > 0.0)) || a0.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::PreconditionViolated(
            "a₀ sequence must be positive, strictly decreasing, length ≥ 2".into(),
        ));
    }
    Ok(())
}

fn finish(
    knot: Knot,
    a0: &[Real],
    lhs: Vec<Cplx>,
    rhs: Cplx,
    modulus_only: bool,
) -> HLimitReport {
    let extrapolated = extrapolate_to_zero(a0, &lhs);
    let residuals: Vec<Real> = lhs.iter().map(|v| (v - rhs).norm() / rhs.norm()).collect();
    let monotone = residuals.windows(2).all(|w| w[1] <= w[0]);
    HLimitReport {
        knot,
        a0: a0.to_vec(),
        lhs,
        extrapolated,
        rhs,
        rel_err: (extrapolated - rhs).norm() / rhs.norm(),
        residuals,
        monotone,
        modulus_only,
    }
}

/// Central-tetrahedron regularisation `φ_b(c_b a₀ - c_b/√N) Z` of the `4₁`
/// H-triangulation against `e^{-πiN/12} χ₄₁(0) / ν(c₀)`.
///
/// The central positive tetrahedron has its faces identified so that its
/// kernel is evaluated at the origin: `Z = ν_{a₀,c₀} φ̃_{a₀,c₀}(0) χ₄₁(0)`,
/// with `φ̃` computed by quadrature.
pub fn h_limit_41(
    a0: &[Real],
    c0: Real,
    p: &ModularParam,
    chi0: Option<Cplx>,
) -> Result<HLimitReport> {
    check_sequence(a0)?;
    let nf = p.n as Real;
    let chi0 = match chi0 {
        Some(v) => v,
        None => chi_41(p.point(0.0, 0), 0.0, p, None)?.value,
    };
    let mut lhs = Vec::new();
    for &a in a0 {
        let ch = ChargeTriple::new(a, c0, p.n)?;
        let t = tilde_at_origin(ch, p, 1e-12)?.value;
        let reg = phi_b_level(p.point(p.c_b * a - p.cb_n(), 0), p)?;
        lhs.push(reg * nu_pair(a, c0, p) * t * chi0);
    }
    let rhs = (-I * PI * nf / 12.0).exp() / nu(c0, p) * chi0;
    Ok(finish(Knot::FigureEight, a0, lhs, rhs, false))
}

/// Modulus-level `5₂` analogue. The central tetrahedron is negative, so its
/// kernel at the origin is `φ_{b₀,c₀}(0)`, computed from the quadrature value
/// of `ψ̃_{a₀,c₀}(0)` through `conj ψ̃_{a,c}(0) = ψ_{b,c}(0) e^{-2πi c_b² ab} ζ₀`.
/// Along the path `a₁ - a₃ = slope · a₀` the remaining integral is
/// `χ₅₂(c_b (a₁ - a₃))`; the target is `|χ₅₂(0)|`.
pub fn h_limit_52(
    a0: &[Real],
    c0: Real,
    slope: Real,
    p: &ModularParam,
) -> Result<HLimitReport> {
    check_sequence(a0)?;
    let c2 = p.c_b * p.c_b;
    let chi0 = chi_52(p.point(0.0, 0), 0.0, p, None)?.value;
    let mut lhs = Vec::new();
    for &a in a0 {
        let ch = ChargeTriple::new(a, c0, p.n)?;
        let t = tilde_at_origin(ch, p, 1e-12)?.value;
        let central = t.conj() * (2.0 * PI * I * c2 * ch.a * ch.b).exp() / p.zeta0;
        let reg = phi_b_level(p.point(p.c_b * a - p.cb_n(), 0), p)?;
        let chi = chi_52(p.point(p.c_b * slope * a, 0), 0.0, p, None)?.value;
        lhs.push(Cplx::new((central * reg * chi).norm(), 0.0));
    }
    let rhs = Cplx::new(chi0.norm(), 0.0);
    Ok(finish(Knot::FiveTwo, a0, lhs, rhs, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::an_core::kronrod_panels;
    use crate::c;
    use crate::qdilog::phi_b;

    fn close(a: Cplx, b: Cplx, tol: Real) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn kernel_constraints() {
        let p = ModularParam::real(0.8, 1).unwrap();
        let ch = ChargeTriple::symmetric(1);
        let kp = tetra_kernel(1, ch, &p).unwrap();
        let km = tetra_kernel(-1, ch, &p).unwrap();
        assert_eq!(kp.delta_constraint, [1, -1, 1, 0]);
        assert_eq!(km.delta_constraint, [-1, 1, 0, 1]);
        let z = [0.3, 0.5, 0.2, -1.0].map(|x| p.point(x, 0));
        let arg = kp.constraint(z);
        assert!((arg.x - c(0.0, 0.0)).norm() < 1e-15);
        assert!(tetra_kernel(0, ch, &p).is_err());
    }

    #[test]
    fn kernels_at_origin() {
        let p = ModularParam::real(0.8, 3).unwrap();
        let ch = ChargeTriple::new(0.2, 0.25, 3).unwrap();
        let o = [p.point(0.0, 0); 4];
        let ct = Contour::default().with_tol(1e-10);
        let kp = tetra_kernel(1, ch, &p).unwrap().smooth(o, &p, ct).unwrap();
        let t = psi_tilde(p.point(0.0, 0), ch, &p, ct).unwrap();
        let want = nu(ch.a - ch.c, &p) * (PI * I * p.c_b * p.c_b * ch.a * (ch.a + ch.c)).exp() * t;
        assert!(close(kp, want, 1e-12));
        let km = tetra_kernel(-1, ch, &p).unwrap().smooth(o, &p, ct).unwrap();
        let bc = ChargeTriple {
            a: ch.b,
            b: ch.a,
            c: ch.c,
        };
        let want = nu(ch.b - ch.c, &p)
            * (PI * I * p.c_b * p.c_b * ch.b * (ch.b + ch.c)).exp()
            * (-PI * I * 3.0 / 12.0).exp()
            * phi_charged(o[0], bc, &p).unwrap();
        assert!(close(km, want, 1e-12));
    }

    #[test]
    fn lambda_phase_is_exact() {
        let p = ModularParam::real(0.6, 1).unwrap();
        let x = p.point(0.3, 0);
        let a = chi_41(x, 0.0, &p, None).unwrap().value;
        let b = chi_41(x, 0.35, &p, None).unwrap().value;
        let ph = (4.0 * PI * I * p.c_b * 0.35 * x.x).exp();
        assert!(close(b / a, ph, 1e-12));
    }

    #[test]
    fn contour_outside_band_is_rejected() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let r = chi_41(p.point(0.0, 0), 0.0, &p, Some(Contour::at(0.1)));
        assert!(matches!(r, Err(Error::PoleOnContour(..))));
        let r = chi_52(p.point(0.0, 0), 0.0, &p, Some(Contour::at(-2.0)));
        assert!(matches!(r, Err(Error::PoleOnContour(..))));
    }

    #[test]
    fn balance_is_enforced() {
        let a = ChargeTriple::new(0.5, 0.35, 1).unwrap();
        let b = ChargeTriple::new(0.5, 0.3, 1).unwrap();
        assert!(matches!(
            KnotAngleData::figure_eight(a, b, 1),
            Err(Error::Unbalanced(_))
        ));
        let d = KnotAngleData::figure_eight(a, a, 1).unwrap();
        assert!((d.lambda() - (2.0 * a.b + a.c)).abs() < 1e-15);
    }

    #[test]
    fn tilde_origin_matches_plain_quadrature() {
        // with a sizeable a the tail trick and the direct transform agree
        let p = ModularParam::real(0.7, 3).unwrap();
        let ch = ChargeTriple::new(0.25, 0.2, 3).unwrap();
        let t = tilde_at_origin(ch, &p, 1e-12).unwrap().value;
        let d = psi_tilde(p.point(0.0, 0), ch, &p, Contour::default().with_tol(1e-11)).unwrap();
        assert!(close(t, d, 1e-9), "{t} vs {d}");
    }

    #[test]
    fn neville_recovers_polynomials() {
        let a = [0.4, 0.2, 0.1];
        let v: Vec<Cplx> = a.iter().map(|&x| c(1.0 + 2.0 * x - x * x, x)).collect();
        assert!(close(extrapolate_to_zero(&a, &v), c(1.0, 0.0), 1e-14));
    }
    /// Plain trapezoid on `[-12, 12]` with `10⁵` nodes.
    fn dense_oracle(f: impl Fn(Cplx) -> Cplx, d: Real) -> Cplx {
        let n = 100_000;
        let h = 24.0 / n as Real;
        (0..=n)
            .map(|k| {
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                w * f(c(-12.0 + k as Real * h, d))
            })
            .sum::<Cplx>()
            * h
    }

    #[test]
    fn chi_41_matches_dense_grid() {
        let p = ModularParam::real(0.3, 1).unwrap();
        let d = chi_41_contour(c(0.0, 0.0), &p).offset_d;
        let want = dense_oracle(|y| phi_b(-y, &p).unwrap() / phi_b(y, &p).unwrap(), d);
        let got = chi_41(p.point(0.0, 0), 0.0, &p, None).unwrap().value;
        assert!(close(got, want, 1e-6), "{got} vs {want}");
    }

    #[test]
    fn chi_52_matches_dense_grid() {
        let p = ModularParam::real(0.3, 1).unwrap();
        let d = chi_52_contour(c(0.0, 0.0), &p).offset_d;
        let want = dense_oracle(
            |z| (PI * I * z * z).exp() / phi_b(z, &p).unwrap().powi(3),
            d,
        );
        let got = chi_52(p.point(0.0, 0), 0.0, &p, None).unwrap().value;
        assert!(close(got, want, 1e-6), "{got} vs {want}");
    }

    #[test]
    fn contour_shift_invariance() {
        let p = ModularParam::real(0.4, 1).unwrap();
        let o = p.point(0.0, 0);
        let at = |d: Real| Some(Contour::at(d).with_tol(1e-12));
        let a = chi_41(o, 0.0, &p, at(-0.05)).unwrap().value;
        let b = chi_41(o, 0.0, &p, at(-0.15)).unwrap().value;
        assert!(close(a, b, 1e-8), "{a} vs {b}");
        let a = chi_52(o, 0.0, &p, at(-0.3)).unwrap().value;
        let b = chi_52(o, 0.0, &p, at(-0.9)).unwrap().value;
        assert!(close(a, b, 1e-8), "{a} vs {b}");
        let p3 = ModularParam::real(0.6, 3).unwrap();
        let x = p3.point(c(0.2, 0.0), 1);
        let a = chi_41(x, 0.1, &p3, at(-0.2)).unwrap().value;
        let b = chi_41(x, 0.1, &p3, at(-0.6)).unwrap().value;
        assert!(close(a, b, 1e-8), "{a} vs {b}");
    }

    #[test]
    fn chi_52_half_line_folding() {
        // ∫_R f = ∫_0^∞ (f(t) + f(-t)) on an independent fixed rule
        let p = ModularParam::real(0.5, 1).unwrap();
        let o = p.point(0.0, 0);
        let ct = chi_52_contour(o.x, &p);
        let f = |t: Real| -> Cplx {
            let z = c(t, ct.offset_d);
            (PI * I * z * z).exp() / phi_b(z, &p).unwrap().powi(3)
        };
        let folded = kronrod_panels(|t| Ok(f(t) + f(-t)), 0.0, 30.0, 300).unwrap();
        let got = chi_52(o, 0.0, &p, None).unwrap().value;
        assert!(close(got, folded, 1e-7), "{got} vs {folded}");
    }

    #[test]
    fn chi_41_real_on_unit_circle() {
        for th in [PI / 5.0, PI / 6.0] {
            let p = ModularParam::unit(th, 1).unwrap();
            let v = chi_41(p.point(0.0, 0), 0.0, &p, None).unwrap().value;
            assert!((v.conj() - v).norm() < 1e-7 * v.norm(), "{v}");
        }
    }

    #[test]
    fn level_one_reduction() {
        // the Haar sum with a single residue is the bare line integral
        let p = ModularParam::real(0.45, 1).unwrap();
        let x = p.point(c(0.3, 0.0), 0);
        let ct = chi_41_contour(x.x, &p);
        let bare = integrate_line(
            |t| {
                let y = c(t, ct.offset_d);
                let k = (2.0 * PI * I * x.x * y).exp();
                Ok(phi_b(x.x - y, &p)? / phi_b(y, &p)? * k * k / (2.0 * PI * I * x.x * x.x).exp())
            },
            &ct,
        )
        .unwrap()
        .value;
        let got = chi_41(x, 0.0, &p, None).unwrap().value;
        assert!(close(got, bare, 1e-10), "{got} vs {bare}");
    }

    #[test]
    fn z_41_two_routes_agree() {
        let p = ModularParam::real(0.5, 1).unwrap();
        for abc in [(0.5, 0.15, 0.35), (0.4, 0.2, 0.4)] {
            let ch = ChargeTriple::from_abc(abc.0, abc.1, abc.2, 1).unwrap();
            let z = z_41(&KnotAngleData::figure_eight(ch, ch, 1).unwrap(), &p, true).unwrap();
            assert!(z.residual.unwrap() < 1e-5, "{z:?}");
        }
    }

    #[test]
    fn z_41_modulus_is_gauge_invariant() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let mk = |a: Real, b: Real, c: Real| ChargeTriple::from_abc(a, b, c, 1).unwrap();
        // λ = 0.4 for both; T₋ differs from T₊ in the second set
        let s1 = KnotAngleData::figure_eight(mk(0.7, 0.1, 0.2), mk(0.7, 0.1, 0.2), 1).unwrap();
        let s2 = KnotAngleData::figure_eight(mk(0.65, 0.05, 0.3), mk(0.75, 0.15, 0.1), 1).unwrap();
        let z1 = z_41(&s1, &p, false).unwrap().value.norm();
        let z2 = z_41(&s2, &p, false).unwrap().value.norm();
        assert!((z1 - z2).abs() < 1e-7 * z1, "{z1} vs {z2}");
    }

    #[test]
    fn empty_sigma_band_is_reported() {
        // symmetric charges put λ at 1/√N, where no contour converges
        let p = ModularParam::real(0.5, 1).unwrap();
        let ch = ChargeTriple::symmetric(1);
        let d = KnotAngleData::figure_eight(ch, ch, 1).unwrap();
        assert!(matches!(z_41(&d, &p, false), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn h_limit_41_level_one() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let r = h_limit_41(&[0.08, 0.04, 0.02], 0.3, &p, None).unwrap();
        assert!(r.rel_err < 1e-3, "{r:?}");
        assert!(r.monotone);
        let want = (-PI * I / 12.0).exp() / nu(0.3, &p);
        let chi0 = chi_41(p.point(0.0, 0), 0.0, &p, None).unwrap().value;
        assert!(close(r.rhs, want * chi0, 1e-14));
    }

    #[test]
    fn h_limit_52_level_one() {
        let p = ModularParam::real(0.5, 1).unwrap();
        let r = h_limit_52(&[0.08, 0.04, 0.02], 0.3, 1.0, &p).unwrap();
        assert!(r.rel_err < 1e-3, "{r:?}");
        assert!(r.monotone);
        assert!(h_limit_52(&[0.02, 0.04], 0.3, 1.0, &p).is_err());
    }
}
