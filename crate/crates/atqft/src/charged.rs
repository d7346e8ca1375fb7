//! Charged quantum dilogarithms `ψ_{a,c}` and their phase bookkeeping.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::an_core::{gauss_kernel, inverse_fourier, Contour};
use crate::qdilog::{log_d_b, DilogRegime};
use crate::{ANPoint, Cplx, Error, ModularParam, Real, Result, I};

/// Accepted drift in `a + b + c = 1/√N`.
pub const CHARGE_SUM_TOL: Real = 1e-12;

/// Positive charges with `a + b + c = 1/√N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargeTriple {
    pub a: Real,
    pub b: Real,
    pub c: Real,
}

impl ChargeTriple {
    /// `b` is derived from `a`, `c` and the level.
    pub fn new(a: Real, c: Real, n: u32) -> Result<Self> {
        let b = 1.0 / (n as Real).sqrt() - a - c;
        Self::check(a, b, c)
    }

    /// All three given; the sum may be off by rounding, `b` absorbs it.
    pub fn from_abc(a: Real, b: Real, c: Real, n: u32) -> Result<Self> {
        let target = 1.0 / (n as Real).sqrt();
        let drift = a + b + c - target;
        if drift.abs() > CHARGE_SUM_TOL {
            return Err(Error::InvalidCharges(format!(
                "a + b + c = {} but 1/√N = {target}",
                a + b + c
            )));
        }
        Self::check(a, target - a - c, c)
    }

    /// `a = c = 1/(3√N)`.
    pub fn symmetric(n: u32) -> Self {
        let t = 1.0 / (3.0 * (n as Real).sqrt());
        Self { a: t, b: t, c: t }
    }

    fn check(a: Real, b: Real, c: Real) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::InvalidCharges(format!(
                "charges must be positive, got ({a}, {b}, {c})"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// `(a, b, c) -> (b, c, a)`.
    pub fn rotate(self) -> Self {
        Self {
            a: self.b,
            b: self.c,
            c: self.a,
        }
    }
}

/// `ε`: the identity for `|b| = 1`, `(x, n) -> (x, -n)` for real `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonInvolution {
    pub regime: DilogRegime,
}

impl EpsilonInvolution {
    pub fn of(p: &ModularParam) -> Self {
        Self {
            regime: DilogRegime::of(p),
        }
    }

    pub fn apply(&self, a: ANPoint) -> ANPoint {
        match self.regime {
            DilogRegime::UnitCircleB => a,
            DilogRegime::RealB => a.with_n(-(a.n() as i64)),
        }
    }

    /// The involution of the other regime, for negative controls.
    pub fn flipped(&self) -> Self {
        let regime = match self.regime {
            DilogRegime::UnitCircleB => DilogRegime::RealB,
            DilogRegime::RealB => DilogRegime::UnitCircleB,
        };
        Self { regime }
    }
}

/// `log ψ_{a,c}(x, n)`.
pub fn log_psi_charged(x: ANPoint, ch: ChargeTriple, p: &ModularParam) -> Result<Cplx> {
    let shift = p.c_b * (ch.a + ch.c);
    Ok(-2.0 * PI * I * p.c_b * ch.a * x.x - log_d_b(x.shift(-shift), p)?)
}

/// `ψ_{a,c}(x, n) = e^{-2πi c_b a x} / D_b(x - c_b(a + c), n)`.
pub fn psi_charged(x: ANPoint, ch: ChargeTriple, p: &ModularParam) -> Result<Cplx> {
    Ok(log_psi_charged(x, ch, p)?.exp())
}

/// `φ_{a,c}(x, n) = ψ_{a,c}(x, -n)`.
pub fn phi_charged(x: ANPoint, ch: ChargeTriple, p: &ModularParam) -> Result<Cplx> {
    psi_charged(x.with_n(-(x.n() as i64)), ch, p)
}

/// `ψ̃_{a,c}(x, k) = ∫ ψ_{a,c}(y, m) e^{-2πixy} e^{2πikm/N} dy` by quadrature.
pub fn psi_tilde(x: ANPoint, ch: ChargeTriple, p: &ModularParam, contour: Contour) -> Result<Cplx> {
    let f = |y: ANPoint| psi_charged(y, ch, p);
    Ok(inverse_fourier(f, p, contour)(x)?.value)
}

/// `ν(x) = e^{-πi (c_b²/√N)(2x + 1/√N)/6}`.
pub fn nu(x: Real, p: &ModularParam) -> Cplx {
    let sn = p.sqrt_n();
    (-PI * I * p.c_b * p.c_b / sn * (2.0 * x + 1.0 / sn) / 6.0).exp()
}

/// `ν_{x,y} = ν(x - y) e^{πi c_b² x(x + y)}`.
pub fn nu_pair(x: Real, y: Real, p: &ModularParam) -> Cplx {
    nu(x - y, p) * (PI * I * p.c_b * p.c_b * x * (x + y)).exp()
}

/// Worst relative residual of each transformation rule over a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `ψ̃_{a,c}(z) = ψ_{c,b}(z) ⟨z⟩ e^{-iπc_b² a(a+2c)} ζ₀`.
    pub tilde: Real,
    /// `conj ψ_{a,c}(z) = ψ_{c,a}(-εz) ⟨z⟩ e^{iπc_b²(a+c)²} / ζ_inv`.
    pub conj_with_i: Real,
    /// As above with the exponent read as `e^{πc_b²(a+c)²}`.
    pub conj_without_i: Real,
    /// `conj ψ̃_{a,c}(z) = ψ_{b,c}(-εz) e^{-2πi c_b² ab} ζ₀`.
    pub conj_tilde: Real,
    /// `conj_with_i` with the involution of the wrong regime.
    pub conj_eps_flipped: Real,
    /// `conj_tilde` with the involution of the wrong regime.
    pub conj_tilde_eps_flipped: Real,
    pub points: usize,
}

fn rel(lhs: Cplx, rhs: Cplx) -> Real {
    (lhs - rhs).norm() / rhs.norm()
}

/// Evaluate the three transformation rules of `ψ_{a,c}` at real grid points.
pub fn charged_symmetries_check(
    ch: ChargeTriple,
    p: &ModularParam,
    grid: &[ANPoint],
) -> Result<SymmetryReport> {
    let contour = Contour::default().with_tol(1e-10);
    let eps = EpsilonInvolution::of(p);
    let bad = eps.flipped();
    let c2 = p.c_b * p.c_b;
    let swap_ac = ChargeTriple {
        a: ch.c,
        b: ch.b,
        c: ch.a,
    };
    let cb_first = ChargeTriple {
        a: ch.c,
        b: ch.a,
        c: ch.b,
    };
    let bc_first = ChargeTriple {
        a: ch.b,
        b: ch.a,
        c: ch.c,
    };
    let s = ch.a + ch.c;
    let ph_i = (I * PI * c2 * s * s).exp();
    let ph_no_i = (PI * c2 * s * s).exp();
    let mut r = SymmetryReport {
        tilde: 0.0,
        conj_with_i: 0.0,
        conj_without_i: 0.0,
        conj_tilde: 0.0,
        conj_eps_flipped: 0.0,
        conj_tilde_eps_flipped: 0.0,
        points: grid.len(),
    };
    for &z in grid {
        if z.x.im != 0.0 {
            return Err(Error::PreconditionViolated(format!(
                "conjugation rules need real points, got {}",
                z.x
            )));
        }
        let g = gauss_kernel(z);
        let t = psi_tilde(z, ch, p, contour)?;
        let rhs1 = psi_charged(z, cb_first, p)?
            * g
            * (-I * PI * c2 * ch.a * (ch.a + 2.0 * ch.c)).exp()
            * p.zeta0;
        r.tilde = r.tilde.max(rel(t, rhs1));

        let lhs2 = psi_charged(z, ch, p)?.conj();
        let base =
            |e: EpsilonInvolution| psi_charged(-e.apply(z), swap_ac, p).map(|v| v * g / p.zeta_inv);
        let good2 = base(eps)?;
        r.conj_with_i = r.conj_with_i.max(rel(lhs2, good2 * ph_i));
        r.conj_without_i = r.conj_without_i.max(rel(lhs2, good2 * ph_no_i));
        r.conj_eps_flipped = r.conj_eps_flipped.max(rel(lhs2, base(bad)? * ph_i));

        let lhs3 = t.conj();
        let ph3 = (-2.0 * PI * I * c2 * ch.a * ch.b).exp() * p.zeta0;
        let rhs3 = |e: EpsilonInvolution| psi_charged(-e.apply(z), bc_first, p).map(|v| v * ph3);
        r.conj_tilde = r.conj_tilde.max(rel(lhs3, rhs3(eps)?));
        r.conj_tilde_eps_flipped = r.conj_tilde_eps_flipped.max(rel(lhs3, rhs3(bad)?));
    }
    Ok(r)
}

/// Outcome of the pentagon charge relations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PentagonChargeCheck {
    pub holds: bool,
    /// Signed defect of each linear relation, in order.
    pub slack: [Real; 5],
    /// Whether every `(a_j, c_j)` is a valid charge pair.
    pub triples_valid: bool,
}

/// Tolerance on the linear relations.
pub const PENTAGON_CHARGE_TOL: Real = 1e-12;

/// `a₁ = a₀ + a₂`, `a₃ = a₂ + a₄`, `c₁ = c₀ + a₄`, `c₃ = a₀ + c₄`, `c₂ = c₁ + c₃`.
pub fn charge_pentagon_constraints(a: [Real; 5], c: [Real; 5], n: u32) -> PentagonChargeCheck {
    let slack = [
        a[1] - a[0] - a[2],
        a[3] - a[2] - a[4],
        c[1] - c[0] - a[4],
        c[3] - a[0] - c[4],
        c[2] - c[1] - c[3],
    ];
    let linear = slack.iter().all(|s| s.abs() <= PENTAGON_CHARGE_TOL);
    let triples_valid = (0..5).all(|j| ChargeTriple::new(a[j], c[j], n).is_ok());
    PentagonChargeCheck {
        holds: linear && triples_valid,
        slack,
        triples_valid,
    }
}
