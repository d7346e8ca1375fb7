//! Numerics for the level-N Teichmüller TQFT.
//!
//! The crate is organised bottom-up:
//!
//! * [`an_core`]: the group `A_N = R x Z/NZ`, its Haar measure, Fourier and
//!   Gauss kernels, and adaptive contour quadrature.
//! * [`qdilog`]: Faddeev's `Φ_b`, the level-N dilogarithm `D_b`, q-Pochhammer
//!   symbols, `Li₂`, the Lobachevsky function and the cyclic dilogarithm.
//! * [`charged`]: charged dilogarithms and their transformation rules.
//! * [`identities`]: numerical verification of the global integral identities.
//! * [`triangulation`]: shaped pseudo 3-manifolds, gauge action, 3–2 moves, H₂.
//! * [`partition`]: tetrahedral kernels and the reduced knot integrals.
//! * [`asymptotics`]: saddle points, leading asymptotics and volume fits.
//!
//! All arithmetic is double precision; see [`Real`] and [`Cplx`].

pub mod an_core;
pub mod asymptotics;
pub mod charged;
pub mod error;
pub mod identities;
pub mod partition;
pub mod qdilog;
pub mod triangulation;

/// Real scalar used throughout.
pub type Real = f64;
/// Complex scalar used throughout.
pub type Cplx = num_complex::Complex<Real>;

pub use an_core::{ANPoint, Contour, ModularParam, QuadratureResult};
pub use error::{Error, Result};

/// `i`, spelled once.
pub const I: Cplx = Cplx::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: Real, im: Real) -> Cplx {
    Cplx::new(re, im)
}
