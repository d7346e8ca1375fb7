use thiserror::Error;

use crate::Cplx;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid modular parameter: {0}")]
    InvalidParam(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("evaluation hit a pole at {0}")]
    PoleHit(Cplx),
    #[error("evaluation failed: {0}")]
    EvalFailure(String),
    #[error("representation not available in this regime: {0}")]
    RegimeError(String),
    #[error("q-Pochhammer product diverges (|q| = {0})")]
    DivergentProduct(f64),
    #[error("argument {0} lies on the branch cut (1, inf)")]
    BranchCut(Cplx),
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("invalid charges: {0}")]
    InvalidCharges(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("malformed gluing: {0}")]
    MalformedGluing(String),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("edge {0} is not balanced (weight {1})")]
    NotBalanced(usize, f64),
    #[error("edge {0} is not shared by exactly three distinct tetrahedra")]
    BadStar(usize),
    #[error("gauge function is nonzero on boundary edge {0}")]
    BoundaryGauge(usize),
    #[error("non-positive coordinate: {0}")]
    NonPositive(String),
    #[error("balance condition violated: {0}")]
    Unbalanced(String),
    #[error("Newton iteration did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("degenerate saddle: |h''| = {0}")]
    DegenerateSaddle(f64),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("contour Im = {0} leaves the pole-free band ({1}, {2})")]
    PoleOnContour(f64, f64, f64),
    #[error("parse error: {0}")]
    Parse(String),
}
