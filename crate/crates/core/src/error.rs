use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability p = {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("photon cutoff N = {0} must be at least 1")]
    InvalidCutoff(i64),

    #[error("time t = {0} must be finite and nonnegative")]
    InvalidTime(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("alpha = q/p is undefined for p = 0")]
    AlphaUndefined,

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("z = {0} lies on the branch cut of the contour integrand")]
    BranchCutHit(Complex64),

    #[error("contour quadrature did not converge at t = {t}: last doubling changed the result by {change:e}")]
    QuadratureNotConverged { t: f64, change: f64 },

    #[error("contour quadrature at t = {t} left imaginary residue {residue:e}")]
    ImaginaryResidue { t: f64, residue: f64 },

    #[error("e^W + alpha vanishes at W = {0}")]
    PoleHit(Complex64),

    #[error("e^W + alpha lies on the logarithm branch cut at W = {0}")]
    LogBranchHit(Complex64),

    #[error("Newton iteration at tau = {tau} stopped after {iterations} steps with residual {residual:e}")]
    NoConvergence {
        tau: f64,
        iterations: usize,
        residual: f64,
    },

    #[error("saddle solve at tau = {tau} left the seed branch: seed {seed}, converged to {found}")]
    BranchJump {
        tau: f64,
        seed: Complex64,
        found: Complex64,
    },

    #[error("invalid branch request: {0}")]
    InvalidBranch(String),

    #[error("continuation failed at tau = {tau}: {source}")]
    Continuation { tau: f64, source: Box<Error> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
