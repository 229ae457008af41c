//! Collapse and revival of Rabi oscillations in the Jaynes–Cummings model
//! driven by a binomial field state.
//!
//! The atomic inversion is computed four ways: the exact Fourier sum over
//! photon numbers, a numerically integrated contour representation, the
//! saddle-point approximation of that integral, and closed-form collapse and
//! revival asymptotics.

pub mod asymptotics;
mod binomial;
pub mod contour;
pub mod domain;
pub mod error;
pub mod exact;
pub mod quadrature;
pub mod report;
pub mod saddle;
pub mod series;
pub mod sum;
pub mod sweep;

pub use domain::{binomial_weights, make_params, ModelParams, ScaledTime, TimeGrid};
pub use error::{Error, Result};
pub use exact::InversionValue;
pub use sweep::Execution;
