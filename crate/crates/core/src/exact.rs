//! Direct evaluation of the finite Jaynes-Cummings sum
//! `⟨σ₃(t)⟩ = −Σ_{n=0}^{N} W_n cos(2√n t)`.
//!
//! This is the reference route every other method is checked against, so
//! all sums are compensated.

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{binomial_weights, ModelParams, ScaledTime, TimeGrid};
use crate::sum::{ComplexNeumaierSum, NeumaierSum};
use crate::sweep::{self, Execution};

/// Expectation value of σ₃ at one instant.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct InversionValue(pub f64);

impl InversionValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<InversionValue> for f64 {
    fn from(v: InversionValue) -> f64 {
        v.0
    }
}

/// Binomial weights paired with their Rabi frequencies `2√n`; built once
/// per parameter set and reused across time points. Zero weights are
/// dropped.
#[derive(Debug, Clone)]
pub struct ExactSum {
    terms: Vec<(f64, f64)>,
}

impl ExactSum {
    pub fn new(params: &ModelParams) -> Self {
        let terms = binomial_weights(params)
            .into_iter()
            .enumerate()
            .filter(|&(_, w)| w > 0.0)
            .map(|(n, w)| (w, 2.0 * (n as f64).sqrt()))
            .collect();
        Self { terms }
    }

    pub fn inversion(&self, t: f64) -> InversionValue {
        if t == 0.0 {
            return InversionValue(-1.0);
        }
        let acc: NeumaierSum = self
            .terms
            .iter()
            .map(|&(w, omega)| w * (omega * t).cos())
            .collect();
        InversionValue(-acc.value())
    }

    /// Same sum accumulated from the highest photon number down.
    pub fn inversion_reversed(&self, t: f64) -> InversionValue {
        let acc: NeumaierSum = self
            .terms
            .iter()
            .rev()
            .map(|&(w, omega)| w * (omega * t).cos())
            .collect();
        InversionValue(-acc.value())
    }

    /// `Σ W_n e^{2i√n t}`; its real part is minus the inversion.
    pub fn analytic_signal(&self, t: f64) -> Complex64 {
        let mut acc = ComplexNeumaierSum::default();
        for &(w, omega) in &self.terms {
            acc += Complex64::from_polar(w, omega * t);
        }
        acc.value()
    }

    /// Modulus of the analytic signal: the slowly varying envelope that
    /// bounds `|⟨σ₃⟩|`.
    pub fn envelope(&self, t: f64) -> f64 {
        self.analytic_signal(t).norm()
    }
}

pub fn inversion_exact(params: &ModelParams, t: ScaledTime) -> InversionValue {
    ExactSum::new(params).inversion(t.t)
}

pub fn inversion_exact_series(params: &ModelParams, grid: &TimeGrid) -> Vec<InversionValue> {
    inversion_exact_series_with(params, grid, Execution::default())
}

pub fn inversion_exact_series_with(
    params: &ModelParams,
    grid: &TimeGrid,
    exec: Execution,
) -> Vec<InversionValue> {
    let sum = ExactSum::new(params);
    sweep::map(grid.samples(), exec, |s| sum.inversion(s.t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_params;
    use std::f64::consts::PI;

    fn at(params: &ModelParams, t: f64) -> f64 {
        inversion_exact(params, ScaledTime::new(t, params).unwrap()).value()
    }

    #[test]
    fn starts_fully_inverted() {
        for p in [0.0, 0.1, 0.5, 0.93, 1.0] {
            let m = make_params(50, p).unwrap();
            assert_eq!(at(&m, 0.0), -1.0);
        }
    }

    #[test]
    fn two_term_sum_cancels() {
        let m = make_params(1, 0.5).unwrap();
        // −(0.5 + 0.5 cos π)
        assert!(at(&m, PI / 2.0).abs() < 1e-16);
    }

    #[test]
    fn fock_state_rabi_oscillation() {
        let m = make_params(50, 1.0).unwrap();
        for k in 0..200 {
            let t = k as f64 * 0.173;
            let want = -(2.0 * 50f64.sqrt() * t).cos();
            assert!((at(&m, t) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn half_period_value_matches_high_precision_resummation() {
        // 60-digit mpmath evaluation of −Σ C(50,n) 2^-50 cos(2√n·5π).
        let m = make_params(50, 0.5).unwrap();
        let t = 0.5 * m.revival_period();
        let want = 1.102_272_042_147_914_9e-7;
        assert!((at(&m, t) - want).abs() < 1e-14, "{}", at(&m, t));
    }

    #[test]
    fn batch_matches_pointwise_bit_for_bit() {
        let m = make_params(50, 0.9).unwrap();
        let grid = TimeGrid::new(&m, 0.0, 2.0 * m.revival_period(), 500).unwrap();
        let batch = inversion_exact_series(&m, &grid);
        for (s, v) in grid.samples().iter().zip(&batch) {
            assert_eq!(v.value().to_bits(), inversion_exact(&m, *s).value().to_bits());
        }
        let seq = inversion_exact_series_with(&m, &grid, Execution::Sequential);
        assert_eq!(batch, seq);
    }

    #[test]
    fn envelope_bounds_the_signal() {
        let m = make_params(50, 0.4).unwrap();
        let sum = ExactSum::new(&m);
        for k in 0..400 {
            let t = k as f64 * 0.11;
            assert!(sum.inversion(t).value().abs() <= sum.envelope(t) + 1e-14);
        }
    }
}
