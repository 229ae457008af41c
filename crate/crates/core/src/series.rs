//! Truncated power series in one variable with real coefficients.

use std::ops::{Add, Mul};

/// `Σ_{k<len} c_k x^k`, truncated at a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Self { coeffs }
    }

    /// `e^{a x}` to `len` terms.
    pub fn exp_linear(a: f64, len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        let mut term = 1.0;
        for k in 0..len {
            coeffs.push(term);
            term *= a / (k + 1) as f64;
        }
        Self::new(coeffs)
    }

    pub fn constant(c: f64, len: usize) -> Self {
        let mut coeffs = vec![0.0; len];
        coeffs[0] = c;
        Self::new(coeffs)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `self^a` for real `a`, by the J. C. P. Miller recurrence
    /// `k c₀ h_k = Σ_{j=1}^{k} ((a+1) j − k) c_j h_{k−j}`. Needs `c₀ > 0`.
    pub fn powf(&self, a: f64) -> Self {
        let c = &self.coeffs;
        assert!(c[0] > 0.0, "powf needs a positive constant term");
        let mut h = Vec::with_capacity(c.len());
        h.push(c[0].powf(a));
        for k in 1..c.len() {
            let s: f64 = (1..=k)
                .map(|j| ((a + 1.0) * j as f64 - k as f64) * c[j] * h[k - j])
                .sum();
            h.push(s / (k as f64 * c[0]));
        }
        Self::new(h)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let len = self.len().min(rhs.len());
        PowerSeries::new((0..len).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect())
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let len = self.len().min(rhs.len());
        let coeffs = (0..len)
            .map(|k| (0..=k).map(|j| self.coeffs[j] * rhs.coeffs[k - j]).sum())
            .collect();
        PowerSeries::new(coeffs)
    }
}
