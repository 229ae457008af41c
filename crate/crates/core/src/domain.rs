//! Model parameters, scaled time and the binomial photon distribution.

use serde::Serialize;

use crate::binomial;
use crate::error::{Error, Result};

/// Validated parameters of a binomial field state.
///
/// `q` is stored as `1 - p` and `alpha = q / p` is kept only when `p > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    cutoff: u32,
    p: f64,
    q: f64,
    alpha: Option<f64>,
}

impl ModelParams {
    pub fn new(cutoff: i64, p: f64) -> Result<Self> {
        if cutoff < 1 || cutoff > u32::MAX as i64 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let q = 1.0 - p;
        let alpha = (p > 0.0).then(|| q / p);
        Ok(Self {
            cutoff: cutoff as u32,
            p,
            q,
            alpha,
        })
    }

    /// Photon-number cutoff N (number of binomial trials).
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn n_f64(&self) -> f64 {
        self.cutoff as f64
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// `alpha`, or [`Error::AlphaUndefined`] for the vacuum field.
    pub fn require_alpha(&self) -> Result<f64> {
        self.alpha.ok_or(Error::AlphaUndefined)
    }

    /// Revival period `2π√(Np)`; zero for `p = 0`.
    pub fn revival_period(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.n_f64() * self.p).sqrt()
    }

    /// Scaled time `τ = t²/N`.
    pub fn tau_of(&self, t: f64) -> f64 {
        t * t / self.n_f64()
    }
}

/// Shorthand for [`ModelParams::new`].
pub fn make_params(cutoff: i64, p: f64) -> Result<ModelParams> {
    ModelParams::new(cutoff, p)
}

/// Dimensionless time (coupling absorbed into `t`) with `τ = t²/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledTime {
    pub t: f64,
    pub tau: f64,
}

impl ScaledTime {
    pub fn new(t: f64, params: &ModelParams) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidTime(t));
        }
        Ok(Self {
            t,
            tau: params.tau_of(t),
        })
    }
}

/// Evenly spaced times on `[start, stop]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    start: f64,
    stop: f64,
    samples: Vec<ScaledTime>,
}

impl TimeGrid {
    pub fn new(params: &ModelParams, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidGrid("count must be positive".into()));
        }
        if !start.is_finite() || !stop.is_finite() || start < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "bounds [{start}, {stop}] must be finite and nonnegative"
            )));
        }
        if count > 1 && stop <= start {
            return Err(Error::InvalidGrid(format!(
                "stop {stop} must exceed start {start}"
            )));
        }
        let step = if count > 1 {
            (stop - start) / (count - 1) as f64
        } else {
            0.0
        };
        let samples = (0..count)
            .map(|k| {
                // pin the last node to `stop` so rounding never overshoots
                let t = if k + 1 == count && count > 1 {
                    stop
                } else {
                    start + step * k as f64
                };
                ScaledTime::new(t, params)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            start,
            stop,
            samples,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[ScaledTime] {
        &self.samples
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }
}

/// Binomial photon-number distribution `W_n = C(N,n) pⁿ q^(N−n)`, `n = 0..=N`.
///
/// Interior terms are evaluated in log space with the saddle-point
/// (Stirling error plus deviance) form of the log-binomial coefficient,
/// which keeps full relative accuracy for large `N`. The degenerate
/// cases `p = 0` and `p = 1` return a single unit weight.
pub fn binomial_weights(params: &ModelParams) -> Vec<f64> {
    let n = params.cutoff() as usize;
    let (p, q) = (params.p(), params.q());
    let mut weights = vec![0.0; n + 1];
    if p == 0.0 {
        weights[0] = 1.0;
        return weights;
    }
    if q == 0.0 {
        weights[n] = 1.0;
        return weights;
    }
    for (k, w) in weights.iter_mut().enumerate() {
        *w = binomial::log_pmf(k as u32, params.cutoff(), p, q).exp();
    }
    weights
}
