//! Closed-form approximations: the small-τ reversion series of the saddle
//! trajectory, the Cummings collapse, revival timing and the revival shape.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{ModelParams, ScaledTime};
use crate::error::{Error, Result};
use crate::exact::InversionValue;
use crate::series::PowerSeries;

/// Coefficients `c_1..c_m` of `W(τ) = Σ c_k (i√τ)^k` on the collapse branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesCoefficients {
    pub alpha: f64,
    c: Vec<f64>,
}

impl SeriesCoefficients {
    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// `c_k`, one-based.
    pub fn get(&self, k: usize) -> f64 {
        self.c[k - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }
}

/// Reversion coefficients of `τ = −W²/(1 + α e^{−W})`.
///
/// With `u = i√τ` the equation reads `W = u (1 + α e^{−W})^{1/2}`, so by
/// Lagrange inversion `c_k = [W^{k−1}] (1 + α e^{−W})^{k/2} / k`. Each power
/// is formed exactly with the series power recurrence.
pub fn lagrange_coefficients(alpha: f64, m: usize) -> Result<SeriesCoefficients> {
    if m == 0 {
        return Err(Error::InvalidArgument("series order must be at least 1".into()));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must be finite and nonnegative"
        )));
    }
    let base = &PowerSeries::constant(1.0, m) + &PowerSeries::exp_linear(-1.0, m).scale(alpha);
    let c = (1..=m)
        .map(|k| base.powf(k as f64 / 2.0).coeff(k - 1) / k as f64)
        .collect();
    Ok(SeriesCoefficients { alpha, c })
}

/// Truncated series `Σ_{k=1}^{m} c_k (i√τ)^k`.
pub fn small_tau_w(tau: f64, coeffs: &SeriesCoefficients) -> Complex64 {
    let u = Complex64::new(0.0, tau.sqrt());
    coeffs
        .c
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| (acc + c) * u)
}

/// Gaussian collapse `−e^{−t²q/2} cos(2√(Np) t)`.
pub fn collapse_inversion(params: &ModelParams, t: ScaledTime) -> InversionValue {
    let omega = 2.0 * (params.n_f64() * params.p()).sqrt();
    InversionValue(-collapse_envelope(params, t.t) * (omega * t.t).cos())
}

pub fn collapse_envelope(params: &ModelParams, t: f64) -> f64 {
    (-0.5 * t * t * params.q()).exp()
}

/// Timing of revival `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevivalSchedule {
    pub n: u32,
    /// Revival period `T = 2π√(Np)`.
    pub period: f64,
    /// `t_n = nT`.
    pub t_n: f64,
    /// `τ_n = 4π² p n²`.
    pub tau_n: f64,
}

pub fn revival_schedule(params: &ModelParams, n: u32) -> Result<RevivalSchedule> {
    if n == 0 {
        return Err(Error::InvalidArgument("revival index must be at least 1".into()));
    }
    if params.p() == 0.0 {
        return Err(Error::InvalidArgument("vacuum field (p = 0) has no revivals".into()));
    }
    let period = params.revival_period();
    let nf = f64::from(n);
    Ok(RevivalSchedule {
        n,
        period,
        t_n: nf * period,
        tau_n: 4.0 * PI * PI * params.p() * nf * nf,
    })
}

/// Which constant enters the last term under the revival cosine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMode {
    /// `½ arg(1 + iπnq)`.
    #[default]
    ExactArg,
    /// Fixed `π/4`; used by the `figure1` command.
    QuarterPi,
    /// Large-q limit `arg → π/2`, i.e. `½·π/2`.
    HalfPi,
}

impl PhaseMode {
    pub fn phase_term(self, n: u32, q: f64) -> f64 {
        match self {
            PhaseMode::ExactArg => 0.5 * Complex64::new(1.0, PI * f64::from(n) * q).arg(),
            PhaseMode::QuarterPi => FRAC_PI_4,
            PhaseMode::HalfPi => 0.5 * (PI / 2.0),
        }
    }
}

impl fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseMode::ExactArg => "exact_arg",
            PhaseMode::QuarterPi => "quarter_pi",
            PhaseMode::HalfPi => "half_pi",
        })
    }
}

impl FromStr for PhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact_arg" => Ok(PhaseMode::ExactArg),
            "quarter_pi" => Ok(PhaseMode::QuarterPi),
            "half_pi" => Ok(PhaseMode::HalfPi),
            other => Err(Error::InvalidArgument(format!("unknown phase mode '{other}'"))),
        }
    }
}

/// Gaussian revival envelope `D^{−1/4} exp(−q (t−t_n)² / 2D)`, `D = 1 + π²q²n²`.
pub fn revival_envelope(params: &ModelParams, t: f64, n: u32) -> Result<f64> {
    let sched = revival_schedule(params, n)?;
    let d = revival_width_factor(params.q(), n);
    let dt = t - sched.t_n;
    Ok(d.powf(-0.25) * (-params.q() * dt * dt / (2.0 * d)).exp())
}

fn revival_width_factor(q: f64, n: u32) -> f64 {
    let x = PI * q * f64::from(n);
    1.0 + x * x
}

/// Shape of revival `n` from the quadratic expansion about `τ_n`.
pub fn revival_inversion(
    params: &ModelParams,
    t: ScaledTime,
    n: u32,
    mode: PhaseMode,
) -> Result<InversionValue> {
    let sched = revival_schedule(params, n)?;
    let q = params.q();
    let d = revival_width_factor(q, n);
    let nf = f64::from(n);
    let dt = t.t - sched.t_n;
    let envelope = d.powf(-0.25) * (-q * dt * dt / (2.0 * d)).exp();
    let phase = t.t * t.t / (2.0 * PI * nf) - dt * dt / (2.0 * PI * nf * d) - mode.phase_term(n, q);
    Ok(InversionValue(-envelope * phase.cos()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_params;

    fn st(params: &ModelParams, t: f64) -> ScaledTime {
        ScaledTime::new(t, params).unwrap()
    }

    #[test]
    fn leading_coefficients() {
        for alpha in [0.0, 0.25, 1.0, 4.0, 9.5] {
            let c = lagrange_coefficients(alpha, 2).unwrap();
            assert!((c.get(1) - (1.0 + alpha).sqrt()).abs() < 1e-14);
            assert!((c.get(2) + alpha / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pure_state_series_is_linear() {
        // α = 0: τ = −W², so W = i√τ exactly
        let c = lagrange_coefficients(0.0, 8).unwrap();
        assert_eq!(c.get(1), 1.0);
        for k in 2..=8 {
            assert!(c.get(k).abs() < 1e-15);
        }
        let w = small_tau_w(0.3, &c);
        assert!((w - Complex64::new(0.0, 0.3f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn rational_coefficients_for_alpha_three() {
        // 1 + α = 4 makes every c_k rational; values from sympy series
        // reversion of u = W / sqrt(1 + 3 e^{-W}).
        let want = [
            2.0,
            -3.0 / 2.0,
            33.0 / 16.0,
            -13.0 / 4.0,
            5759.0 / 1024.0,
            -413.0 / 40.0,
            9_708_143.0 / 491_520.0,
            -32713.0 / 840.0,
        ];
        let c = lagrange_coefficients(3.0, want.len()).unwrap();
        for (k, w) in want.iter().enumerate() {
            assert!((c.get(k + 1) - w).abs() < 1e-13, "c_{} = {} vs {w}", k + 1, c.get(k + 1));
        }
    }

    #[test]
    fn two_term_series() {
        let c = lagrange_coefficients(1.0, 2).unwrap();
        let tau: f64 = 1e-4;
        let w = small_tau_w(tau, &c);
        let want = Complex64::new(tau / 2.0, (2.0 * tau).sqrt());
        assert!((w - want).norm() < 1e-16);
        assert_eq!(small_tau_w(0.0, &c), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(lagrange_coefficients(1.0, 0).is_err());
        assert!(lagrange_coefficients(-1.0, 3).is_err());
    }

    #[test]
    fn collapse_formula() {
        let m = make_params(50, 0.5).unwrap();
        assert_eq!(collapse_inversion(&m, st(&m, 0.0)).value(), -1.0);
        let v = collapse_inversion(&m, st(&m, 2.0)).value();
        assert!((v + (-1.0f64).exp() * 20f64.cos()).abs() < 1e-15);

        let pure = make_params(50, 1.0).unwrap();
        for t in [0.3, 5.0, 17.0] {
            let v = collapse_inversion(&pure, st(&pure, t)).value();
            assert_eq!(v, -(2.0 * 50f64.sqrt() * t).cos());
        }
    }

    #[test]
    fn schedule() {
        let m = make_params(50, 0.5).unwrap();
        let s = revival_schedule(&m, 1).unwrap();
        assert!((s.period - 10.0 * PI).abs() < 1e-13);
        assert!((s.tau_n - s.t_n * s.t_n / 50.0).abs() < 1e-12);

        let pure = make_params(50, 1.0).unwrap();
        let s2 = revival_schedule(&pure, 2).unwrap();
        assert!((s2.t_n - 4.0 * PI * 50f64.sqrt()).abs() < 1e-12);

        assert!(revival_schedule(&make_params(50, 0.0).unwrap(), 1).is_err());
        assert!(revival_schedule(&m, 0).is_err());
    }

    #[test]
    fn revival_peak_value() {
        let m = make_params(50, 0.5).unwrap();
        let t1 = revival_schedule(&m, 1).unwrap().t_n;
        let v = revival_inversion(&m, st(&m, t1), 1, PhaseMode::ExactArg).unwrap();
        let amp = (1.0 + PI * PI * 0.25).powf(-0.25);
        let phase = t1 * t1 / (2.0 * PI) - 0.5 * (PI / 2.0).atan();
        assert!((v.value() + amp * phase.cos()).abs() < 1e-14);
    }

    #[test]
    fn revival_without_dephasing_has_unit_envelope() {
        let m = make_params(50, 1.0).unwrap();
        let tn = revival_schedule(&m, 3).unwrap().t_n;
        let v = revival_inversion(&m, st(&m, tn), 3, PhaseMode::ExactArg).unwrap();
        assert!((v.value() + (tn * tn / (6.0 * PI)).cos()).abs() < 1e-12);
        assert_eq!(revival_envelope(&m, tn + 7.0, 3).unwrap(), 1.0);
    }

    #[test]
    fn phase_modes() {
        assert_eq!(PhaseMode::QuarterPi.phase_term(1, 0.3), FRAC_PI_4);
        assert!((PhaseMode::ExactArg.phase_term(1, 0.5) - 0.5 * (PI / 2.0).atan()).abs() < 1e-16);
        // at q = 0.9 the large-q limit is ~0.17 rad off for the first
        // revival and within 0.12 rad from the second one on
        let gap1 = (PhaseMode::HalfPi.phase_term(1, 0.9) - PhaseMode::ExactArg.phase_term(1, 0.9)).abs();
        assert!((gap1 - 0.169_97).abs() < 1e-4, "{gap1}");
        let gap2 = (PhaseMode::HalfPi.phase_term(2, 0.9) - PhaseMode::ExactArg.phase_term(2, 0.9)).abs();
        assert!(gap2 < 0.12);
        for s in ["exact_arg", "quarter_pi", "half_pi"] {
            assert_eq!(s.parse::<PhaseMode>().unwrap().to_string(), s);
        }
        assert!("pi".parse::<PhaseMode>().is_err());
    }

    #[test]
    fn revival_envelope_peaks_at_t_n() {
        let m = make_params(50, 0.3).unwrap();
        let s = revival_schedule(&m, 2).unwrap();
        let peak = revival_envelope(&m, s.t_n, 2).unwrap();
        let want = (1.0 + PI * PI * 0.49 * 4.0).powf(-0.25);
        assert!((peak - want).abs() < 1e-15);
        for dt in [-3.0, -0.1, 0.1, 2.0] {
            assert!(revival_envelope(&m, s.t_n + dt, 2).unwrap() < peak);
        }
    }
}
