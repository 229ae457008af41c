//! Saddle points of the contour integrand in the variable `W = −1/z₀`.
//!
//! The saddle equation is `τ + W² e^W / (e^W + α) = 0`. Its solutions form
//! continuous branches `W(τ)`: the collapse branch leaves `W = 0` along the
//! positive imaginary axis and revival branch `n` passes through `i2πn` at
//! `τ_n = 4π²pn²`. Only upper-half-plane saddles are tracked; their complex
//! conjugates contribute the conjugate term, which the real asymptotic form
//! below already contains.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::asymptotics::{lagrange_coefficients, revival_schedule, small_tau_w};
use crate::domain::{ModelParams, ScaledTime};
use crate::error::{Error, Result};
use crate::exact::InversionValue;

/// Accepted saddle points satisfy `|τ + W²e^W/(e^W+α)| <` this.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// A converged root farther than this from its seed belongs to another branch.
pub const BRANCH_JUMP: f64 = 1.0;
/// Continuation substeps keep the predicted `|ΔW|` below this.
pub const PREDICTOR_STEP: f64 = 0.1;

const MAX_NEWTON: usize = 50;
const POLE_EPS: f64 = 1e-14;
const SEED_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddlePoint {
    pub tau: f64,
    pub w: Complex64,
    /// `φ(W) = −τ/W + ln p + Log(e^W + α)`.
    pub phi: Complex64,
    /// `f = 1 + (W + τ/W)/2`.
    pub f: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum BranchId {
    Collapse,
    /// Revival branch through `i2πn`, `n ≥ 1`.
    Revival(u32),
}

impl BranchId {
    pub fn revival(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidBranch("revival index must be at least 1".into()));
        }
        Ok(BranchId::Revival(n))
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchId::Collapse => f.write_str("collapse"),
            BranchId::Revival(n) => write!(f, "revival({n})"),
        }
    }
}

impl FromStr for BranchId {
    type Err = Error;

    /// `collapse` or `revival` (index 1); use [`BranchId::revival`] for others.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "collapse" => Ok(BranchId::Collapse),
            "revival" => Ok(BranchId::Revival(1)),
            other => Err(Error::InvalidBranch(format!("unknown branch '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub branch: BranchId,
    /// Ordered by increasing τ.
    pub points: Vec<SaddlePoint>,
}

/// `e^W / (e^W + α)`, evaluated without overflow, or `PoleHit`.
fn fermi(w: Complex64, alpha: f64) -> Result<Complex64> {
    if w.re > 0.0 {
        let d = 1.0 + alpha * (-w).exp();
        if d.norm() < POLE_EPS {
            return Err(Error::PoleHit(w));
        }
        Ok(d.inv())
    } else {
        let e = w.exp();
        let d = e + alpha;
        if d.norm() < POLE_EPS {
            return Err(Error::PoleHit(w));
        }
        Ok(e / d)
    }
}

/// Defect `τ + W² e^W/(e^W + α)` of the saddle equation.
pub fn saddle_residual(w: Complex64, tau: f64, alpha: f64) -> Result<Complex64> {
    Ok(tau + w * w * fermi(w, alpha)?)
}

/// `d/dW [W² g]` with `g = e^W/(e^W+α)`, `g' = g(1−g)`.
fn residual_derivative(w: Complex64, g: Complex64) -> Complex64 {
    w * g * (2.0 + w * (1.0 - g))
}

/// `Log(e^W + α)` on the principal branch, or `LogBranchHit` on its cut.
fn log_shifted_exp(w: Complex64, alpha: f64) -> Result<Complex64> {
    let (scale, inner) = if w.re > 0.0 {
        // e^W + α = e^W (1 + α e^{−W})
        (w, 1.0 + alpha * (-w).exp())
    } else {
        (Complex64::new(0.0, 0.0), w.exp() + alpha)
    };
    let full = Complex64::from_polar(1.0, scale.im) * inner;
    if inner.norm() < POLE_EPS {
        return Err(Error::PoleHit(w));
    }
    if full.im == 0.0 && full.re < 0.0 {
        return Err(Error::LogBranchHit(w));
    }
    Ok(Complex64::new(scale.re + inner.norm().ln(), full.arg()))
}

fn phi_with_alpha(w: Complex64, tau: f64, alpha: f64) -> Result<Complex64> {
    // ln p = −ln(1 + α)
    Ok(-tau / w - alpha.ln_1p() + log_shifted_exp(w, alpha)?)
}

/// `φ(W) = Φ(−1/W) = −τ/W + ln p + Log(e^W + α)`.
pub fn phi_of_w(w: Complex64, tau: f64, params: &ModelParams) -> Result<Complex64> {
    if w == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("φ(W) is singular at W = 0".into()));
    }
    let alpha = params.require_alpha()?;
    phi_with_alpha(w, tau, alpha)
}

/// `f = 1 + (W + τ/W)/2`, so that `Φ'' = −2Wτf`.
pub fn f_of(w: Complex64, tau: f64) -> Complex64 {
    1.0 + 0.5 * (w + tau / w)
}

/// Complex Newton iteration on the saddle equation from `seed`, halving the
/// step whenever the residual would grow.
pub fn solve_saddle(tau: f64, alpha: f64, seed: Complex64) -> Result<SaddlePoint> {
    let mut w = seed;
    let mut r = saddle_residual(w, tau, alpha)?;
    let mut iterations = 0;
    while iterations < MAX_NEWTON {
        if r.norm() < 0.01 * RESIDUAL_TOL {
            break;
        }
        iterations += 1;
        let g = fermi(w, alpha)?;
        let d = residual_derivative(w, g);
        if d.norm() == 0.0 {
            break;
        }
        let step = r / d;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = w - lambda * step;
            if let Ok(rt) = saddle_residual(trial, tau, alpha) {
                if rt.norm() < r.norm() || rt.norm() < 0.01 * RESIDUAL_TOL {
                    w = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted || (lambda * step).norm() <= 1e-16 * w.norm().max(1.0) {
            break;
        }
    }
    let residual = r.norm();
    if residual >= RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            tau,
            iterations,
            residual,
        });
    }
    if (w - seed).norm() > BRANCH_JUMP {
        return Err(Error::BranchJump {
            tau,
            seed,
            found: w,
        });
    }
    Ok(SaddlePoint {
        tau,
        w,
        phi: phi_with_alpha(w, tau, alpha)?,
        f: f_of(w, tau),
        residual,
    })
}

/// Advances an accepted point to `target` in substeps small enough that
/// the tangent predictor moves `W` by at most [`PREDICTOR_STEP`].
fn continue_to(from: &SaddlePoint, target: f64, alpha: f64) -> Result<SaddlePoint> {
    let mut cur = *from;
    while cur.tau != target {
        let g = fermi(cur.w, alpha)?;
        // S(W(τ), τ) = 0  ⇒  dW/dτ = −1 / S_W
        let slope = -residual_derivative(cur.w, g).inv();
        let remaining = target - cur.tau;
        let max_dtau = PREDICTOR_STEP / slope.norm().max(1e-300);
        let dtau = if remaining.abs() <= max_dtau {
            remaining
        } else {
            max_dtau.copysign(remaining)
        };
        let tau = if dtau == remaining { target } else { cur.tau + dtau };
        let seed = cur.w + slope * (tau - cur.tau);
        cur = solve_saddle(tau, alpha, seed)?;
    }
    Ok(cur)
}

fn wrap_at(tau: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::Continuation {
        tau,
        source: Box::new(e),
    }
}

/// Traces `branch` through the given τ values (any order; the result is
/// sorted by increasing τ). Revival branches always include `τ_n`.
pub fn trace_branch_at(branch: BranchId, taus: &[f64], params: &ModelParams) -> Result<Trajectory> {
    let alpha = params.require_alpha()?;
    let mut taus: Vec<f64> = taus.to_vec();
    if taus.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidBranch("tau values must be finite and nonnegative".into()));
    }
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    if taus.is_empty() {
        return Err(Error::InvalidBranch("no tau values requested".into()));
    }

    let points = match branch {
        BranchId::Collapse => {
            if taus[0] <= 0.0 {
                return Err(Error::InvalidBranch(
                    "the collapse branch starts at W = 0; tau must be positive".into(),
                ));
            }
            let coeffs = lagrange_coefficients(alpha, SEED_ORDER)?;
            let first = taus[0];
            let start = solve_saddle(first, alpha, small_tau_w(first, &coeffs)).map_err(wrap_at(first))?;
            let mut points = vec![start];
            for &tau in &taus[1..] {
                let next = continue_to(points.last().unwrap(), tau, alpha).map_err(wrap_at(tau))?;
                points.push(next);
            }
            points
        }
        BranchId::Revival(n) => {
            let sched = revival_schedule(params, n)?;
            let (lo, hi) = (taus[0], *taus.last().unwrap());
            if !(lo <= sched.tau_n && sched.tau_n <= hi) {
                return Err(Error::InvalidBranch(format!(
                    "revival branch {n} is seeded at tau_n = {}, outside [{lo}, {hi}]",
                    sched.tau_n
                )));
            }
            if !taus.contains(&sched.tau_n) {
                taus.push(sched.tau_n);
                taus.sort_by(f64::total_cmp);
            }
            let k0 = taus.iter().position(|&t| t == sched.tau_n).unwrap();
            let seed = Complex64::new(0.0, 2.0 * PI * f64::from(n));
            let anchor = solve_saddle(sched.tau_n, alpha, seed).map_err(wrap_at(sched.tau_n))?;

            let mut below = Vec::with_capacity(k0);
            let mut cur = anchor;
            for &tau in taus[..k0].iter().rev() {
                cur = continue_to(&cur, tau, alpha).map_err(wrap_at(tau))?;
                below.push(cur);
            }
            below.reverse();
            let mut points = below;
            points.push(anchor);
            let mut cur = anchor;
            for &tau in &taus[k0 + 1..] {
                cur = continue_to(&cur, tau, alpha).map_err(wrap_at(tau))?;
                points.push(cur);
            }
            points
        }
    };
    Ok(Trajectory { branch, points })
}

/// Traces `branch` on `steps + 1` evenly spaced τ values over `[lo, hi]`.
pub fn trace_branch(
    branch: BranchId,
    tau_range: (f64, f64),
    params: &ModelParams,
    steps: usize,
) -> Result<Trajectory> {
    let (lo, hi) = tau_range;
    if steps == 0 || hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::InvalidBranch(format!(
            "need steps >= 1 and a nonempty range, got {steps} steps over [{lo}, {hi}]"
        )));
    }
    let taus: Vec<f64> = (0..=steps)
        .map(|k| {
            if k == steps {
                hi
            } else {
                lo + (hi - lo) * k as f64 / steps as f64
            }
        })
        .collect();
    trace_branch_at(branch, &taus, params)
}

/// Contribution of one saddle (and its conjugate):
/// `−|f|^{−1/2} e^{N Re φ} cos(N Im φ − ½ arg f)`.
pub fn inversion_saddle(params: &ModelParams, t: ScaledTime, sp: &SaddlePoint) -> InversionValue {
    debug_assert!((sp.tau - t.tau).abs() <= 1e-12 * t.tau.max(1.0));
    InversionValue(-saddle_amplitude(params, sp) * (params.n_f64() * sp.phi.im - 0.5 * sp.f.arg()).cos())
}

/// Envelope `|f|^{−1/2} e^{N Re φ}` of a saddle contribution.
pub fn saddle_amplitude(params: &ModelParams, sp: &SaddlePoint) -> f64 {
    (params.n_f64() * sp.phi.re).exp() / sp.f.norm().sqrt()
}

/// Writes a trajectory as CSV:
/// `tau,re_w,im_w,re_phi,im_phi,re_f,im_f,residual`.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["tau", "re_w", "im_w", "re_phi", "im_phi", "re_f", "im_f", "residual"])?;
    for p in &traj.points {
        wr.serialize((
            p.tau, p.w.re, p.w.im, p.phi.re, p.phi.im, p.f.re, p.f.im, p.residual,
        ))?;
    }
    wr.flush()?;
    Ok(())
}
