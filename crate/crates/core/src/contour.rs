//! Hankel-contour quadrature of the binomial inversion integral
//!
//! ```text
//! ⟨σ₃(t)⟩ = −(√(Nτ) / (2√π i)) ∫_{-∞}^{(0+)} z^{-1/2} e^{N Φ(z)} dz,
//! Φ(z) = τ z + ln(p e^{-1/z} + q),   τ = t²/N.
//! ```
//!
//! The origin is both the branch point of `z^{-1/2}` and an essential
//! singularity of `e^{-1/z}`. A plain circle through the small-τ saddle is
//! well conditioned only in the collapse regime: on its left half
//! `|e^{-1/z}|` grows like `e^{1/r}` and on its right half `e^{Nτz}` grows
//! like `e^{Nτr}`, and at revival times the two together produce integrand
//! values beyond 1e100 around an O(1) result.
//!
//! The path used here keeps `|e^{NΦ}|` bounded by a small constant
//! everywhere:
//!
//! * rays at `±ray_angle` from `ray_length` in to `outer_radius = 1/√τ`
//!   (there `Nτ Re z + N ln|q + p e^{-1/z}| ≤ N|cos θ|(1/ρ − τρ) ≤ 0`);
//! * arcs of radius `outer_radius` from `±ray_angle` to `±π/2`;
//! * the imaginary axis from `±i·outer_radius` to `±i·loop_radius`, where
//!   `|e^{Nτz}| = 1` and `|q + p e^{-1/z}| ≤ 1`;
//! * a right half-circle of radius `loop_radius` through the positive real
//!   axis, with the radius chosen so `Nτr + N ln(q + p e^{-1/r})` stays
//!   below a fixed slack.
//!
//! When `loop_radius == outer_radius` the axis pieces vanish and the path is
//! the classic circle-plus-rays keyhole.
//!
//! Each piece is cut into 16-point Gauss–Legendre panels placed by
//! equidistributing a local oscillation/decay rate, and the whole rule is
//! refined by global doubling until successive results agree.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{ModelParams, ScaledTime, TimeGrid};
use crate::error::{Error, Result};
use crate::exact::InversionValue;
use crate::quadrature::GaussLegendre;
use crate::sum::ComplexNeumaierSum;
use crate::sweep::{self, Execution};

/// Converged results must have `|Im| <` this.
pub const IMAG_RESIDUE_LIMIT: f64 = 1e-8;

/// Allowed growth `N·(Nτr/N + ln(q + p e^{-1/r}))` at the real-axis crossing.
const CROSSING_SLACK: f64 = 5.0;

/// Rays end where `Nτ Re z` has dropped by this much below its start.
const RAY_DECAY: f64 = 45.0;

const RADIUS_CLAMP: (f64, f64) = (1e-3, 1e3);
const RATE_SAMPLES: usize = 192;

/// Geometry and refinement controls for the Hankel path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    /// Radius of the arc around the origin through the positive real axis.
    pub loop_radius: f64,
    /// Radius where the rays attach; `≥ loop_radius`.
    pub outer_radius: f64,
    /// Angle of the rays from the positive real axis, in `(π/2, π)`.
    pub ray_angle: f64,
    /// Distance from the origin at which the rays are truncated.
    pub ray_length: f64,
    /// Phase/decay budget (radians) per panel before any doubling.
    pub panel_budget: f64,
    pub max_doublings: u32,
    /// Convergence threshold on the change between successive doublings.
    pub tolerance: f64,
}

impl ContourSpec {
    pub const DEFAULT_RAY_ANGLE: f64 = 0.9 * PI;
    pub const DEFAULT_PANEL_BUDGET: f64 = 4.0;
    pub const DEFAULT_MAX_DOUBLINGS: u32 = 8;
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidContour(msg));
        if !(self.ray_angle > FRAC_PI_2 && self.ray_angle < PI) {
            return bad(format!("ray_angle {} outside (π/2, π)", self.ray_angle));
        }
        if !(self.loop_radius > 0.0 && self.loop_radius.is_finite()) {
            return bad(format!("loop_radius {} must be positive", self.loop_radius));
        }
        if !(self.outer_radius >= self.loop_radius && self.outer_radius.is_finite()) {
            return bad(format!(
                "outer_radius {} must be at least loop_radius {}",
                self.outer_radius, self.loop_radius
            ));
        }
        if !(self.ray_length > self.outer_radius && self.ray_length.is_finite()) {
            return bad(format!(
                "ray_length {} must exceed outer_radius {}",
                self.ray_length, self.outer_radius
            ));
        }
        if !(self.panel_budget > 0.0 && self.tolerance > 0.0) {
            return bad("panel_budget and tolerance must be positive".into());
        }
        Ok(())
    }

    /// Changes the ray angle, stretching the rays so the decay reached at
    /// their ends stays the same.
    pub fn with_ray_angle(mut self, angle: f64) -> Self {
        let stretch = self.ray_angle.cos().abs() / angle.cos().abs();
        if stretch.is_finite() {
            self.ray_length = self.outer_radius + (self.ray_length - self.outer_radius) * stretch;
        }
        self.ray_angle = angle;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }
}

/// Outcome of one contour evaluation with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourEvaluation {
    pub value: InversionValue,
    /// Imaginary part left by the quadrature; zero for the exact integral.
    pub imag_residue: f64,
    /// Quadrature nodes used by the accepted level.
    pub nodes: usize,
    pub doublings: u32,
    /// Change between the last two levels.
    pub last_change: f64,
}

/// Principal `Log(p e^{-1/z} + q)`, stable when `|e^{-1/z}|` overflows.
fn log_field_factor(z: Complex64, p: f64, q: f64) -> Complex64 {
    let w = -z.inv();
    if p == 0.0 {
        return Complex64::new(q.ln(), 0.0);
    }
    if w.re <= 0.0 {
        return (p * w.exp() + q).ln();
    }
    // p e^{w} + q = e^{w} (p + q e^{-w}): take the modulus from the factored
    // form and the principal argument of the product.
    let inner = p + q * (-w).exp();
    let re = w.re + inner.norm().ln();
    let arg = Complex64::from_polar(1.0, w.im) * inner;
    Complex64::new(re, arg.arg())
}

/// `Φ(z) = τz + Log(p e^{-1/z} + q)` on the principal branch.
pub fn phi_big(z: Complex64, tau: f64, params: &ModelParams) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) || (z.im == 0.0 && z.re < 0.0) || !z.is_finite() {
        return Err(Error::BranchCutHit(z));
    }
    Ok(tau * z + log_field_factor(z, params.p(), params.q()))
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// `z = e^{s} e^{iθ}`, parametrised by `s = ln ρ`.
    Ray { angle: f64, from: f64, to: f64 },
    /// `z = r e^{iθ}`.
    Arc { radius: f64, from: f64, to: f64 },
    /// `z = ±i/u`.
    Axis { sign: f64, from: f64, to: f64 },
}

impl Piece {
    fn bounds(&self) -> (f64, f64) {
        match *self {
            Piece::Ray { from, to, .. } | Piece::Arc { from, to, .. } | Piece::Axis { from, to, .. } => {
                (from, to)
            }
        }
    }

    /// `(z(s), dz/ds)`.
    fn point(&self, s: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Ray { angle, .. } => {
                let z = Complex64::from_polar(s.exp(), angle);
                (z, z)
            }
            Piece::Arc { radius, .. } => {
                let z = Complex64::from_polar(radius, s);
                (z, Complex64::i() * z)
            }
            Piece::Axis { sign, .. } => {
                let z = Complex64::new(0.0, sign / s);
                (z, Complex64::new(0.0, -sign / (s * s)))
            }
        }
    }
}

/// Integrand of the contour integral for fixed `(params, τ)`.
struct Integrand {
    n: f64,
    tau: f64,
    p: f64,
    q: f64,
}

impl Integrand {
    fn new(params: &ModelParams, tau: f64) -> Self {
        Self {
            n: params.n_f64(),
            tau,
            p: params.p(),
            q: params.q(),
        }
    }

    /// `z^{-1/2} e^{NΦ(z)}`.
    fn value(&self, z: Complex64) -> Complex64 {
        let field = log_field_factor(z, self.p, self.q);
        if field.re == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        (self.n * (self.tau * z + field) - 0.5 * z.ln()).exp()
    }

    /// Local rate (per unit |dz|) at which the integrand oscillates, decays
    /// or varies algebraically. Only used to place panels.
    fn rate(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let u = -z.inv().re;
        let g = if self.p == 0.0 {
            0.0
        } else if u > 0.0 {
            self.p / (self.q * (-u).exp() + self.p)
        } else {
            let e = self.p * u.exp();
            e / (self.q + e)
        };
        self.n * self.tau + 1.0 / r + self.n * g / (r * r)
    }
}

/// A piece together with its cumulative rate profile.
struct PlacedPiece {
    piece: Piece,
    samples: Vec<f64>,
    cumulative: Vec<f64>,
}

impl PlacedPiece {
    fn new(piece: Piece, integrand: &Integrand) -> Self {
        let (a, b) = piece.bounds();
        let samples: Vec<f64> = (0..=RATE_SAMPLES)
            .map(|k| a + (b - a) * k as f64 / RATE_SAMPLES as f64)
            .collect();
        let rates: Vec<f64> = samples
            .iter()
            .map(|&s| {
                let (z, dz) = piece.point(s);
                integrand.rate(z) * dz.norm()
            })
            .collect();
        let mut cumulative = Vec::with_capacity(samples.len());
        cumulative.push(0.0);
        for k in 1..samples.len() {
            let ds = (samples[k] - samples[k - 1]).abs();
            let prev = cumulative[k - 1];
            cumulative.push(prev + 0.5 * ds * (rates[k] + rates[k - 1]));
        }
        Self {
            piece,
            samples,
            cumulative,
        }
    }

    fn panel_edges(&self, budget: f64) -> Vec<f64> {
        let total = *self.cumulative.last().unwrap();
        let panels = ((total / budget).ceil() as usize).max(1);
        let mut edges = Vec::with_capacity(panels + 1);
        edges.push(self.samples[0]);
        let mut k = 1;
        for j in 1..panels {
            let target = total * j as f64 / panels as f64;
            while self.cumulative[k] < target {
                k += 1;
            }
            let (c0, c1) = (self.cumulative[k - 1], self.cumulative[k]);
            let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
            edges.push(self.samples[k - 1] + frac * (self.samples[k] - self.samples[k - 1]));
        }
        edges.push(*self.samples.last().unwrap());
        edges
    }

    fn integrate(&self, integrand: &Integrand, budget: f64, acc: &mut ComplexNeumaierSum) -> usize {
        let rule = GaussLegendre::sixteen();
        let edges = self.panel_edges(budget);
        for w in edges.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let (z, dz) = self.piece.point(mid + half * x);
                *acc += integrand.value(z) * dz * (wt * half);
            }
        }
        (edges.len() - 1) * rule.nodes.len()
    }
}

fn pieces(spec: &ContourSpec) -> Vec<Piece> {
    let phi = spec.ray_angle;
    let (r, rho) = (spec.loop_radius, spec.outer_radius);
    let (ln_rho, ln_len) = (rho.ln(), spec.ray_length.ln());
    let mut out = vec![Piece::Ray {
        angle: -phi,
        from: ln_len,
        to: ln_rho,
    }];
    if r < rho {
        out.push(Piece::Arc {
            radius: rho,
            from: -phi,
            to: -FRAC_PI_2,
        });
        out.push(Piece::Axis {
            sign: -1.0,
            from: 1.0 / rho,
            to: 1.0 / r,
        });
        out.push(Piece::Arc {
            radius: r,
            from: -FRAC_PI_2,
            to: FRAC_PI_2,
        });
        out.push(Piece::Axis {
            sign: 1.0,
            from: 1.0 / r,
            to: 1.0 / rho,
        });
        out.push(Piece::Arc {
            radius: rho,
            from: FRAC_PI_2,
            to: phi,
        });
    } else {
        out.push(Piece::Arc {
            radius: rho,
            from: -phi,
            to: phi,
        });
    }
    out.push(Piece::Ray {
        angle: phi,
        from: ln_rho,
        to: ln_len,
    });
    out
}

/// Contour geometry adapted to `(params, t)`.
///
/// The loop radius is `1/R` with `R` the smallest value for which
/// `τ/R + ln(q + p e^{-R}) ≤ slack/N`; for small τ this gives
/// `R ≈ √(τ(1+α))`, i.e. the loop passes through the collapse saddle
/// `z₀ = −1/W`.
pub fn auto_contour(params: &ModelParams, t: ScaledTime) -> Result<ContourSpec> {
    if t.t.is_nan() || t.t <= 0.0 {
        return Err(Error::InvalidTime(t.t));
    }
    let (n, tau) = (params.n_f64(), t.tau);
    let (p, q) = (params.p(), params.q());
    let outer = 1.0 / tau.sqrt();

    let excess = |big_r: f64| tau / big_r + (q + p * (-big_r).exp()).ln() - CROSSING_SLACK / n;
    // excess is strictly decreasing in R; bisect in log space
    let (mut lo, mut hi) = (1e-12_f64, 1e12_f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo < 1.0 + 1e-12 {
            break;
        }
    }
    let loop_radius = (1.0 / hi).clamp(RADIUS_CLAMP.0, RADIUS_CLAMP.1).min(outer);

    let ray_angle = ContourSpec::DEFAULT_RAY_ANGLE;
    let ray_length = outer + RAY_DECAY / (n * tau * ray_angle.cos().abs());
    Ok(ContourSpec {
        loop_radius,
        outer_radius: outer,
        ray_angle,
        ray_length,
        panel_budget: ContourSpec::DEFAULT_PANEL_BUDGET,
        max_doublings: ContourSpec::DEFAULT_MAX_DOUBLINGS,
        tolerance: ContourSpec::DEFAULT_TOLERANCE,
    })
}

/// Evaluates the contour integral, doubling the panel density until two
/// successive levels agree to `spec.tolerance`.
pub fn inversion_contour(
    params: &ModelParams,
    t: ScaledTime,
    spec: &ContourSpec,
) -> Result<ContourEvaluation> {
    if t.t == 0.0 {
        return Ok(ContourEvaluation {
            value: InversionValue(-1.0),
            imag_residue: 0.0,
            nodes: 0,
            doublings: 0,
            last_change: 0.0,
        });
    }
    spec.validate()?;
    let integrand = Integrand::new(params, t.tau);
    let placed: Vec<PlacedPiece> = pieces(spec)
        .into_iter()
        .map(|p| PlacedPiece::new(p, &integrand))
        .collect();
    // i t / (2√π) · J
    let scale = t.t / (2.0 * PI.sqrt());
    let level = |k: u32| {
        let budget = spec.panel_budget / f64::from(1u32 << k);
        let mut acc = ComplexNeumaierSum::default();
        let nodes: usize = placed
            .iter()
            .map(|pp| pp.integrate(&integrand, budget, &mut acc))
            .sum();
        let j = acc.value();
        (Complex64::new(-scale * j.im, scale * j.re), nodes)
    };

    let (mut prev, _) = level(0);
    let mut change = f64::INFINITY;
    for k in 1..=spec.max_doublings {
        let (cur, nodes) = level(k);
        change = (cur - prev).norm();
        if change < spec.tolerance {
            if cur.im.abs() >= IMAG_RESIDUE_LIMIT {
                return Err(Error::ImaginaryResidue {
                    t: t.t,
                    residue: cur.im.abs(),
                });
            }
            return Ok(ContourEvaluation {
                value: InversionValue(cur.re),
                imag_residue: cur.im.abs(),
                nodes,
                doublings: k,
                last_change: change,
            });
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged { t: t.t, change })
}

/// [`inversion_contour`] with [`auto_contour`] geometry.
pub fn inversion_contour_auto(params: &ModelParams, t: ScaledTime) -> Result<ContourEvaluation> {
    if t.t == 0.0 {
        return inversion_contour(params, t, &placeholder_spec());
    }
    let spec = auto_contour(params, t)?;
    inversion_contour(params, t, &spec)
}

/// Same as [`inversion_contour_auto`] with a caller-chosen tolerance.
pub fn inversion_contour_auto_tol(
    params: &ModelParams,
    t: ScaledTime,
    tolerance: f64,
) -> Result<ContourEvaluation> {
    if t.t == 0.0 {
        return inversion_contour_auto(params, t);
    }
    let spec = auto_contour(params, t)?.with_tolerance(tolerance);
    inversion_contour(params, t, &spec)
}

pub fn inversion_contour_series(
    params: &ModelParams,
    grid: &TimeGrid,
    exec: Execution,
) -> Result<Vec<ContourEvaluation>> {
    sweep::try_map(grid.samples(), exec, |s| inversion_contour_auto(params, *s))
}

fn placeholder_spec() -> ContourSpec {
    ContourSpec {
        loop_radius: 1.0,
        outer_radius: 1.0,
        ray_angle: ContourSpec::DEFAULT_RAY_ANGLE,
        ray_length: 2.0,
        panel_budget: ContourSpec::DEFAULT_PANEL_BUDGET,
        max_doublings: ContourSpec::DEFAULT_MAX_DOUBLINGS,
        tolerance: ContourSpec::DEFAULT_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::make_params;
    use crate::exact::ExactSum;

    fn st(params: &ModelParams, t: f64) -> ScaledTime {
        ScaledTime::new(t, params).unwrap()
    }

    #[test]
    fn phi_big_pure_state() {
        let m = make_params(50, 1.0).unwrap();
        let v = phi_big(Complex64::new(1.0, 0.0), 1.0, &m).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn phi_big_schwarz_reflection() {
        let m = make_params(50, 0.3).unwrap();
        for z in [
            Complex64::new(0.2, 0.7),
            Complex64::new(-0.4, 0.05),
            Complex64::new(-3.0, 1.5),
            Complex64::new(0.01, 0.02),
        ] {
            let a = phi_big(z, 2.5, &m).unwrap();
            let b = phi_big(z.conj(), 2.5, &m).unwrap();
            assert!((a - b.conj()).norm() < 1e-13, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn phi_big_at_i_matches_multiprecision() {
        // mpmath, 50 digits: τ·i + log(0.5 e^{i} + 0.5), τ = 4π²·0.5
        let m = make_params(50, 0.5).unwrap();
        let tau = 4.0 * PI * PI * 0.5;
        let v = phi_big(Complex64::i(), tau, &m).unwrap();
        let want = Complex64::new(-0.130_584_240_443_722_72, 20.239_208_802_178_717);
        assert!((v - want).norm() < 1e-13, "{v}");
    }

    #[test]
    fn phi_big_large_growth_keeps_principal_branch() {
        // |e^{-1/z}| overflows here; compare against the factored form
        let m = make_params(50, 0.5).unwrap();
        let z = Complex64::new(-1e-3, 1e-4);
        let v = phi_big(z, 0.0, &m).unwrap();
        assert!(v.re.is_finite() && v.im.abs() <= PI);
        assert!((v.re - (-z.inv().re + 0.5f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn phi_big_rejects_cut() {
        let m = make_params(50, 0.5).unwrap();
        assert!(matches!(
            phi_big(Complex64::new(-1.0, 0.0), 1.0, &m),
            Err(Error::BranchCutHit(_))
        ));
        assert!(matches!(
            phi_big(Complex64::new(0.0, 0.0), 1.0, &m),
            Err(Error::BranchCutHit(_))
        ));
    }

    #[test]
    fn zero_time_is_special_cased() {
        let m = make_params(50, 0.37).unwrap();
        let r = inversion_contour_auto(&m, st(&m, 0.0)).unwrap();
        assert_eq!(r.value.value(), -1.0);
        assert!(auto_contour(&m, st(&m, 0.0)).is_err());
    }

    #[test]
    fn agrees_with_exact_sum_at_collapse_time() {
        let m = make_params(50, 0.5).unwrap();
        let r = inversion_contour_auto(&m, st(&m, 2.0)).unwrap();
        let e = ExactSum::new(&m).inversion(2.0).value();
        assert!((r.value.value() - e).abs() < 1e-6);
        assert!(r.imag_residue < IMAG_RESIDUE_LIMIT);
    }

    #[test]
    fn agrees_with_exact_sum_at_revival() {
        let m = make_params(50, 0.5).unwrap();
        let t = m.revival_period();
        let r = inversion_contour_auto(&m, st(&m, t)).unwrap();
        let e = ExactSum::new(&m).inversion(t).value();
        assert!((r.value.value() - e).abs() < 1e-6, "{} vs {e}", r.value.value());
    }

    #[test]
    fn fock_state() {
        let m = make_params(50, 1.0).unwrap();
        let r = inversion_contour_auto(&m, st(&m, 1.0)).unwrap();
        assert!((r.value.value() + (2.0 * 50f64.sqrt()).cos()).abs() < 1e-6);
        // α = 0: keyhole degenerates to a single arc
        let spec = auto_contour(&m, st(&m, 1.0)).unwrap();
        spec.validate().unwrap();
    }

    #[test]
    fn vacuum_field_stays_inverted() {
        let m = make_params(20, 0.0).unwrap();
        for t in [0.5, 3.0, 11.0] {
            let r = inversion_contour_auto(&m, st(&m, t)).unwrap();
            assert!((r.value.value() + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let m = make_params(50, 0.5).unwrap();
        let spec = auto_contour(&m, st(&m, 2.0)).unwrap();
        for bad in [
            spec.with_ray_angle(PI),
            spec.with_ray_angle(0.4 * PI),
            ContourSpec {
                loop_radius: 0.0,
                ..spec
            },
            ContourSpec {
                ray_length: spec.outer_radius,
                ..spec
            },
        ] {
            assert!(matches!(
                inversion_contour(&m, st(&m, 2.0), &bad),
                Err(Error::InvalidContour(_))
            ));
        }
    }

    #[test]
    fn reports_non_convergence() {
        let m = make_params(50, 0.5).unwrap();
        let mut spec = auto_contour(&m, st(&m, 30.0)).unwrap();
        spec.max_doublings = 1;
        spec.panel_budget = 400.0;
        assert!(matches!(
            inversion_contour(&m, st(&m, 30.0), &spec),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }

    #[test]
    fn small_t_loop_tracks_collapse_saddle() {
        let m = make_params(50, 0.5).unwrap();
        let t = st(&m, 0.5);
        let spec = auto_contour(&m, t).unwrap();
        let saddle_radius = 1.0 / (t.tau * (1.0 + 1.0)).sqrt();
        // the crossing slack can only widen the loop, and never past the rays
        assert!(spec.loop_radius >= saddle_radius);
        assert!(spec.loop_radius <= spec.outer_radius);
        assert!(spec.outer_radius < 1.5 * saddle_radius);
    }
}
