//! The model kernel σ(t) = 2cos(ω ln t)/t^γ on [1, ∞). Its transform
//! ∫₁^∞ σ(t) t^{-z} dt = 2s/(s² + ω²), s = z + γ − 1, is rational with poles
//! at 1 − γ ± iω, so Taylor expansions of it have exactly known radii.

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use crate::quadrature::{sigma_integral, QuadratureResult, TailModel};
use crate::theta::TaylorExpansion;
use num_complex::Complex64;
use serde::Serialize;

pub const DEFAULT_FREQUENCY: f64 = 12.0;
/// Distance from a pole below which the closed form refuses to evaluate.
pub const POLE_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleSpec {
    pub gamma: f64,
    pub frequency: f64,
}

impl CounterexampleSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        Self::with_frequency(gamma, DEFAULT_FREQUENCY)
    }

    pub fn with_frequency(gamma: f64, frequency: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma < 0.25) {
            return Err(Error::Config(format!("γ must be finite and below 1/4, got {gamma}")));
        }
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::Config(format!("frequency must be positive, got {frequency}")));
        }
        Ok(CounterexampleSpec { gamma, frequency })
    }

    /// 1 − γ + iω and its conjugate.
    pub fn pole_pair(&self) -> [Complex64; 2] {
        let p = Complex64::new(1.0 - self.gamma, self.frequency);
        [p, p.conj()]
    }

    pub fn sigma(&self, t: f64) -> f64 {
        2.0 * (self.frequency * t.ln()).cos() * t.powf(-self.gamma)
    }
}

pub fn ce_phi_closed(z: Complex64, spec: &CounterexampleSpec) -> Result<Complex64> {
    for p in spec.pole_pair() {
        if (z - p).norm() < POLE_GUARD {
            return Err(Error::Pole(format!("z = {z} is within {POLE_GUARD:e} of the pole {p}")));
        }
    }
    let s = z + (spec.gamma - 1.0);
    Ok(2.0 * s / (spec.frequency * spec.frequency + s * s))
}

/// ∫₁^∞ σ(t) t^{-z} dt by quadrature in τ = ln t.
///
/// The panels run over [0, ln T] and then on until the envelope 2e^{-Re s·τ}/Re s
/// drops below `cfg.abs_tol / 100`; what remains is reported as the tail.
pub fn ce_phi_numeric(z: Complex64, spec: &CounterexampleSpec, cfg: &PrecisionConfig, t: f64) -> Result<QuadratureResult> {
    let s = z + (spec.gamma - 1.0);
    if !(s.re > 0.0) {
        return Err(Error::Divergence(format!("the transform diverges for Re z ≤ 1 − γ = {}", 1.0 - spec.gamma)));
    }
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::Domain(format!("T must be finite and ≥ 1, got {t}")));
    }
    let tol = cfg.abs_tol / 100.0;
    let tau_t = t.ln();
    let tau_end = tau_t.max((2.0 / (s.re * tol)).ln() / s.re);
    let (value, err) = sigma_integral(s, spec.frequency, 0, 0.0, tau_end);
    let tail = 2.0 * (-s.re * tau_end).exp() / s.re;
    let mut r = QuadratureResult::finite(value, err, 1.0, tau_end.exp()).with_tail(TailModel::Geometric, tail);
    if tau_end > tau_t {
        r.notes.push(format!("integrated past ln T = {tau_t:.3} to τ = {tau_end:.3} to meet the tail tolerance"));
    }
    Ok(r)
}

/// Distance from `a` to the nearer pole: the radius of the Taylor series at `a`.
pub fn ce_expansion_ground_truth(a: Complex64, spec: &CounterexampleSpec) -> f64 {
    let [p, q] = spec.pole_pair();
    (a - p).norm().min((a - q).norm())
}

/// c_n = (−1)ⁿ[(a − p)^{-n-1} + (a − p̄)^{-n-1}] for n = 0..=order.
pub fn exact_taylor_coefficients(a: Complex64, spec: &CounterexampleSpec, order: u32) -> Result<Vec<Complex64>> {
    ce_phi_closed(a, spec)?;
    let [p, q] = spec.pole_pair();
    let (u, v) = (-1.0 / (a - p), -1.0 / (a - q));
    let (mut pu, mut pv) = (-u, -v);
    let mut out = Vec::with_capacity(order as usize + 1);
    for _ in 0..=order {
        out.push(pu + pv);
        pu *= u;
        pv *= v;
    }
    Ok(out)
}

/// Taylor expansion of the closed form about `a`, for calibrating radius estimates.
pub fn ce_expansion(a: Complex64, spec: &CounterexampleSpec, order: u32) -> Result<TaylorExpansion> {
    let c = exact_taylor_coefficients(a, spec, order)?;
    let bounds = c.iter().enumerate().map(|(n, c)| 4.0 * (n as f64 + 2.0) * f64::EPSILON * c.norm()).collect();
    TaylorExpansion::from_coefficients(a, c, bounds)
}
