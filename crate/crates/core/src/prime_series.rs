//! Prime sums P(z), Σ p^{-z} ln p, the prime-power correction f(z), and
//! residual checks of the identities linking them to ζ and θ.

use crate::error::{Error, Result};
use crate::exec;
use crate::precision::PrecisionConfig;
use crate::primes::PrimeTable;
use crate::quadrature::{self, exp_integral_e1, tail_bound, QuadratureResult, TailModel};
use crate::theta::{phi_diff, theta_orders};
use crate::zeta::{log_deriv_decomposition, zeta};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::LN_2;

const CHUNK: usize = 1 << 14;
const FD_STEP: f64 = 1e-5;
/// Below this |z − 1| the entire combination is summed from its Taylor series.
pub const REMOVABLE_SERIES_RADIUS: f64 = 1e-3;

/// A truncated prime sum with its analytic tail correction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSum {
    pub z: Complex64,
    /// Partial sum plus correction.
    pub value: Complex64,
    pub partial_sum: Complex64,
    /// Smooth part of the sum over p > X, added to `partial_sum`.
    pub correction: Complex64,
    pub prime_limit: u64,
    pub numerical_error: f64,
    /// Bound on |sum − value| from the unconditional growth model of π − Li.
    pub tail_bound: f64,
    /// The same quantity under |π − Li| ≤ √t ln t.
    pub tail_estimate: f64,
    pub error_bound: f64,
}

fn check_prime_sum(z: Complex64, table: &PrimeTable, min_re: f64) -> Result<f64> {
    if !(z.re > min_re) || !z.im.is_finite() {
        return Err(Error::Domain(format!("this prime sum needs Re z > {min_re}, got {z}")));
    }
    if table.limit() < 100 {
        return Err(Error::OutOfRange(format!("prime table limit {} is below 100", table.limit())));
    }
    Ok(table.limit() as f64)
}

fn sums(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> (Complex64, Complex64, f64, f64) {
    let ps = quadrature::log_power_sums::<f64>(table.primes(), z, 1, cfg.exec);
    let u = f64::EPSILON / 2.0;
    (ps.sums[0].to_c64(), ps.sums[1].to_c64(), u * ps.factor * ps.abs[0], u * (ps.factor + 2.0) * ps.abs[1])
}

/// P(z) = Σ_p p^{-z}, with the primes beyond the table replaced by E₁((z−1) ln X).
pub fn prime_zeta(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<PrimeSum> {
    let x = check_prime_sum(z, table, 1.0)?;
    let (a0, _, e0, _) = sums(z, table, cfg);
    let l = x.ln();
    let correction = exp_integral_e1((z - 1.0) * l, cfg)?;
    // Σ_{p>X} p^{-z} − E₁ = −φ(X) X^{-z} + z ∫_X^∞ φ t^{-z-1} dt
    let boundary = phi_diff(x, table, cfg)?.abs() * (-z.re * l).exp();
    let tail_a = boundary + z.norm() * tail_bound(TailModel::Unconditional, z, 0, x)?;
    let tail_b = boundary + z.norm() * tail_bound(TailModel::SquareRoot, z, 0, x)?;
    let numerical_error = e0 + 4.0 * f64::EPSILON * correction.norm();
    Ok(PrimeSum {
        z,
        value: a0 + correction,
        partial_sum: a0,
        correction,
        prime_limit: table.limit(),
        numerical_error,
        tail_bound: tail_a,
        tail_estimate: tail_b,
        error_bound: numerical_error + tail_a,
    })
}

/// Σ_p p^{-z} ln p, with the tail beyond the table replaced by X^{1−z}/(z−1).
pub fn prime_log_sum(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<PrimeSum> {
    let x = check_prime_sum(z, table, 1.0)?;
    let (_, a1, _, e1) = sums(z, table, cfg);
    let l = x.ln();
    let correction = (-(z - 1.0) * l).exp() / (z - 1.0);
    let boundary = phi_diff(x, table, cfg)?.abs() * l * (-z.re * l).exp();
    let tail = |m| -> Result<f64> { Ok(boundary + z.norm() * tail_bound(m, z, 1, x)? + tail_bound(m, z, 0, x)?) };
    let tail_a = tail(TailModel::Unconditional)?;
    let tail_b = tail(TailModel::SquareRoot)?;
    let numerical_error = e1 + 4.0 * f64::EPSILON * correction.norm();
    Ok(PrimeSum {
        z,
        value: a1 + correction,
        partial_sum: a1,
        correction,
        prime_limit: table.limit(),
        numerical_error,
        tail_bound: tail_a,
        tail_estimate: tail_b,
        error_bound: numerical_error + tail_a,
    })
}

/// −ln(1 − w) − w = Σ_{k≥2} wᵏ/k.
fn log_excess(w: Complex64) -> Complex64 {
    if w.norm() < 0.1 {
        let mut term = w * w;
        let mut acc = term / 2.0;
        let mut k = 2.0;
        loop {
            term *= w;
            k += 1.0;
            let add = term / k;
            acc += add;
            if add.norm() <= 1e-18 * acc.norm() {
                return acc;
            }
        }
    }
    -(Complex64::new(1.0, 0.0) - w).ln() - w
}

/// f(z) = Σ_p Σ_{k≥2} p^{-kz}/k, convergent on Re z > 1/2.
pub fn f_correction(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<PrimeSum> {
    let x = check_prime_sum(z, table, 0.5)?;
    let parts = exec::map_chunks(cfg.exec, table.primes(), CHUNK, |chunk| {
        let mut s = Complex64::new(0.0, 0.0);
        let mut a = 0.0;
        for &p in chunk {
            let v = log_excess((-z * (p as f64).ln()).exp());
            s += v;
            a += v.norm();
        }
        (s, a)
    });
    let nchunks = parts.len();
    let (value, abs) = parts.into_iter().fold((Complex64::new(0.0, 0.0), 0.0), |(s, a), (cs, ca)| (s + cs, a + ca));
    let numerical_error = f64::EPSILON * (CHUNK.min(table.primes().len()) + nchunks + 16) as f64 * abs;
    // |−ln(1−w) − w| ≤ |w|²/(2(1−|w|)), summed over all integers n > X
    let s = 2.0 * z.re - 1.0;
    let tail = x.powf(-s) / (s * 2.0 * (1.0 - x.powf(-z.re)));
    Ok(PrimeSum {
        z,
        value,
        partial_sum: value,
        correction: Complex64::new(0.0, 0.0),
        prime_limit: table.limit(),
        numerical_error,
        tail_bound: tail,
        tail_estimate: tail,
        error_bound: numerical_error + tail,
    })
}

/// f′(z) by central differences of [`f_correction`].
pub fn f_derivative(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<Complex64> {
    let h = FD_STEP;
    let plus = f_correction(z + h, table, cfg)?.value;
    let minus = f_correction(z - h, table, cfg)?.value;
    Ok((plus - minus) / (2.0 * h))
}

// ---------------------------------------------------------------------------
// Φ(z) = θ(z) + zθ′(z)

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiCap {
    /// From the Stieltjes closed form in the prime log-sum.
    pub direct: QuadratureResult,
    /// θ_T(z) + zθ′_T(z) from the weighted integrals.
    pub via_theta: QuadratureResult,
    pub route_residual: f64,
}

/// Φ(z) truncated at the table limit, computed both ways.
pub fn phi_cap_routes(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<PhiCap> {
    if !(z.re > 1.0) {
        return Err(Error::Domain(format!("Φ is integrated directly only for Re z > 1, got {z}")));
    }
    let t = table.limit() as f64;
    if t < 100.0 {
        return Err(Error::OutOfRange(format!("prime table limit {t} is below 100")));
    }
    let l = t.ln();
    let (_, a1, _, e1) = sums(z, table, cfg);
    let tz = (-z * l).exp();
    let phi_t = phi_diff(t, table, cfg)?;
    // Φ_T = φ(T) T^{-z} ln T − Σ_{p≤T} p^{-z} ln p + (2^{1−z} − T^{1−z})/(z − 1)
    let smooth = ((-(z - 1.0) * LN_2).exp() - tz * t) / (z - 1.0);
    let direct_value = tz * (phi_t * l) - a1 + smooth;
    let direct_err = e1 + 8.0 * f64::EPSILON * (smooth.norm() + tz.norm() * (phi_t.abs() * l + t));

    let orders = theta_orders(z, 1, table, cfg, t)?;
    let via_value = orders[0].value + z * orders[1].value;
    let via_err = orders[0].numerical_error + z.norm() * orders[1].numerical_error + 4.0 * f64::EPSILON * via_value.norm();

    let tail_a = orders[0].tail_bound + z.norm() * orders[1].tail_bound;
    let tail_b = match (orders[0].alt_tail, orders[1].alt_tail) {
        (Some((m, b0)), Some((_, b1))) => Some((m, b0 + z.norm() * b1)),
        _ => None,
    };
    let finish = |value, err| {
        let mut r = QuadratureResult::finite(value, err, 2.0, t).with_tail(TailModel::Unconditional, tail_a);
        r.alt_tail = tail_b;
        r
    };
    let mut direct = finish(direct_value, direct_err);
    let via_theta = finish(via_value, via_err);
    let route_residual = (direct_value - via_value).norm();
    direct.notes.push(format!("route residual against θ + zθ′: {route_residual:.3e}"));
    Ok(PhiCap { direct, via_theta, route_residual })
}

/// Φ(z) = θ(z) + zθ′(z) from the direct route, cross-checked against θ.
pub fn phi_cap(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<QuadratureResult> {
    Ok(phi_cap_routes(z, table, cfg)?.direct)
}

// ---------------------------------------------------------------------------
// Identity checks

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub z: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// Combined truncation and rounding bound on the two sides.
    pub tail_bound: f64,
    pub prime_limit: u64,
    pub integral_t: f64,
    pub notes: Vec<String>,
    pub extras: BTreeMap<String, f64>,
}

impl IdentityReport {
    fn new(id: &str, z: Complex64, lhs: Complex64, rhs: Complex64, table: &PrimeTable, t: f64) -> Self {
        IdentityReport {
            identity_id: id.into(),
            z,
            lhs,
            rhs,
            residual: (lhs - rhs).norm(),
            tail_bound: 0.0,
            prime_limit: table.limit(),
            integral_t: t,
            notes: Vec::new(),
            extras: BTreeMap::new(),
        }
    }
}

fn check_not_pole(z: Complex64) -> Result<()> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("z = 1 is excluded".into()));
    }
    Ok(())
}

/// exp P(z) against ζ(z) exp(−f(z)).
pub fn check_eq5(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<IdentityReport> {
    check_not_pole(z)?;
    let p = prime_zeta(z, table, cfg)?;
    let f = f_correction(z, table, cfg)?;
    let zv = zeta(z, cfg)?;
    let lhs = p.value.exp();
    let rhs = zv.value * (-f.value).exp();
    let mut r = IdentityReport::new("eq5", z, lhs, rhs, table, 0.0);
    r.tail_bound = lhs.norm() * (p.error_bound.exp() - 1.0) + rhs.norm() * ((f.error_bound.exp() - 1.0) + zv.error_bound / zv.value.norm());
    r.extras.insert("prime_zeta_tail_estimate".into(), p.tail_estimate);
    r.extras.insert("f_tail_bound".into(), f.tail_bound);
    if p.tail_bound > 1e-6 {
        r.notes.push(format!("prime-zeta tail bound {:.3e} is large at this limit", p.tail_bound));
    }
    Ok(r)
}

/// Σ p^{-z} ln p against 2^{1−z}/(z−1) + Φ, with Φ in the orientation of the integrand
/// [z t^{-z-1} ln t − t^{-z-1}] φ(t), i.e. −(θ + zθ′).
pub fn check_eq6(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<IdentityReport> {
    check_not_pole(z)?;
    let lhs = prime_log_sum(z, table, cfg)?;
    let phi = phi_cap_routes(z, table, cfg)?;
    let lead = (-(z - 1.0) * LN_2).exp() / (z - 1.0);
    let rhs = lead - phi.via_theta.value;
    let t = table.limit() as f64;
    let mut r = IdentityReport::new("eq6", z, lhs.value, rhs, table, t);
    r.tail_bound = lhs.error_bound + phi.via_theta.error_bound;
    // the printed form carries an extra −φ(2) ln 2 / 2^z with φ(2) = 1
    let printed = rhs - LN_2 * (-z * LN_2).exp();
    r.extras.insert("printed_variant_residual".into(), (lhs.value - printed).norm());
    r.extras.insert("opposite_orientation_residual".into(), (lhs.value - (lead + phi.via_theta.value)).norm());
    r.extras.insert("phi_route_residual".into(), phi.route_residual);
    r.notes.push("boundary term at t = 2 vanishes since φ(2⁻) = 0".into());
    Ok(r)
}

/// (1 − e^{−(z−1) ln 2})/(z − 1), entire; equals ln 2 at z = 1.
pub fn removable_combination(z: Complex64) -> Complex64 {
    let w = (z - 1.0) * LN_2;
    if (z - 1.0).norm() < REMOVABLE_SERIES_RADIUS {
        // (1 − e^{−w})/w = Σ (−w)ᵏ/(k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 1..12 {
            term *= -w / (k as f64 + 1.0);
            acc += term;
        }
        return acc * LN_2;
    }
    (1.0 - (-w).exp()) / (z - 1.0)
}

/// Grid used when no points are given for the holomorphy check.
pub fn default_eq7_grid() -> Vec<Complex64> {
    vec![Complex64::new(2.0, 0.0), Complex64::new(1.5, 2.0), Complex64::new(2.5, -1.0)]
}

/// Φ against 1/(z−1) − 2^{1−z}/(z−1) + f′(z) − F(z), with F = ψ′/(1 + ψ).
pub fn check_eq7_holomorphy(z_grid: &[Complex64], table: &PrimeTable, cfg: &PrecisionConfig) -> Result<Vec<IdentityReport>> {
    exec::map(cfg.exec, z_grid, |&z| eq7_point(z, table, cfg)).into_iter().collect()
}

fn eq7_point(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<IdentityReport> {
    check_not_pole(z)?;
    let phi = phi_cap_routes(z, table, cfg)?;
    let fd = f_derivative(z, table, cfg)?;
    let dec = log_deriv_decomposition(z, cfg)?;
    let comb = removable_combination(z);
    let lhs = -phi.via_theta.value;
    let rhs = comb + fd - dec.f_value;
    let t = table.limit() as f64;
    let mut r = IdentityReport::new("eq7_holomorphy", z, lhs, rhs, table, t);
    r.tail_bound = phi.via_theta.error_bound + dec.error_bound;
    let printed = rhs + LN_2 * (-z * LN_2).exp();
    r.extras.insert("printed_variant_residual".into(), (lhs - printed).norm());
    r.extras.insert("removable_at_1_abs_error".into(), (removable_combination(Complex64::new(1.0, 0.0)) - LN_2).norm());
    r.extras.insert("log_derivative_residual".into(), dec.identity_residual());
    r.notes.push("f′ by central differences, step 1e-5".into());
    Ok(r)
}
