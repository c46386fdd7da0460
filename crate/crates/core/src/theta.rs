//! θ(z) = ∫_2^∞ (π(t) − Li(t)) t^{-z-1} dt, its derivatives, Taylor
//! expansions at a = 1 + ε + ib and radius-of-convergence diagnostics.

use crate::error::{Error, Result};
use crate::exec::{self, ExecPolicy};
use crate::precision::{Dd, PrecisionConfig, Real};
use crate::primes::PrimeTable;
use crate::quadrature::{self, li_offset, tail_bound, QuadratureResult, TailModel, N_MAX_DEFAULT};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_LOWER_LIMIT: f64 = 2.0;
pub const EPSILON_DEFAULT: f64 = 0.1;
pub const SCAN_ORDER_DEFAULT: u32 = 24;
/// Fewest coefficients above the noise floor accepted by the radius estimator.
pub const MIN_USABLE_COEFFICIENTS: usize = 8;

/// φ(t) = π(t) − Li(t).
pub fn phi_diff(t: f64, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<f64> {
    let pi = table.prime_count(t)? as f64;
    Ok(pi - li_offset(t, cfg)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaOptions {
    /// Lower end of the Li part; π vanishes below 2, so only Li sees it.
    pub lower_limit: f64,
    /// Model used for the tail in `error_bound`; the other model is reported in `alt_tail`.
    pub tail_model: TailModel,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions { lower_limit: DEFAULT_LOWER_LIMIT, tail_model: TailModel::Unconditional }
    }
}

/// θ⁽ᵏ⁾(a) for k = 0..=n_max, truncated at T and carrying tail bounds.
pub fn theta_orders(a: Complex64, n_max: u32, table: &PrimeTable, cfg: &PrecisionConfig, t: f64) -> Result<Vec<QuadratureResult>> {
    theta_orders_with(a, n_max, table, cfg, t, &ThetaOptions::default())
}

pub fn theta_orders_with(
    a: Complex64,
    n_max: u32,
    table: &PrimeTable,
    cfg: &PrecisionConfig,
    t: f64,
    opts: &ThetaOptions,
) -> Result<Vec<QuadratureResult>> {
    if !(a.re > 1.0) || !a.im.is_finite() {
        return Err(Error::Domain(format!("θ⁽ⁿ⁾(a) is computed directly only for Re a > 1, got {a}")));
    }
    if n_max > N_MAX_DEFAULT {
        return Err(Error::Config(format!("order {n_max} exceeds N_max = {N_MAX_DEFAULT}")));
    }
    if !matches!(opts.tail_model, TailModel::Unconditional | TailModel::SquareRoot) {
        return Err(Error::Config(format!("'{}' is not a growth model for π − Li", opts.tail_model)));
    }
    let (values, errors) = if cfg.extended() {
        raw_orders::<Dd>(a, n_max, table, t, opts.lower_limit, cfg.exec)?
    } else {
        raw_orders::<f64>(a, n_max, table, t, opts.lower_limit, cfg.exec)?
    };
    let other = if opts.tail_model == TailModel::Unconditional { TailModel::SquareRoot } else { TailModel::Unconditional };
    let mut out = Vec::with_capacity(values.len());
    for (k, (v, e)) in values.into_iter().zip(errors).enumerate() {
        let mut r = QuadratureResult::finite(v, e, opts.lower_limit, t.max(opts.lower_limit));
        if t >= 100.0 {
            let main = tail_bound(opts.tail_model, a, k as u32, t)?;
            r = r.with_tail(opts.tail_model, main);
            r.alt_tail = Some((other, tail_bound(other, a, k as u32, t)?));
        } else {
            r = r.with_tail(opts.tail_model, f64::INFINITY);
            r.notes.push("no tail bound below T = 100".into());
        }
        if r.tail_bound > 0.1 * v.norm() {
            r.notes.push(format!("tail bound {:.3e} exceeds 10% of |value| at order {k}", r.tail_bound));
        }
        out.push(r);
    }
    Ok(out)
}

/// Signed derivatives (−1)ᵏ ∫ φ lnᵏt t^{-a-1}, with the π and Li parts
/// subtracted in the working type before rounding to f64.
fn raw_orders<R: Real>(a: Complex64, n_max: u32, table: &PrimeTable, t: f64, lower: f64, policy: ExecPolicy) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let step = quadrature::step_orders_in::<R>(table, a, n_max, t, policy)?;
    let (li, li_err) = quadrature::li_orders_in::<R>(a, n_max, t, lower, policy)?;
    let mut values = Vec::with_capacity(li.len());
    let mut errors = Vec::with_capacity(li.len());
    for k in 0..li.len() {
        let d = step.values[k] - li[k];
        let v = if k % 2 == 0 { d } else { -d }.to_c64();
        values.push(v);
        errors.push(step.errors[k] + li_err[k] + f64::EPSILON * v.norm());
    }
    Ok((values, errors))
}

/// θ(z) truncated at T.
pub fn theta(z: Complex64, table: &PrimeTable, cfg: &PrecisionConfig, t: f64) -> Result<QuadratureResult> {
    Ok(theta_orders(z, 0, table, cfg, t)?.remove(0))
}

/// θ⁽ⁿ⁾(a) truncated at T.
pub fn theta_derivative(a: Complex64, n: u32, table: &PrimeTable, cfg: &PrecisionConfig, t: f64) -> Result<QuadratureResult> {
    Ok(theta_orders(a, n, table, cfg, t)?.pop().expect("at least one order"))
}

// ---------------------------------------------------------------------------
// Taylor expansions

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorExpansion {
    pub center: Complex64,
    /// c_n = θ⁽ⁿ⁾(a)/n!
    pub coefficients: Vec<Complex64>,
    /// Rounding/discretisation bounds on each c_n (tails excluded).
    pub coeff_error_bounds: Vec<f64>,
    /// Bounds on the neglected part beyond T for each c_n.
    pub tail_bounds: Vec<f64>,
    pub order: u32,
    pub truncation_t: f64,
    pub prime_limit: u64,
    /// (n+1)(c_n + a·c_{n+1}): coefficients of θ(z) + zθ′(z) about a.
    pub phi_coefficients: Vec<Complex64>,
    /// (n+1)(c_n + c_{n+1}): the combination as displayed in the expansion of Φ.
    pub displayed_coefficients: Vec<Complex64>,
}

impl TaylorExpansion {
    /// Expansion from known coefficients (used for calibration inputs).
    pub fn from_coefficients(center: Complex64, coefficients: Vec<Complex64>, coeff_error_bounds: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() != coeff_error_bounds.len() {
            return Err(Error::Config("coefficients and error bounds must be nonempty and of equal length".into()));
        }
        if coeff_error_bounds.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::Config("error bounds must be finite and nonnegative".into()));
        }
        let order = coefficients.len() as u32 - 1;
        let (phi_coefficients, displayed_coefficients) = combined(center, &coefficients);
        let n = coefficients.len();
        Ok(TaylorExpansion {
            center,
            coefficients,
            coeff_error_bounds,
            tail_bounds: vec![0.0; n],
            order,
            truncation_t: f64::INFINITY,
            prime_limit: 0,
            phi_coefficients,
            displayed_coefficients,
        })
    }

    /// Partial sum Σ c_n (z − a)ⁿ.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let w = z - self.center;
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c)
    }

    /// First order whose error bound reaches |c_n|.
    pub fn noise_floor_order(&self) -> Option<u32> {
        self.coefficients
            .iter()
            .zip(&self.coeff_error_bounds)
            .position(|(c, b)| *b >= c.norm())
            .map(|n| n as u32)
    }

    fn truncated(mut self, order: u32) -> Self {
        let n = order as usize + 1;
        self.coefficients.truncate(n);
        self.coeff_error_bounds.truncate(n);
        self.tail_bounds.truncate(n);
        self.phi_coefficients.truncate(n.min(self.phi_coefficients.len()));
        self.displayed_coefficients.truncate(n.min(self.displayed_coefficients.len()));
        self.order = order;
        self
    }
}

fn combined(a: Complex64, c: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut phi = Vec::new();
    let mut shown = Vec::new();
    for n in 0..c.len().saturating_sub(1) {
        let k = (n + 1) as f64;
        phi.push((c[n] + a * c[n + 1]) * k);
        shown.push((c[n] + c[n + 1]) * k);
    }
    (phi, shown)
}

fn expansion_unchecked(a: Complex64, order: u32, table: &PrimeTable, cfg: &PrecisionConfig, t: f64) -> Result<TaylorExpansion> {
    if order > N_MAX_DEFAULT {
        return Err(Error::Config(format!("order {order} exceeds N_max = {N_MAX_DEFAULT}")));
    }
    // one extra order feeds the combined coefficients
    let top = (order + 1).min(N_MAX_DEFAULT);
    let orders = theta_orders(a, top, table, cfg, t)?;
    let mut coefficients = Vec::with_capacity(orders.len());
    let mut coeff_error_bounds = Vec::with_capacity(orders.len());
    let mut tail_bounds = Vec::with_capacity(orders.len());
    let mut fact = 1.0;
    for (n, r) in orders.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        coefficients.push(r.value / fact);
        coeff_error_bounds.push(r.numerical_error / fact);
        tail_bounds.push(r.tail_bound / fact);
    }
    let (phi_coefficients, displayed_coefficients) = combined(a, &coefficients);
    let exp = TaylorExpansion {
        center: a,
        coefficients,
        coeff_error_bounds,
        tail_bounds,
        order: top,
        truncation_t: t,
        prime_limit: table.limit(),
        phi_coefficients,
        displayed_coefficients,
    };
    Ok(exp.truncated(order))
}

/// Taylor coefficients c_0..c_N of θ at `a`, refusing orders at the noise floor.
pub fn build_expansion(a: Complex64, order: u32, table: &PrimeTable, cfg: &PrecisionConfig, t: f64) -> Result<TaylorExpansion> {
    let exp = expansion_unchecked(a, order, table, cfg, t)?;
    if let Some(n) = exp.noise_floor_order() {
        return Err(Error::NoiseFloor {
            order: n as usize,
            magnitude: exp.coefficients[n as usize].norm(),
            bound: exp.coeff_error_bounds[n as usize],
        });
    }
    Ok(exp)
}

// ---------------------------------------------------------------------------
// Radius estimation

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMethod {
    /// min over the upper half of orders of |c_n|^{-1/n}.
    MaxTailRoot,
    /// Least-squares line through the upper convex hull of (n, ln|c_n|).
    Regression,
}

impl RadiusMethod {
    pub fn label(self) -> &'static str {
        match self {
            RadiusMethod::MaxTailRoot => "max_tail_root",
            RadiusMethod::Regression => "regression",
        }
    }
}

impl fmt::Display for RadiusMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RadiusMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_tail_root" => Ok(RadiusMethod::MaxTailRoot),
            "regression" => Ok(RadiusMethod::Regression),
            other => Err(Error::Config(format!("unknown radius method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub center: Complex64,
    /// (n, |c_n|^{-1/n}) for every usable n ≥ 1.
    pub root_test_values: Vec<(u32, f64)>,
    /// Root-test values of the combined coefficients (n+1)(c_n + a c_{n+1}).
    pub phi_root_test_values: Vec<(u32, f64)>,
    /// `None` when the data show no finite radius at this order.
    pub extrapolated_radius: Option<f64>,
    pub method: RadiusMethod,
    /// Orders entering the final estimate.
    pub orders_used: Vec<u32>,
    pub noise_floor_order: Option<u32>,
    /// RMS deviation of ln|c_n| from the fitted line (regression only).
    pub fit_rms: Option<f64>,
    pub caveats: Vec<String>,
}

impl RadiusEstimate {
    pub fn radius_label(&self) -> String {
        match self.extrapolated_radius {
            Some(r) => format!("{r}"),
            None => "unbounded-at-this-order".into(),
        }
    }
}

pub fn estimate_radius(exp: &TaylorExpansion, method: RadiusMethod) -> Result<RadiusEstimate> {
    let usable: Vec<(u32, f64)> = exp
        .coefficients
        .iter()
        .zip(&exp.coeff_error_bounds)
        .enumerate()
        .filter(|(_, (c, b))| c.norm() > **b && c.norm() > 0.0)
        .map(|(n, (c, _))| (n as u32, c.norm()))
        .collect();
    if usable.len() < MIN_USABLE_COEFFICIENTS {
        return Err(Error::InsufficientData(format!(
            "{} coefficients above the noise floor, need {MIN_USABLE_COEFFICIENTS}",
            usable.len()
        )));
    }
    let root_test_values: Vec<(u32, f64)> = usable.iter().filter(|(n, _)| *n >= 1).map(|&(n, m)| (n, m.powf(-1.0 / n as f64))).collect();
    let phi_root_test_values: Vec<(u32, f64)> = exp
        .phi_coefficients
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(n, c)| (n as u32, c.norm().powf(-1.0 / n as f64)))
        .collect();
    let half = (exp.order + 1) / 2;
    let upper: Vec<(u32, f64)> = usable.iter().copied().filter(|(n, _)| *n >= half.max(1)).collect();
    if upper.len() < 2 {
        return Err(Error::InsufficientData("fewer than two usable coefficients in the upper half of orders".into()));
    }
    let (radius, orders_used, fit_rms) = match method {
        RadiusMethod::MaxTailRoot => {
            let (n, r) = upper
                .iter()
                .map(|&(n, m)| (n, m.powf(-1.0 / n as f64)))
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            (r, vec![n], None)
        }
        RadiusMethod::Regression => {
            let pts: Vec<(f64, f64)> = upper.iter().map(|&(n, m)| (n as f64, m.ln())).collect();
            let hull = upper_hull(&pts);
            let (slope, intercept) = least_squares(&hull);
            let rms = (pts.iter().map(|(x, y)| (y - (slope * x + intercept)).powi(2)).sum::<f64>() / pts.len() as f64).sqrt();
            ((-slope).exp(), hull.iter().map(|p| p.0 as u32).collect(), Some(rms))
        }
    };
    let extrapolated_radius = if radius.is_finite() && radius < 1e300 { Some(radius) } else { None };
    let noise_floor_order = exp.noise_floor_order();
    let mut caveats = vec![format!("orders {}..={} of {} used", half.max(1), exp.order, exp.order)];
    match noise_floor_order {
        Some(n) => caveats.push(format!("noise floor reached at order {n}")),
        None => caveats.push("all coefficients above the noise floor".into()),
    }
    if exp.truncation_t.is_finite() {
        caveats.push(format!(
            "coefficients of the integral truncated at T = {:e}; the truncated function is entire, so the estimate is T-relative",
            exp.truncation_t
        ));
        let worst = exp
            .tail_bounds
            .iter()
            .zip(&exp.coefficients)
            .map(|(t, c)| t / c.norm())
            .fold(0.0f64, f64::max);
        caveats.push(format!("largest tail-bound to coefficient ratio {worst:.3e}"));
    }
    Ok(RadiusEstimate {
        center: exp.center,
        root_test_values,
        phi_root_test_values,
        extrapolated_radius,
        method,
        orders_used,
        noise_floor_order,
        fit_rms,
        caveats,
    })
}

/// Upper convex hull of points sorted by x (monotone chain).
fn upper_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

// ---------------------------------------------------------------------------
// Task 1 scan

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub b: f64,
    pub epsilon: f64,
    pub n_used: u32,
    pub radius_estimate: Option<f64>,
    pub method: RadiusMethod,
    pub noise_floor_order: Option<u32>,
    pub truncation_t: f64,
    pub prime_limit: u64,
    pub digits: u32,
    pub inside_3pi: bool,
    pub inside_4pi: bool,
    /// "ok" or the error that stopped this point.
    pub status: String,
    pub estimate: Option<RadiusEstimate>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSettings {
    pub epsilon: f64,
    pub order: u32,
    pub truncation_t: f64,
    pub method: RadiusMethod,
}

/// One radius estimate per b at a = 1 + ε + ib. Failed points are kept and flagged.
pub fn task1_scan(b_values: &[f64], settings: &ScanSettings, table: &PrimeTable, cfg: &PrecisionConfig) -> Result<Vec<ScanRow>> {
    if !(settings.epsilon > 0.0 && settings.epsilon.is_finite()) {
        return Err(Error::Config(format!("epsilon must be positive, got {}", settings.epsilon)));
    }
    if settings.order > N_MAX_DEFAULT {
        return Err(Error::Config(format!("order {} exceeds N_max = {N_MAX_DEFAULT}", settings.order)));
    }
    Ok(exec::map(cfg.exec, b_values, |&b| scan_point(b, settings, table, cfg)))
}

fn scan_point(b: f64, s: &ScanSettings, table: &PrimeTable, cfg: &PrecisionConfig) -> ScanRow {
    let a = Complex64::new(1.0 + s.epsilon, b);
    let mut row = ScanRow {
        b,
        epsilon: s.epsilon,
        n_used: 0,
        radius_estimate: None,
        method: s.method,
        noise_floor_order: None,
        truncation_t: s.truncation_t,
        prime_limit: table.limit(),
        digits: cfg.digits,
        inside_3pi: b.abs() < 3.0 * PI,
        inside_4pi: b.abs() < 4.0 * PI,
        status: "ok".into(),
        estimate: None,
    };
    let exp = match expansion_unchecked(a, s.order, table, cfg, s.truncation_t) {
        Ok(e) => e,
        Err(e) => {
            row.status = e.to_string();
            return row;
        }
    };
    row.noise_floor_order = exp.noise_floor_order();
    let used = match row.noise_floor_order {
        Some(0) => {
            row.status = "noise floor at order 0".into();
            return row;
        }
        Some(n) => n - 1,
        None => s.order,
    };
    row.n_used = used;
    match estimate_radius(&exp.truncated(used), s.method) {
        Ok(est) => {
            row.radius_estimate = est.extrapolated_radius;
            row.estimate = Some(est);
        }
        Err(e) => row.status = e.to_string(),
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::generate_primes;

    #[test]
    fn phi_diff_values() {
        let table = generate_primes(1000).unwrap();
        let cfg = PrecisionConfig::default();
        assert_eq!(phi_diff(2.0, &table, &cfg).unwrap(), 1.0);
        let v = phi_diff(10.0, &table, &cfg).unwrap();
        assert!(v < 0.0 && (v - (4.0 - 5.120_435_724_669_805)).abs() < 1e-10);
        assert!(phi_diff(1001.0, &table, &cfg).is_err());
    }

    #[test]
    fn geometric_input_is_exact() {
        let c: Vec<Complex64> = (0..=20).map(|n| Complex64::new(0.5f64.powi(n), 0.0)).collect();
        let exp = TaylorExpansion::from_coefficients(Complex64::new(2.0, 0.0), c, vec![0.0; 21]).unwrap();
        for m in [RadiusMethod::MaxTailRoot, RadiusMethod::Regression] {
            let r = estimate_radius(&exp, m).unwrap().extrapolated_radius.unwrap();
            assert!((r - 2.0).abs() < 1e-12, "{m}: {r}");
        }
    }

    #[test]
    fn too_few_coefficients() {
        let c: Vec<Complex64> = (0..5).map(|n| Complex64::new(0.5f64.powi(n), 0.0)).collect();
        let exp = TaylorExpansion::from_coefficients(Complex64::new(2.0, 0.0), c, vec![0.0; 5]).unwrap();
        assert!(matches!(estimate_radius(&exp, RadiusMethod::Regression), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn hull_keeps_only_upper_points() {
        let pts = [(1.0, 0.0), (2.0, -5.0), (3.0, -0.8), (4.0, -1.5)];
        let h = upper_hull(&pts);
        assert_eq!(h, vec![(1.0, 0.0), (3.0, -0.8), (4.0, -1.5)]);
    }

    #[test]
    fn theta_matches_prime_zeta_identity_small() {
        // zθ_T(z) = P_T(z) − E1((z−1)ln 2) + E1((z−1)ln T) − π(T)T^{-z} + Li(T)T^{-z}
        let table = generate_primes(10_000).unwrap();
        let cfg = PrecisionConfig::default();
        let z = Complex64::new(2.0, 1.0);
        let t = 10_000.0;
        let th = theta(z, &table, &cfg, t).unwrap();
        let p: Complex64 = table.primes().iter().map(|&p| (-z * (p as f64).ln()).exp()).sum();
        let e1 = |w| quadrature::exp_integral_e1(w, &cfg).unwrap();
        let tz = (-z * t.ln()).exp();
        let rhs = p - e1((z - 1.0) * 2f64.ln()) + e1((z - 1.0) * t.ln()) - tz * phi_diff(t, &table, &cfg).unwrap();
        assert!((z * th.value - rhs).norm() < 1e-13, "{}", (z * th.value - rhs).norm());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let table = generate_primes(100_000).unwrap();
        let cfg = PrecisionConfig::default();
        let a = Complex64::new(2.0, 0.0);
        let t = 1e5;
        let f = |z: Complex64| theta(z, &table, &cfg, t).unwrap().value;
        let h = 1e-5;
        let d1 = theta_derivative(a, 1, &table, &cfg, t).unwrap().value;
        let fd1 = (f(a + h) - f(a - h)) / (2.0 * h);
        assert!((d1 - fd1).norm() < 1e-6 * d1.norm());
        let a = Complex64::new(2.5, 0.0);
        let h = 1e-3;
        let d2 = theta_derivative(a, 2, &table, &cfg, t).unwrap().value;
        let fd2 = (f(a + h) - 2.0 * f(a) + f(a - h)) / (h * h);
        assert!((d2 - fd2).norm() < 1e-4 * d2.norm());
    }

    #[test]
    fn expansion_reproduces_theta_nearby() {
        let table = generate_primes(100_000).unwrap();
        let cfg = PrecisionConfig::default();
        let a = Complex64::new(2.0, 1.0);
        let exp = build_expansion(a, 20, &table, &cfg, 1e5).unwrap();
        assert_eq!(exp.coefficients.len(), 21);
        assert_eq!(exp.coefficients[0], theta(a, &table, &cfg, 1e5).unwrap().value);
        let z = a + 0.1;
        let direct = theta(z, &table, &cfg, 1e5).unwrap().value;
        assert!((exp.evaluate(z) - direct).norm() < 1e-12 * direct.norm());
        let conj = build_expansion(a.conj(), 20, &table, &cfg, 1e5).unwrap();
        for (x, y) in exp.coefficients.iter().zip(&conj.coefficients) {
            assert_eq!(x.conj(), *y);
        }
    }

    #[test]
    fn real_center_gives_real_coefficients() {
        let table = generate_primes(100_000).unwrap();
        let exp = build_expansion(Complex64::new(1.1, 0.0), 16, &table, &PrecisionConfig::default(), 1e5).unwrap();
        assert!(exp.coefficients.iter().all(|c| c.im == 0.0));
        // alternation: θ⁽ⁿ⁾ carries (−1)ⁿ and φ < 0, so c_n has sign (−1)^{n+1}
        assert!(exp.coefficients.iter().enumerate().all(|(n, c)| (c.re < 0.0) == (n % 2 == 0)));
    }

    #[test]
    fn scan_rows_and_symmetry() {
        let table = generate_primes(100_000).unwrap();
        let cfg = PrecisionConfig::default();
        let settings = ScanSettings { epsilon: 0.1, order: 16, truncation_t: 1e5, method: RadiusMethod::Regression };
        let bs = [-2.0, 0.0, 2.0, 12.0];
        let rows = task1_scan(&bs, &settings, &table, &cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].radius_estimate, rows[2].radius_estimate);
        assert!(rows[1].inside_3pi && !rows[3].inside_3pi && rows[3].inside_4pi);
        assert!(rows.iter().all(|r| r.status == "ok"));
    }
}
