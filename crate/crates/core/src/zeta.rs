//! The Riemann zeta function on `Re z > 0`: Euler–Maclaurin summation, the
//! fractional-part integral representation, the logarithmic-derivative split
//! `ζ′/ζ = −1/(z−1) + F(z)` and refinement of zeros on the critical line.

use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;
use crate::quadrature::{integrate_smooth_weighted, SmoothKernel};
use num_complex::Complex64;
use serde::Serialize;

/// Ordinates printed in the list of first zeros, as given there.
pub const LISTED_ZERO_ORDINATES: [f64; 10] = [14.134, 21.022, 25.010, 30.424, 32.935, 37.935, 40.918, 43.327, 48.005, 49.773];

pub const EM_ORDER_DEFAULT: usize = 10;
/// Truncation of the fractional-part integral used by `Method::IntegralRepr`.
pub const INTEGRAL_T_DEFAULT: f64 = 1e5;
pub const NEAR_ZERO_THRESHOLD: f64 = 1e-6;

// B_2 .. B_24 as (numerator, denominator)
const BERNOULLI: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DirichletEm,
    IntegralRepr,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::DirichletEm => "dirichlet_em",
            Method::IntegralRepr => "integral_repr",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaEvaluation {
    pub z: Complex64,
    pub value: Complex64,
    pub method: Method,
    pub error_bound: f64,
}

fn check_domain(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("ζ has a simple pole at z = 1".into()));
    }
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("Re z = {} ≤ 0 needs the functional equation, which is not implemented", z.re)));
    }
    Ok(())
}

pub fn zeta(z: Complex64, cfg: &PrecisionConfig) -> Result<ZetaEvaluation> {
    zeta_with(z, Method::DirichletEm, cfg)
}

pub fn zeta_with(z: Complex64, method: Method, cfg: &PrecisionConfig) -> Result<ZetaEvaluation> {
    check_domain(z)?;
    match method {
        Method::DirichletEm => {
            let (value, error_bound) = euler_maclaurin(z, EM_ORDER_DEFAULT, em_cutoff(z), false);
            Ok(ZetaEvaluation { z, value, method, error_bound })
        }
        Method::IntegralRepr => {
            let r = integrate_smooth_weighted(&SmoothKernel::FractionalPart, z, 0, INTEGRAL_T_DEFAULT, cfg)?;
            let value = 1.0 / (z - 1.0) + 0.5 + z * r.value;
            let error_bound = z.norm() * r.error_bound + 4.0 * f64::EPSILON * value.norm();
            Ok(ZetaEvaluation { z, value, method, error_bound })
        }
    }
}

/// ζ′(z) by the term-wise differentiated Euler–Maclaurin formula.
pub fn zeta_derivative(z: Complex64, _cfg: &PrecisionConfig) -> Result<Complex64> {
    check_domain(z)?;
    Ok(euler_maclaurin(z, EM_ORDER_DEFAULT, em_cutoff(z), true).0)
}

fn em_cutoff(z: Complex64) -> u64 {
    z.im.abs().ceil() as u64 + 20
}

/// Euler–Maclaurin with `order` Bernoulli corrections at cutoff `n`; returns
/// the value (or its z-derivative) and an error bound.
fn euler_maclaurin(s: Complex64, order: usize, n: u64, derivative: bool) -> (Complex64, f64) {
    assert!(order < BERNOULLI.len());
    let nf = n as f64;
    let ln_n = nf.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for k in 1..n {
        let lk = (k as f64).ln();
        let mut term = (-s * lk).exp();
        if derivative {
            term *= -lk;
        }
        mass += term.norm();
        sum += term;
    }
    let n_pow = (-s * ln_n).exp(); // N^{-s}
    let sm1 = s - 1.0;
    if derivative {
        sum += -ln_n * n_pow * nf / sm1 - n_pow * nf / (sm1 * sm1);
        sum += -ln_n * n_pow * 0.5;
    } else {
        sum += n_pow * nf / sm1 + n_pow * 0.5;
    }
    // T_j = B_2j/(2j)! · s(s+1)…(s+2j−2) · N^{-s-2j+1}
    let mut poch = s;
    // d/ds poch = poch · dsum
    let mut dsum = 1.0 / s;
    let mut fact = 2.0;
    let mut npow = n_pow / nf;
    let mut last = Complex64::new(0.0, 0.0);
    for j in 1..=order + 1 {
        let (num, den) = BERNOULLI[j - 1];
        let c = num / den / fact;
        let term = if derivative { c * (poch * dsum - poch * ln_n) * npow } else { c * poch * npow };
        if j <= order {
            sum += term;
        } else {
            last = term;
        }
        let a = s + (2 * j - 1) as f64;
        let b = s + (2 * j) as f64;
        poch *= a * b;
        dsum += 1.0 / a + 1.0 / b;
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
        npow /= nf * nf;
    }
    let sigma = s.re;
    let m2 = (2 * order + 1) as f64;
    let mut remainder = last.norm() * (s + m2).norm() / (sigma + m2);
    if derivative {
        // the differentiated remainder carries an extra ln N and a Cauchy-estimate factor
        remainder *= 2.0 * (1.0 + ln_n);
    }
    (sum, remainder + 8.0 * f64::EPSILON * (mass + sum.norm()) + (n as f64) * f64::EPSILON * mass)
}

/// Truncated Euler product `Π_{p≤limit} 1/(1 − p^{-z})`.
pub fn euler_product(z: Complex64, primes: &[u32]) -> Complex64 {
    let mut log_sum = Complex64::new(0.0, 0.0);
    for &p in primes {
        let w = (-z * (p as f64).ln()).exp();
        log_sum -= (1.0 - w).ln();
    }
    log_sum.exp()
}

/// `(z−1)ζ(z)` at `z = 1 + h·e^{iα}` for the four directions α = 0, π/2, π, 3π/2.
pub fn residue_samples(h: f64, cfg: &PrecisionConfig) -> Result<[Complex64; 4]> {
    let dirs = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)];
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, d) in out.iter_mut().zip(dirs) {
        let w = d * h;
        *o = w * zeta(Complex64::new(1.0, 0.0) + w, cfg)?.value;
    }
    Ok(out)
}

/// Residue at z = 1 as the mean of [`residue_samples`]; the γ(z−1) term cancels
/// between opposite directions, leaving an O(h⁴) error.
pub fn residue_estimate(h: f64, cfg: &PrecisionConfig) -> Result<Complex64> {
    let s = residue_samples(h, cfg)?;
    Ok((s[0] + s[1] + s[2] + s[3]) / 4.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDerivDecomposition {
    pub z: Complex64,
    /// −1/(z−1)
    pub pole_part: Complex64,
    pub f_value: Complex64,
    /// ψ(z) = (z−1)ζ(z) − 1 from the integral representation.
    pub psi_value: Complex64,
    pub psi_derivative: Complex64,
    pub zeta_value: Complex64,
    pub zeta_derivative: Complex64,
    pub error_bound: f64,
}

impl LogDerivDecomposition {
    /// |pole_part + F − ζ′/ζ|
    pub fn identity_residual(&self) -> f64 {
        (self.pole_part + self.f_value - self.zeta_derivative / self.zeta_value).norm()
    }
}

const FD_STEP: f64 = 1e-5;

fn psi(z: Complex64, t: f64, cfg: &PrecisionConfig) -> Result<(Complex64, f64)> {
    let r = integrate_smooth_weighted(&SmoothKernel::FractionalPart, z, 0, t, cfg)?;
    let zm1 = z - 1.0;
    Ok((zm1 * (0.5 + z * r.value), (zm1 * z).norm() * r.error_bound))
}

pub fn log_deriv_decomposition(z: Complex64, cfg: &PrecisionConfig) -> Result<LogDerivDecomposition> {
    check_domain(z)?;
    if !(z.re > 0.5) {
        return Err(Error::Domain(format!("the decomposition is taken on Re z > 1/2, got {}", z.re)));
    }
    if !(z.im.abs() < 4.0 * std::f64::consts::PI) {
        return Err(Error::Domain(format!("|Im z| = {} is outside the strip |Im z| < 4π", z.im.abs())));
    }
    let zeta_eval = zeta(z, cfg)?;
    let zv = zeta_eval.value;
    if zv.norm() < NEAR_ZERO_THRESHOLD {
        return Err(Error::NearZero { magnitude: zv.norm(), threshold: NEAR_ZERO_THRESHOLD });
    }
    let zd = zeta_derivative(z, cfg)?;
    let t = INTEGRAL_T_DEFAULT;
    let (psi_value, psi_err) = psi(z, t, cfg)?;
    let (p_plus, _) = psi(z + FD_STEP, t, cfg)?;
    let (p_minus, _) = psi(z - FD_STEP, t, cfg)?;
    let psi_derivative = (p_plus - p_minus) / (2.0 * FD_STEP);
    let denom = (z - 1.0) * zv;
    let f_value = psi_derivative / denom;
    let pole_part = -1.0 / (z - 1.0);
    // central difference: O(h²) truncation plus cancellation of the ψ rounding
    let fd_err = FD_STEP * FD_STEP * psi_value.norm().max(1.0) + 4.0 * f64::EPSILON * psi_value.norm().max(1.0) / FD_STEP;
    let error_bound = (fd_err + psi_err) / denom.norm() + zeta_eval.error_bound * f_value.norm() / zv.norm();
    Ok(LogDerivDecomposition { z, pole_part, f_value, psi_value, psi_derivative, zeta_value: zv, zeta_derivative: zd, error_bound })
}

/// Locate the zero of ζ(1/2 + iy) nearest to `y0` within ±0.5.
pub fn refine_zero(y0: f64, cfg: &PrecisionConfig) -> Result<f64> {
    let f = |y: f64| -> Result<f64> { Ok(zeta(Complex64::new(0.5, y), cfg)?.value.norm()) };
    let step = 0.01;
    let count = 100;
    let mut grid = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let y = y0 - 0.5 + i as f64 * step;
        grid.push((y, f(y)?));
    }
    let mut best: Option<(f64, f64)> = None;
    let mut overall_min = f64::INFINITY;
    for i in 1..count {
        let (y, v) = grid[i];
        if v <= grid[i - 1].1 && v <= grid[i + 1].1 {
            let (ys, vs) = golden_section(&f, y - step, y + step, 1e-10)?;
            overall_min = overall_min.min(vs);
            if vs < 1e-3 && best.is_none_or(|(b, _)| (ys - y0).abs() < (b - y0).abs()) {
                best = Some((ys, vs));
            }
        }
    }
    match best {
        Some((y, _)) => Ok(y),
        None => Err(Error::NotAZero { y0, min_abs: overall_min.min(grid.iter().map(|g| g.1).fold(f64::INFINITY, f64::min)) }),
    }
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let y = 0.5 * (a + b);
    Ok((y, f(y)?))
}
