//! Weighted integrals `∫ f(t) lnⁿt t^{-z-1} dt` of smooth (or piecewise
//! smooth) kernels.

use super::gauss::GaussLegendre;
use super::tail::{moment_tail, TailModel};
use super::QuadratureResult;
use crate::error::{Error, Result};
use crate::exec::{self, ExecPolicy};
use crate::precision::{Cx, Dd, PrecisionConfig, Real};
use crate::quadrature::li_from_log;
use num_complex::Complex64;

/// Kernels supported by [`integrate_smooth_weighted`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothKernel {
    /// `Li(t)` on `[lower, T]`, `1 ≤ lower ≤ 2`.
    Li { lower: f64 },
    /// `t·σ(t)` with `σ(t) = 2cos(ω ln t)/t^γ` on `[1, T]`.
    Sigma { gamma: f64, omega: f64 },
    /// `ρ(t) = 1/2 − {t}` on `[1, T]`.
    FractionalPart,
}

impl SmoothKernel {
    pub fn li() -> Self {
        SmoothKernel::Li { lower: 2.0 }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SmoothKernel::Li { .. } => "li",
            SmoothKernel::Sigma { .. } => "sigma_counterexample",
            SmoothKernel::FractionalPart => "fractional_part_kernel",
        }
    }
}

pub fn integrate_smooth_weighted(kernel: &SmoothKernel, z: Complex64, n: u32, t: f64, cfg: &PrecisionConfig) -> Result<QuadratureResult> {
    if n > super::N_MAX_DEFAULT {
        return Err(Error::Config(format!("order {n} exceeds N_max = {}", super::N_MAX_DEFAULT)));
    }
    if !(z.re.is_finite() && z.im.is_finite()) || !t.is_finite() {
        return Err(Error::Domain("z and T must be finite".into()));
    }
    match *kernel {
        SmoothKernel::Li { lower } => {
            let mut all = li_weighted_orders(z, n, t, lower, cfg)?;
            Ok(all.pop().expect("at least one order"))
        }
        SmoothKernel::Sigma { gamma, omega } => {
            let s = z + (gamma - 1.0);
            if !(s.re > 0.0) {
                return Err(Error::Domain(format!("sigma kernel needs Re z > 1 − γ = {}, got {}", 1.0 - gamma, z.re)));
            }
            let tau_end = t.max(1.0).ln();
            let (value, err) = sigma_integral(s, omega, n, 0.0, tau_end);
            let tail = 2.0 * moment_tail(n, s.re, tau_end);
            let mut r = QuadratureResult::finite(value, err, 1.0, t.max(1.0)).with_tail(TailModel::Geometric, tail);
            r.notes.push("tail bounded by the |cos| ≤ 1 envelope".into());
            Ok(r)
        }
        SmoothKernel::FractionalPart => fractional_weighted(z, n, t, cfg),
    }
}

// ---------------------------------------------------------------------------
// Li kernel

/// `∫_lower^T Li(t) lnᵏt t^{-z-1} dt` for k = 0..=n_max.
pub fn li_weighted_orders(z: Complex64, n_max: u32, t: f64, lower: f64, cfg: &PrecisionConfig) -> Result<Vec<QuadratureResult>> {
    let (values, errors) = if cfg.extended() {
        let (v, e) = li_orders_in::<Dd>(z, n_max, t, lower, cfg.exec)?;
        (v.into_iter().map(Cx::to_c64).collect::<Vec<_>>(), e)
    } else {
        let (v, e) = li_orders_in::<f64>(z, n_max, t, lower, cfg.exec)?;
        (v.into_iter().map(Cx::to_c64).collect::<Vec<_>>(), e)
    };
    Ok(values
        .into_iter()
        .zip(errors)
        .map(|(v, e)| QuadratureResult::finite(v, e + f64::EPSILON * v.norm(), lower, t.max(lower)))
        .collect())
}

const LI_PANEL: f64 = 0.25;
const MAX_DEPTH: u32 = 10;

pub(crate) fn li_orders_in<R: Real>(z: Complex64, n_max: u32, t: f64, lower: f64, policy: ExecPolicy) -> Result<(Vec<Cx<R>>, Vec<f64>)> {
    if !(1.0..=2.0).contains(&lower) {
        return Err(Error::Config(format!("lower limit must lie in [1, 2], got {lower}")));
    }
    let n_max = n_max as usize;
    let mut values = vec![Cx::<R>::zero(); n_max + 1];
    let mut errors = vec![0.0; n_max + 1];
    if t <= lower {
        return Ok((values, errors));
    }
    let ua = R::from_f64(lower).ln();
    let ub = R::from_f64(t).ln();
    let h = LI_PANEL.min(1.0 / (1.0 + z.im.abs()));
    let mut panels: Vec<(R, R)> = Vec::new();
    let mut start = ua;
    if ua.to_f64() < LI_PANEL {
        // graded panels towards the ln u singularity at t = 1
        let mut edges = vec![R::from_f64(LI_PANEL)];
        let mut x = LI_PANEL;
        loop {
            x *= 0.5;
            if x <= ua.to_f64() || x < 1e-33 {
                break;
            }
            edges.push(R::from_f64(x));
        }
        edges.push(ua);
        let top = if ub.to_f64() < LI_PANEL { ub } else { R::from_f64(LI_PANEL) };
        for w in edges.windows(2).rev() {
            let (a, b) = (w[1], w[0]);
            if a.to_f64() >= top.to_f64() {
                continue;
            }
            let b = if b.to_f64() > top.to_f64() { top } else { b };
            panels.push((a, b));
        }
        start = top;
    }
    let span = (ub - start).to_f64();
    if span > 0.0 {
        let count = (span / h).ceil().max(1.0) as usize;
        let width = (ub - start).mul_f64(1.0 / count as f64);
        for i in 0..count {
            let a = start + width.mul_f64(i as f64);
            let b = if i + 1 == count { ub } else { start + width.mul_f64((i + 1) as f64) };
            panels.push((a, b));
        }
    }

    let g20 = GaussLegendre::<R>::new(20);
    let g12 = GaussLegendre::<R>::new(12);
    let zc = Cx::<R>::from_c64(z);
    let u_round = R::UNIT_ROUNDOFF;
    let li2 = R::LI2;
    let base = |u: R| -> Cx<R> {
        let li = li_from_log(u) - li2;
        Cx::exp_neg_scaled(zc, u).scale(li)
    };
    // one panel: Gauss sums for every order plus the |·| mass
    let eval = |rule: &GaussLegendre<R>, a: R, b: R| -> (Vec<Cx<R>>, Vec<f64>) {
        let mut acc = vec![Cx::<R>::zero(); n_max + 1];
        let mut mass = vec![0.0; n_max + 1];
        let half = (b - a).mul_f64(0.5);
        let mid = (a + b).mul_f64(0.5);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let u = mid + half * *x;
            let mut term = base(u).scale(half * *w);
            let mut m = term.abs_f64();
            let uf = u.to_f64();
            acc[0] += term;
            mass[0] += m;
            for k in 1..=n_max {
                term = term.scale(u);
                m *= uf;
                acc[k] += term;
                mass[k] += m;
            }
        }
        (acc, mass)
    };

    let results = exec::map(policy, &panels, |&(a, b)| {
        let mut val = vec![Cx::<R>::zero(); n_max + 1];
        let mut err = vec![0.0; n_max + 1];
        let mut stack = vec![(a, b, 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let (hi, mass) = eval(&g20, a, b);
            let (lo, _) = eval(&g12, a, b);
            let diffs: Vec<f64> = hi.iter().zip(&lo).map(|(x, y)| (*x - *y).abs_f64()).collect();
            let ok = diffs.iter().zip(&mass).all(|(d, m)| *d <= 1e3 * u_round * m);
            if ok || depth >= MAX_DEPTH {
                for k in 0..=n_max {
                    val[k] += hi[k];
                    let rounding = u_round * (60.0 + k as f64 + z.norm() * b.to_f64()) * mass[k];
                    err[k] += diffs[k] + rounding;
                }
            } else {
                let m = (a + b).mul_f64(0.5);
                // right half pushed first so the left one is summed first
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            }
        }
        (val, err)
    });
    for (v, e) in results {
        for k in 0..=n_max {
            values[k] += v[k];
            errors[k] += e[k];
        }
    }
    Ok((values, errors))
}

// ---------------------------------------------------------------------------
// Sigma kernel

/// `∫_{τ0}^{τ1} 2cos(ωτ) τⁿ e^{-sτ} dτ` on panels split at the zeros of the cosine.
pub(crate) fn sigma_integral(s: Complex64, omega: f64, n: u32, tau0: f64, tau1: f64) -> (Complex64, f64) {
    if tau1 <= tau0 {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let g20 = GaussLegendre::<f64>::new(20);
    let g12 = GaussLegendre::<f64>::new(12);
    let f = |tau: f64| 2.0 * (omega * tau).cos() * tau.powi(n as i32) * (-s * tau).exp();
    let mut breaks = vec![tau0];
    if omega != 0.0 {
        let step = std::f64::consts::PI / omega.abs();
        let first = ((tau0 * omega.abs() / std::f64::consts::PI - 0.5).floor() + 1.0).max(0.0);
        let mut k = first;
        loop {
            let z = (k + 0.5) * step;
            if z >= tau1 {
                break;
            }
            if z > tau0 {
                breaks.push(z);
            }
            k += 1.0;
        }
    }
    breaks.push(tau1);
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for w in breaks.windows(2) {
        // keep |s|·width small enough for the 20-point rule
        let width = w[1] - w[0];
        let pieces = (width * s.norm() / 2.0).ceil().max(1.0) as usize;
        let hstep = width / pieces as f64;
        for i in 0..pieces {
            let mut stack = vec![(w[0] + i as f64 * hstep, w[0] + (i + 1) as f64 * hstep, 0u32)];
            while let Some((a, b, depth)) = stack.pop() {
                let hi = g20.integrate(a, b, |x, wt| f(x) * wt, Complex64::new(0.0, 0.0));
                let lo = g12.integrate(a, b, |x, wt| f(x) * wt, Complex64::new(0.0, 0.0));
                let mass = g20.integrate(a, b, |x, wt| f(x).norm() * wt, 0.0);
                let d = (hi - lo).norm();
                if d <= 1e3 * f64::EPSILON * mass || depth >= MAX_DEPTH {
                    value += hi;
                    err += d + 64.0 * f64::EPSILON * mass * (1.0 + s.norm() * b);
                } else {
                    let m = 0.5 * (a + b);
                    stack.push((m, b, depth + 1));
                    stack.push((a, m, depth + 1));
                }
            }
        }
    }
    (value, err)
}

// ---------------------------------------------------------------------------
// Fractional-part kernel

const FRAC_CHUNK: usize = 4096;

fn fractional_weighted(z: Complex64, n: u32, t: f64, cfg: &PrecisionConfig) -> Result<QuadratureResult> {
    if !(z.re > -1.0) {
        return Err(Error::Domain(format!("fractional-part kernel needs Re z > −1, got {}", z.re)));
    }
    let kmax = t.floor().max(1.0) as u64;
    let (value, err) = if n == 0 { fractional_exact(z, kmax, cfg.exec) } else { fractional_gauss(z, n, kmax, cfg.exec) };
    let tmax = kmax as f64;
    let mut r = QuadratureResult::finite(value, err, 1.0, tmax);
    if tmax >= 2.0 {
        r = r.with_tail(TailModel::Geometric, fractional_tail(z, n, tmax));
    } else {
        r.tail_bound = f64::INFINITY;
        r.error_bound = f64::INFINITY;
    }
    if tmax != t {
        r.notes.push(format!("truncation rounded down to the integer {kmax}"));
    }
    Ok(r)
}

/// `|∫_T^∞ ρ(t) g(t) dt| ≤ (|g(T)| + ∫_T^∞ |g'|)/8` with `g = lnⁿt t^{-z-1}`,
/// from one integration by parts against the antiderivative of ρ (range [0, 1/8]).
fn fractional_tail(z: Complex64, n: u32, t: f64) -> f64 {
    let l = t.ln();
    let s = z.re + 1.0;
    let g_t = l.powi(n as i32) * t.powf(-s);
    let mut dg = (z + 1.0).norm() * moment_tail(n, s, l);
    if n > 0 {
        dg += n as f64 * moment_tail(n - 1, s, l);
    }
    (g_t + dg) / 8.0
}

/// `(1 − e^{-x})/x`, stable near 0.
fn one_minus_exp_over(x: Complex64) -> Complex64 {
    if x.norm() < 0.1 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for j in 1..20 {
            term *= -x / (j as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        (1.0 - (-x).exp()) / x
    }
}

/// `∫_k^{k+1} (1/2 − (t−k)) t^{-z-1} dt`.
fn fractional_piece(z: Complex64, k: u64, k0: f64) -> (Complex64, f64) {
    let kf = k as f64;
    let eps = f64::EPSILON;
    if kf < k0 {
        let c = (1.0 / kf).ln_1p();
        let lk = kf.ln();
        let a = (-z * lk).exp() * c * one_minus_exp_over(z * c);
        let w = z - 1.0;
        let b = (-w * lk).exp() * c * one_minus_exp_over(w * c);
        let v = a * (kf + 0.5) - b;
        let scale = a.norm() * (kf + 0.5) + b.norm();
        (v, 16.0 * eps * (1.0 + z.norm() * lk) * scale)
    } else {
        // k^{-z-1} Σ_{m≥1} binom(−z−1, m) k^{-m} · (−m / (2(m+1)(m+2)))
        let mut binom = Complex64::new(1.0, 0.0);
        let mut kpow = 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for m in 1..200u32 {
            let mf = m as f64;
            binom *= (-z - mf) / mf;
            kpow /= kf;
            let term = binom * (kpow * (-mf / (2.0 * (mf + 1.0) * (mf + 2.0))));
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        let v = (-(z + 1.0) * kf.ln()).exp() * sum;
        (v, 16.0 * eps * (1.0 + z.norm() * kf.ln()) * v.norm())
    }
}

fn fractional_exact(z: Complex64, kmax: u64, policy: ExecPolicy) -> (Complex64, f64) {
    if kmax < 2 {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let k0 = 8f64.max(4.0 * (z + 1.0).norm());
    let count = (kmax - 1) as usize; // intervals [k, k+1), k = 1..kmax-1
    let nchunks = count.div_ceil(FRAC_CHUNK);
    let parts = exec::map_range(policy, nchunks, |c| {
        let lo = 1 + (c * FRAC_CHUNK) as u64;
        let hi = (lo + FRAC_CHUNK as u64).min(kmax);
        let mut s = Complex64::new(0.0, 0.0);
        let mut e = 0.0;
        let mut mass = 0.0;
        for k in lo..hi {
            let (v, err) = fractional_piece(z, k, k0);
            s += v;
            e += err;
            mass += v.norm();
        }
        (s, e, mass)
    });
    let mut s = Complex64::new(0.0, 0.0);
    let mut e = 0.0;
    let mut mass = 0.0;
    for (ps, pe, pm) in parts {
        s += ps;
        e += pe;
        mass += pm;
    }
    (s, e + (FRAC_CHUNK.min(count) + nchunks) as f64 * f64::EPSILON * mass)
}

fn fractional_gauss(z: Complex64, n: u32, kmax: u64, policy: ExecPolicy) -> (Complex64, f64) {
    if kmax < 2 {
        return (Complex64::new(0.0, 0.0), 0.0);
    }
    let g16 = GaussLegendre::<f64>::new(16);
    let g10 = GaussLegendre::<f64>::new(10);
    let count = (kmax - 1) as usize;
    let nchunks = count.div_ceil(FRAC_CHUNK);
    let ni = n as i32;
    let parts = exec::map_range(policy, nchunks, |c| {
        let lo = 1 + (c * FRAC_CHUNK) as u64;
        let hi = (lo + FRAC_CHUNK as u64).min(kmax);
        let mut s = Complex64::new(0.0, 0.0);
        let mut e = 0.0;
        for k in lo..hi {
            let kf = k as f64;
            let f = |t: f64| {
                let lt = t.ln();
                (-(z + 1.0) * lt).exp() * ((0.5 - (t - kf)) * lt.powi(ni))
            };
            let spread = ((z.norm() + n as f64 / (1.0 + kf.ln())) * (1.0 / kf).ln_1p()).ceil().max(1.0) as usize;
            let h = 1.0 / spread as f64;
            for i in 0..spread {
                let a = kf + i as f64 * h;
                let b = a + h;
                let v16 = g16.integrate(a, b, |x, w| f(x) * w, Complex64::new(0.0, 0.0));
                let v10 = g10.integrate(a, b, |x, w| f(x) * w, Complex64::new(0.0, 0.0));
                s += v16;
                e += (v16 - v10).norm() + 32.0 * f64::EPSILON * v16.norm();
            }
        }
        (s, e)
    });
    let mut s = Complex64::new(0.0, 0.0);
    let mut e = 0.0;
    for (ps, pe) in parts {
        s += ps;
        e += pe;
    }
    (s, e)
}
