//! Exact integration of prime-count step functions against `lnⁿt · t^{-z-1}`.
//!
//! With `u = ln t` every prime contributes `∫_{ln p}^{ln T} uⁿ e^{-zu} du`, and
//! summing the integration-by-parts recurrence over primes gives
//!
//! `S_n = (A_n − π(T) Lⁿ T^{-z}) / z + (n/z) S_{n-1}`,  `A_n = Σ_{p≤T} (ln p)ⁿ p^{-z}`.
//!
//! There is no discretisation error; the bounds below track rounding only.

use super::QuadratureResult;
use crate::error::{Error, Result};
use crate::exec::{self, ExecPolicy};
use crate::precision::{Cx, Dd, PrecisionConfig, Real};
use crate::primes::PrimeTable;
use num_complex::Complex64;

/// Highest derivative order accepted by the weighted integrals.
pub const N_MAX_DEFAULT: u32 = 40;

/// Chunk length of the prime sums; fixed so that summation order never
/// depends on the thread count.
pub(crate) const CHUNK: usize = 1 << 14;

/// `A_k = Σ (ln p)^k p^{-z}` for k = 0..=n_max with `Σ |·|` alongside.
pub(crate) struct PowerSums<R> {
    pub sums: Vec<Cx<R>>,
    pub abs: Vec<f64>,
    /// Relative rounding factor: |A_k − fl(A_k)| ≤ u·(factor + 2k)·abs[k].
    pub factor: f64,
}

pub(crate) fn log_power_sums<R: Real>(primes: &[u32], z: Complex64, n_max: usize, policy: ExecPolicy) -> PowerSums<R> {
    let zc = Cx::<R>::from_c64(z);
    let parts = exec::map_chunks(policy, primes, CHUNK, |chunk| {
        let mut s = vec![Cx::<R>::zero(); n_max + 1];
        let mut a = vec![0.0f64; n_max + 1];
        for &p in chunk {
            let lp = R::from_u64(p as u64).ln();
            let lpf = lp.to_f64();
            let mut term = Cx::exp_neg_scaled(zc, lp);
            let mut mag = term.abs_f64();
            s[0] += term;
            a[0] += mag;
            for k in 1..=n_max {
                term = term.scale(lp);
                mag *= lpf;
                s[k] += term;
                a[k] += mag;
            }
        }
        (s, a)
    });
    let nchunks = parts.len();
    let mut sums = vec![Cx::<R>::zero(); n_max + 1];
    let mut abs = vec![0.0f64; n_max + 1];
    for (s, a) in parts {
        for k in 0..=n_max {
            sums[k] += s[k];
            abs[k] += a[k];
        }
    }
    let l_max = primes.last().map_or(0.0, |&p| (p as f64).ln());
    let factor = (primes.len().min(CHUNK) + nchunks) as f64 + 16.0 + z.norm() * l_max;
    PowerSums { sums, abs, factor }
}

/// Raw step integrals in the working type, before conversion to f64.
pub(crate) struct StepOrders<R> {
    pub values: Vec<Cx<R>>,
    pub errors: Vec<f64>,
}

pub(crate) fn step_orders_in<R: Real>(table: &PrimeTable, z: Complex64, n_max: u32, t: f64, policy: ExecPolicy) -> Result<StepOrders<R>> {
    check_args(table, z, n_max, t)?;
    let n_max = n_max as usize;
    if t < 2.0 {
        return Ok(StepOrders { values: vec![Cx::zero(); n_max + 1], errors: vec![0.0; n_max + 1] });
    }
    let primes = table.primes_up_to(t)?;
    let count = primes.len() as u64;
    let ps = log_power_sums::<R>(primes, z, n_max, policy);
    let u = R::UNIT_ROUNDOFF;
    let zc = Cx::<R>::from_c64(z);
    let zinv = zc.inv();
    let zabs = z.norm();
    let l = R::from_f64(t).ln();
    let lf = l.to_f64();
    // π(T) Lⁿ T^{-z}, advanced by one factor of L per order
    let mut boundary = Cx::exp_neg_scaled(zc, l).scale(R::from_u64(count));
    let mut values = Vec::with_capacity(n_max + 1);
    let mut errors = Vec::with_capacity(n_max + 1);
    let mut prev = Cx::<R>::zero();
    let mut prev_err = 0.0;
    for n in 0..=n_max {
        let nf = n as f64;
        let mut s = (ps.sums[n] - boundary) * zinv;
        if n > 0 {
            s += prev.scale_f64(nf) * zinv;
        }
        let e_a = u * (ps.factor + 2.0 * nf) * ps.abs[n];
        let e_b = u * (16.0 + nf + zabs * lf) * boundary.abs_f64();
        let err = (e_a + e_b) / zabs + nf / zabs * prev_err + 4.0 * u * (s.abs_f64() + (ps.abs[n] + boundary.abs_f64()) / zabs);
        values.push(s);
        errors.push(err);
        prev = s;
        prev_err = err;
        boundary = boundary.scale(l);
    }
    Ok(StepOrders { values, errors })
}

fn check_args(table: &PrimeTable, z: Complex64, n_max: u32, t: f64) -> Result<()> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::Domain(format!("step integrals need Re z > 0, got {z}")));
    }
    if n_max > N_MAX_DEFAULT {
        return Err(Error::Config(format!("order {n_max} exceeds N_max = {N_MAX_DEFAULT}")));
    }
    if !t.is_finite() {
        return Err(Error::Domain("truncation point must be finite".into()));
    }
    if t > table.limit() as f64 {
        return Err(Error::OutOfRange(format!("T = {t} exceeds the prime table limit {}", table.limit())));
    }
    Ok(())
}

/// `∫_2^T π(t) lnᵏt t^{-z-1} dt` for every k = 0..=n_max.
pub fn step_weighted_orders(table: &PrimeTable, z: Complex64, n_max: u32, t: f64, cfg: &PrecisionConfig) -> Result<Vec<QuadratureResult>> {
    let (values, errors) = if cfg.extended() {
        let r = step_orders_in::<Dd>(table, z, n_max, t, cfg.exec)?;
        (r.values.into_iter().map(Cx::to_c64).collect::<Vec<_>>(), r.errors)
    } else {
        let r = step_orders_in::<f64>(table, z, n_max, t, cfg.exec)?;
        (r.values.into_iter().map(Cx::to_c64).collect::<Vec<_>>(), r.errors)
    };
    let upper = t.max(2.0);
    Ok(values
        .into_iter()
        .zip(errors)
        .map(|(v, e)| {
            // conversion to f64 adds half an ulp per component
            let e = e + f64::EPSILON * v.norm();
            QuadratureResult::finite(v, e, 2.0, upper)
        })
        .collect())
}

/// `∫_2^T π(t) lnⁿt t^{-z-1} dt`, exact up to rounding.
pub fn integrate_step_weighted(table: &PrimeTable, z: Complex64, n: u32, t: f64, cfg: &PrecisionConfig) -> Result<QuadratureResult> {
    let mut all = step_weighted_orders(table, z, n, t, cfg)?;
    Ok(all.pop().expect("at least one order"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::generate_primes;

    /// Midpoint sum of π(t) lnⁿt t^{-z-1} on a fine grid, with π by trial division.
    fn riemann_oracle(z: Complex64, n: i32, t_max: f64, steps_per_unit: usize) -> Complex64 {
        let is_prime = |k: u64| k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pi = 0.0;
        let mut k = 2u64;
        while (k as f64) < t_max {
            if is_prime(k) {
                pi += 1.0;
            }
            let h = 1.0 / steps_per_unit as f64;
            for j in 0..steps_per_unit {
                let t = k as f64 + (j as f64 + 0.5) * h;
                if t > t_max {
                    break;
                }
                let lt = t.ln();
                acc += (-(z + 1.0) * lt).exp() * (pi * lt.powi(n) * h);
            }
            k += 1;
        }
        acc
    }

    #[test]
    fn matches_riemann_sum() {
        let table = generate_primes(200).unwrap();
        let cfg = PrecisionConfig::default();
        for z in [Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0), Complex64::new(2.0, 1.0)] {
            for n in 0..=2u32 {
                let exact = integrate_step_weighted(&table, z, n, 100.0, &cfg).unwrap();
                let oracle = riemann_oracle(z, n as i32, 100.0, 20_000);
                assert!((exact.value - oracle).norm() < 1e-8, "z={z} n={n}: {} vs {oracle}", exact.value);
                assert!(exact.error_bound < 1e-14);
            }
        }
    }

    #[test]
    fn small_table_closed_form() {
        // n = 0: Σ_p (p^{-2} − 10^{-2}) / 2
        let table = generate_primes(10).unwrap();
        let v = integrate_step_weighted(&table, Complex64::new(2.0, 0.0), 0, 10.0, &PrecisionConfig::default()).unwrap();
        let expect: f64 = [2.0f64, 3.0, 5.0, 7.0].iter().map(|p| (p.powi(-2) - 0.01) / 2.0).sum();
        assert!((v.value.re - expect).abs() < 1e-15);
        let empty = integrate_step_weighted(&table, Complex64::new(2.0, 0.0), 0, 1.999, &PrecisionConfig::default()).unwrap();
        assert_eq!(empty.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn derivative_in_z() {
        let table = generate_primes(100).unwrap();
        let cfg = PrecisionConfig::default();
        let z = Complex64::new(3.0, 0.0);
        let h = 1e-5;
        let f = |z: Complex64| integrate_step_weighted(&table, z, 0, 100.0, &cfg).unwrap().value;
        let fd = (f(z + h) - f(z - h)) / (2.0 * h);
        let n1 = integrate_step_weighted(&table, z, 1, 100.0, &cfg).unwrap().value;
        assert!((fd + n1).norm() < 1e-8);
    }

    #[test]
    fn argument_checks() {
        let table = generate_primes(100).unwrap();
        let cfg = PrecisionConfig::default();
        let z = Complex64::new(2.0, 0.0);
        assert!(matches!(integrate_step_weighted(&table, z, 41, 50.0, &cfg), Err(Error::Config(_))));
        assert!(matches!(integrate_step_weighted(&table, z, 0, 101.0, &cfg), Err(Error::OutOfRange(_))));
        assert!(matches!(integrate_step_weighted(&table, Complex64::new(0.0, 1.0), 0, 50.0, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn backends_and_policies_agree() {
        let table = generate_primes(100_000).unwrap();
        let z = Complex64::new(1.3, 7.0);
        let dd = PrecisionConfig::default();
        let f64cfg = PrecisionConfig::with_digits(15).unwrap();
        let a = step_weighted_orders(&table, z, 10, 1e5, &dd).unwrap();
        let b = step_weighted_orders(&table, z, 10, 1e5, &f64cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value - y.value).norm() <= y.error_bound + x.error_bound);
        }
        let seq = step_weighted_orders(&table, z, 10, 1e5, &dd.with_exec(ExecPolicy::Sequential)).unwrap();
        assert_eq!(seq, a);
        let conj = step_weighted_orders(&table, z.conj(), 10, 1e5, &dd).unwrap();
        for (x, y) in a.iter().zip(&conj) {
            assert_eq!(x.value.conj(), y.value);
        }
    }
}
