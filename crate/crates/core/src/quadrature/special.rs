use crate::error::{Error, Result};
use crate::precision::{Dd, PrecisionConfig, Real};
use num_complex::Complex64;

/// li(2).
pub const LI2: f64 = 1.045_163_780_117_492_8;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// li(e^u) for u > 0 from the everywhere-positive series
/// `γ + ln u + Σ u^k / (k · k!)`.
pub fn li_from_log<R: Real>(u: R) -> R {
    let mut sum = R::EULER_GAMMA + u.ln();
    let mut term = R::one();
    let uf = u.to_f64();
    let mut k = 1u32;
    loop {
        term = term * u.mul_f64(1.0 / k as f64);
        let add = term.mul_f64(1.0 / k as f64);
        sum += add;
        if k as f64 > uf && add.abs().to_f64() <= R::UNIT_ROUNDOFF * sum.abs().to_f64() {
            break;
        }
        k += 1;
        if k > 4000 {
            break;
        }
    }
    sum
}

fn li_asymptotic(u: f64) -> f64 {
    // x/ln x Σ k!/ln^k x, truncated at the smallest term
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let next = term * k / u;
        if next >= term || next < f64::EPSILON * sum {
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    u.exp() / u * sum
}

/// Offset logarithmic integral `Li(t) = ∫_2^t ds/ln s`.
pub fn li_offset(t: f64, cfg: &PrecisionConfig) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::Domain(format!("Li(t) is defined here for t >= 2, got {t}")));
    }
    if t == 2.0 {
        return Ok(0.0);
    }
    let u = t.ln();
    if u > 40.0 {
        return Ok(li_asymptotic(u) - LI2);
    }
    if cfg.extended() {
        let ud = Dd::from_f64(t).ln();
        Ok((li_from_log(ud) - Dd::LI2).to_f64())
    } else {
        Ok(li_from_log(u) - LI2)
    }
}

/// Exponential integral `E1(w) = ∫_1^∞ e^{-wu}/u du` on `Re w > 0`.
pub fn exp_integral_e1(w: Complex64, _cfg: &PrecisionConfig) -> Result<Complex64> {
    if !(w.re > 0.0) || !w.im.is_finite() {
        return Err(Error::Domain(format!("E1 is implemented for Re w > 0 only, got {w}")));
    }
    if w.norm() <= 2.5 {
        Ok(e1_series(w))
    } else {
        Ok(e1_continued_fraction(w))
    }
}

fn e1_series(w: Complex64) -> Complex64 {
    // E1(w) = -γ - ln w - Σ (-w)^k / (k k!)
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        let kf = k as f64;
        term *= -w / kf;
        let add = term / kf;
        sum += add;
        if add.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - w.ln() - sum
}

fn e1_continued_fraction(w: Complex64) -> Complex64 {
    // modified Lentz on e^{-w} / (w + 1 - 1^2/(w + 3 - 2^2/(w + 5 - ...)))
    let tiny = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let mut b = w + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..20_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = one / (d * an + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-17 {
            break;
        }
    }
    h * (-w).exp()
}
