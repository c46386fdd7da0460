use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Growth model behind a tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailModel {
    /// Finite integral, nothing neglected.
    None,
    /// Model A: |π(t) − Li(t)| ≤ t·exp(−0.005 (ln t)^{3/5}).
    Unconditional,
    /// Model B: |π(t) − Li(t)| ≤ √t ln t.
    SquareRoot,
    /// Exponentially decaying integrand, bounded by its envelope.
    Geometric,
}

impl TailModel {
    pub fn label(self) -> &'static str {
        match self {
            TailModel::None => "none",
            TailModel::Unconditional => "unconditional",
            TailModel::SquareRoot => "square_root",
            TailModel::Geometric => "geometric",
        }
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TailModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(TailModel::None),
            "a" | "unconditional" => Ok(TailModel::Unconditional),
            "b" | "square_root" | "sqrt" => Ok(TailModel::SquareRoot),
            "geometric" => Ok(TailModel::Geometric),
            other => Err(Error::Config(format!("unknown tail model '{other}'"))),
        }
    }
}

/// Constant and exponent of the unconditional error term.
pub const MODEL_A_CONSTANT: f64 = 0.005;
pub const MODEL_A_EXPONENT: f64 = 0.6;

/// `∫_L^∞ uⁿ e^{-su} du = e^{-sL} Σ_{k≤n} n!/k! · L^k / s^{n-k+1}` for s > 0, L ≥ 0.
pub fn moment_tail(n: u32, s: f64, l: f64) -> f64 {
    assert!(s > 0.0 && l >= 0.0);
    if l == 0.0 {
        // n!/s^{n+1}
        let lg: f64 = (1..=n).map(|k| (k as f64).ln()).sum::<f64>() - (n as f64 + 1.0) * s.ln();
        return lg.exp();
    }
    // Leading term e^{-sL} Lⁿ / s, then ratios k/(L s) going down
    let lead = (-s * l + n as f64 * l.ln() - s.ln()).exp();
    let mut ratio = 1.0;
    let mut sum = 1.0;
    for k in (1..=n).rev() {
        ratio *= k as f64 / (l * s);
        sum += ratio;
    }
    lead * sum
}

/// Bound on `|∫_T^∞ (π(t) − Li(t)) lnⁿt t^{-z-1} dt|` under `model`.
pub fn tail_bound(model: TailModel, z: Complex64, n: u32, t: f64) -> Result<f64> {
    if !(t >= 100.0) {
        return Err(Error::Domain(format!("tail bounds need T >= 100, got {t}")));
    }
    let l = t.ln();
    match model {
        TailModel::Unconditional => {
            let s = z.re - 1.0;
            if !(s > 0.0) {
                return Err(Error::Domain(format!("model A tail needs Re z > 1, got {}", z.re)));
            }
            // exp(−c (ln t)^α) is decreasing, so its value at T bounds the rest
            Ok((-MODEL_A_CONSTANT * l.powf(MODEL_A_EXPONENT)).exp() * moment_tail(n, s, l))
        }
        TailModel::SquareRoot => {
            let s = z.re - 0.5;
            if !(s > 0.0) {
                return Err(Error::Domain(format!("model B tail needs Re z > 1/2, got {}", z.re)));
            }
            Ok(moment_tail(n + 1, s, l))
        }
        other => Err(Error::Config(format!("'{other}' is not a growth model for π − Li"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_tail_matches_quadrature() {
        // Composite Simpson on [L, L + 60/s] as oracle
        for &(n, s, l) in &[(0u32, 1.5, 13.8), (3, 0.7, 4.6), (10, 0.1, 18.4), (5, 2.0, 0.0)] {
            let hi = l + 80.0 / s + 10.0 * n as f64 / s;
            let m = 200_000;
            let h = (hi - l) / m as f64;
            let f = |u: f64| u.powi(n as i32) * (-s * u).exp();
            let mut acc = f(l) + f(hi);
            for i in 1..m {
                acc += f(l + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let oracle = acc * h / 3.0;
            let v = moment_tail(n, s, l);
            assert!((v - oracle).abs() <= 1e-9 * oracle, "n={n} s={s} L={l}: {v} vs {oracle}");
        }
    }

    #[test]
    fn model_b_closed_form() {
        // ∫_T^∞ t^{-5/2} ln t dt = T^{-3/2}(ln T/1.5 + 1/2.25)
        let t: f64 = 1e6;
        let expect = t.powf(-1.5) * (t.ln() / 1.5 + 1.0 / 2.25);
        let v = tail_bound(TailModel::SquareRoot, Complex64::new(2.0, 0.0), 0, t).unwrap();
        assert!((v / expect - 1.0).abs() < 1e-13);
    }

    #[test]
    fn models_are_ordered_and_monotone() {
        let z = Complex64::new(2.0, 3.0);
        let a = tail_bound(TailModel::Unconditional, z, 0, 1e3).unwrap();
        let b = tail_bound(TailModel::SquareRoot, z, 0, 1e3).unwrap();
        assert!(a > b);
        for model in [TailModel::Unconditional, TailModel::SquareRoot] {
            for n in [0, 5, 40] {
                let mut prev = f64::INFINITY;
                for t in [1e2, 1e3, 1e4, 1e6, 1e8] {
                    let v = tail_bound(model, Complex64::new(1.3, 0.0), n, t).unwrap();
                    assert!(v <= prev && v.is_finite());
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        for m in [TailModel::None, TailModel::Unconditional, TailModel::SquareRoot, TailModel::Geometric] {
            assert_eq!(m.label().parse::<TailModel>().unwrap(), m);
        }
        assert!(matches!("model_c".parse::<TailModel>(), Err(Error::Config(_))));
        assert!(tail_bound(TailModel::Unconditional, Complex64::new(0.9, 0.0), 0, 1e4).is_err());
    }
}
