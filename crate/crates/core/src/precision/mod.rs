//! Working-precision configuration and the scalar types behind it.
//!
//! Public results are `Complex64`. The cancellation-heavy kernels (prime power
//! sums, the logarithmic-integral panels and the derivative recurrences behind
//! Taylor coefficients) are generic over [`Real`] and run in double-double when
//! more than 16 digits are requested.

mod complex;
mod dd;

pub use complex::Cx;
pub use dd::Dd;

use crate::error::{Error, Result};
use crate::exec::ExecPolicy;
use serde::Serialize;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Largest precision the double-double backend can honour.
pub const MAX_DIGITS: u32 = 32;
pub const MIN_DIGITS: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionConfig {
    pub digits: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Scheduling of the data-parallel loops. Never affects results.
    #[serde(skip)]
    pub exec: ExecPolicy,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { digits: 30, abs_tol: 1e-12, rel_tol: 1e-10, exec: ExecPolicy::default() }
    }
}

impl PrecisionConfig {
    pub fn new(digits: u32, abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let cfg = PrecisionConfig { digits, abs_tol, rel_tol, exec: ExecPolicy::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_digits(digits: u32) -> Result<Self> {
        Self::new(digits, Self::default().abs_tol, Self::default().rel_tol)
    }

    pub fn with_exec(mut self, exec: ExecPolicy) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < MIN_DIGITS {
            return Err(Error::Config(format!("digits = {} is below the minimum of {MIN_DIGITS}", self.digits)));
        }
        if self.digits > MAX_DIGITS {
            return Err(Error::Config(format!(
                "digits = {} exceeds the double-double backend limit of {MAX_DIGITS}",
                self.digits
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) || !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config("abs_tol and rel_tol must be positive and finite".into()));
        }
        Ok(())
    }

    /// True when the requested digits exceed what f64 carries.
    pub fn extended(&self) -> bool {
        self.digits > 16
    }

    /// Unit roundoff of the backend selected by `digits`.
    pub fn unit_roundoff(&self) -> f64 {
        if self.extended() { Dd::EPSILON } else { f64::EPSILON / 2.0 }
    }
}

/// Scalar field used by the precision-sensitive kernels.
pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const UNIT_ROUNDOFF: f64;
    const EULER_GAMMA: Self;
    const LI2: Self;

    fn from_f64(x: f64) -> Self;
    fn from_u64(n: u64) -> Self;
    fn to_f64(self) -> f64;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn abs(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn mul_f64(self, x: f64) -> Self;
}

impl Real for f64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    const LI2: f64 = 1.045_163_780_117_492_8;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline]
    fn mul_f64(self, x: f64) -> Self {
        self * x
    }
}

impl Real for Dd {
    const UNIT_ROUNDOFF: f64 = Dd::EPSILON;
    const EULER_GAMMA: Dd = Dd::EULER_GAMMA;
    const LI2: Dd = Dd::LI2;

    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd::from_f64(x)
    }
    #[inline]
    fn from_u64(n: u64) -> Self {
        Dd::from_u64(n)
    }
    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    #[inline]
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    #[inline]
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        Dd::sin_cos(self)
    }
    #[inline]
    fn mul_f64(self, x: f64) -> Self {
        Dd::mul_f64(self, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_bounds_are_enforced() {
        assert!(PrecisionConfig::with_digits(14).is_err());
        assert!(PrecisionConfig::with_digits(15).is_ok());
        assert!(PrecisionConfig::with_digits(32).is_ok());
        assert!(matches!(PrecisionConfig::with_digits(40), Err(Error::Config(_))));
        assert!(PrecisionConfig::new(30, 0.0, 1e-10).is_err());
        assert_eq!(PrecisionConfig::default().digits, 30);
    }

    #[test]
    fn backend_follows_digits() {
        assert!(!PrecisionConfig::with_digits(16).unwrap().extended());
        assert!(PrecisionConfig::with_digits(17).unwrap().extended());
        assert_eq!(PrecisionConfig::with_digits(15).unwrap().unit_roundoff(), f64::EPSILON / 2.0);
    }
}
