//! Numerical laboratory for the prime-count integral
//! `theta(z) = ∫_2^∞ (π(t) − Li(t)) t^(−z−1) dt`: exact prime counting,
//! zeta evaluation, prime-sum identities, Taylor coefficients of `theta` with
//! radius-of-convergence estimates, and a rational model function with known
//! poles used to calibrate those estimates.

pub mod counterexample;
pub mod error;
pub mod exec;
pub mod precision;
pub mod prime_series;
pub mod primes;
pub mod quadrature;
pub mod theta;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use precision::PrecisionConfig;
