//! Special functions and the integration engines behind every integral in the
//! crate: exact step-function integration against prime counts, Gauss–Legendre
//! panels for smooth kernels, and explicit tail bounds for truncation.

mod gauss;
mod smooth;
mod special;
mod step;
mod tail;

pub use gauss::GaussLegendre;
pub use smooth::{integrate_smooth_weighted, li_weighted_orders, SmoothKernel};
pub use special::{exp_integral_e1, li_from_log, li_offset, LI2};
pub use step::{integrate_step_weighted, step_weighted_orders, N_MAX_DEFAULT};
pub use tail::{moment_tail, tail_bound, TailModel};

pub(crate) use smooth::{li_orders_in, sigma_integral};
pub(crate) use step::{log_power_sums, step_orders_in};

use num_complex::Complex64;
use serde::Serialize;

/// Value of a (possibly truncated) integral together with what is known
/// about its error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Total absolute error bound: `numerical_error + tail_bound`.
    pub error_bound: f64,
    /// Rounding and discretisation error of the integral over `[lower, truncation_t]`.
    pub numerical_error: f64,
    /// Bound on the neglected part beyond `truncation_t` (0 for finite integrals).
    pub tail_bound: f64,
    pub truncation_t: f64,
    pub lower_limit: f64,
    pub tail_model: TailModel,
    /// A second tail estimate under a different growth model, reported only.
    pub alt_tail: Option<(TailModel, f64)>,
    pub notes: Vec<String>,
}

impl QuadratureResult {
    pub fn finite(value: Complex64, numerical_error: f64, lower_limit: f64, truncation_t: f64) -> Self {
        QuadratureResult {
            value,
            error_bound: numerical_error,
            numerical_error,
            tail_bound: 0.0,
            truncation_t,
            lower_limit,
            tail_model: TailModel::None,
            alt_tail: None,
            notes: Vec::new(),
        }
    }

    /// Attach a tail bound under `model`, replacing any previous one.
    pub fn with_tail(mut self, model: TailModel, bound: f64) -> Self {
        self.tail_model = model;
        self.tail_bound = bound;
        self.error_bound = self.numerical_error + bound;
        self
    }
}
