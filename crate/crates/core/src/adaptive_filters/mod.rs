//! Adaptive filters sharing one step contract: consume `(x(n), d(n))`,
//! produce `y(n) = w^H(n−1) x(n)`, the a-priori error `e(n) = d(n) − y(n)`
//! and the updated weights.
//!
//! * [`CrmcFilter`]: recursive maximum correntropy with Gaussian kernel.
//! * [`RlsFilter`]: exponentially weighted complex RLS (CRMC with ψ ≡ 1).
//! * [`ClmsFilter`], [`LmpFilter`], [`CmpnFilter`]: stochastic-gradient
//!   baselines.
//!
//! Any non-finite weight after an update is reported as
//! [`Error::NonFinite`](crate::Error::NonFinite); the filter must then be
//! discarded.

mod gradient;
mod kernel;
mod recursive;

pub use gradient::{ClmsFilter, CmpnFilter, LmpFilter, DEFAULT_CMPN_GRID};
pub use kernel::{crmc_cost, crmc_cost_at, crmc_cost_gradient, gaussian_kernel};
pub use recursive::{
    batch_fixed_point, crmc_gain, spectral_condition, CrmcFilter, CrmcParams, FixedPoint, RlsFilter,
};

use num_complex::Complex;

use crate::error::Result;
use crate::scalar::Real;

/// Outcome of one adaptation step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult<'a, T> {
    /// `y(n) = w^H(n−1) x(n)`.
    pub output: Complex<T>,
    /// `e(n) = d(n) − y(n)`.
    pub prior_error: Complex<T>,
    /// Correntropy weighting factor; `Some(1)` for RLS, `None` for the
    /// gradient filters.
    pub psi: Option<T>,
    /// Largest eigenvalue of `ψ F x x^H / (λ + ψ x^H F x)` for the
    /// recursive filters.
    pub spectral: Option<T>,
    pub weights_after: &'a [Complex<T>],
}

pub trait AdaptiveFilter<T: Real>: Send {
    fn name(&self) -> &'static str;

    /// Number of taps / array elements.
    fn order(&self) -> usize;

    fn weights(&self) -> &[Complex<T>];

    fn step(&mut self, x: &[Complex<T>], d: Complex<T>) -> Result<StepResult<'_, T>>;
}
