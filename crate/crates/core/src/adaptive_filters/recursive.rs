//! Recursive maximum-correntropy (CRMC) and RLS filters.
//!
//! Both maintain `F(n) = R^{-1}(n)` for the weighted correlation
//! `R(n) = λ R(n−1) + ψ(n) x(n) x^H(n)` through the rank-one inverse update
//!
//! ```text
//! Φ(n) = ψ F(n−1) x / (λ + ψ x^H F(n−1) x)
//! F(n) = λ^{-1} (F(n−1) − Φ(n) x^H F(n−1))
//! w(n) = w(n−1) + Φ(n) e*(n),      e(n) = d(n) − w^H(n−1) x(n)
//! ```
//!
//! CRMC uses `ψ(n) = exp(−|e(n)|² / 2σ²)` evaluated with `w(n−1)`; RLS fixes
//! `ψ = 1`. `F(0) = δ I`.

use num_complex::Complex;
use num_traits::Zero;

use super::kernel::gaussian_kernel;
use super::{AdaptiveFilter, StepResult};
use crate::error::{check_len, invalid, Error, Result};
use crate::linalg::{dot_h, is_finite, norm, CMatrix};
use crate::scalar::Real;

/// Forgetting factor, kernel size and `F(0) = δ I` scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrmcParams<T> {
    pub lambda: T,
    pub sigma: T,
    pub delta: T,
}

impl<T: Real> Default for CrmcParams<T> {
    fn default() -> Self {
        Self {
            lambda: T::lit(0.99),
            sigma: T::lit(8.0),
            delta: T::lit(100.0),
        }
    }
}

impl<T: Real> CrmcParams<T> {
    pub fn validate(&self) -> Result<()> {
        validate_lambda_delta(self.lambda, self.delta)?;
        if !(self.sigma > T::zero()) {
            return Err(invalid(format!(
                "kernel size must be positive, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

fn validate_lambda_delta<T: Real>(lambda: T, delta: T) -> Result<()> {
    if !(lambda > T::zero() && lambda <= T::one()) {
        return Err(invalid(format!(
            "forgetting factor must lie in (0, 1], got {lambda}"
        )));
    }
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(invalid(format!(
            "initialization scale must be positive, got {delta}"
        )));
    }
    Ok(())
}

/// Weight vector plus inverse weighted correlation matrix.
#[derive(Debug, Clone, PartialEq)]
struct RecursiveCore<T> {
    w: Vec<Complex<T>>,
    f: CMatrix<T>,
    lambda: T,
    fx: Vec<Complex<T>>,
}

struct CoreStep<T> {
    output: Complex<T>,
    error: Complex<T>,
    psi: T,
    spectral: T,
}

impl<T: Real> RecursiveCore<T> {
    fn new(order: usize, lambda: T, delta: T) -> Result<Self> {
        if order == 0 {
            return Err(invalid("filter order must be at least 1"));
        }
        validate_lambda_delta(lambda, delta)?;
        Ok(Self {
            w: vec![Complex::zero(); order],
            f: CMatrix::scaled_identity(order, delta),
            lambda,
            fx: vec![Complex::zero(); order],
        })
    }

    fn update(
        &mut self,
        x: &[Complex<T>],
        d: Complex<T>,
        weighting: impl FnOnce(Complex<T>) -> T,
    ) -> Result<CoreStep<T>> {
        check_len(self.w.len(), x.len())?;
        let output = dot_h(&self.w, x);
        let error = d - output;
        let psi = weighting(error);

        self.f.mul_vec_into(x, &mut self.fx);
        let q = dot_h(x, &self.fx).re;
        let denom = self.lambda + psi * q;
        if !(denom > T::zero()) {
            return Err(Error::DegenerateGain(denom.to_f64_lossy()));
        }
        let scale = psi / denom;

        // F ← λ^{-1}(F − Φ (F x)^H) with Φ = scale·F x; x^H F = (F x)^H for Hermitian F.
        let inv_lambda = self.lambda.recip();
        self.f
            .scale_add_outer(inv_lambda, -scale * inv_lambda, &self.fx, &self.fx);
        self.f.hermitize();

        let ec = error.conj();
        for (wi, fxi) in self.w.iter_mut().zip(&self.fx) {
            *wi += fxi * (ec * scale);
        }
        if !is_finite(&self.w) || !self.f.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(CoreStep {
            output,
            error,
            psi,
            spectral: psi * q / denom,
        })
    }
}

/// Complex recursive maximum-correntropy filter.
#[derive(Debug, Clone, PartialEq)]
pub struct CrmcFilter<T> {
    core: RecursiveCore<T>,
    params: CrmcParams<T>,
}

impl<T: Real> CrmcFilter<T> {
    pub fn new(order: usize, params: CrmcParams<T>) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            core: RecursiveCore::new(order, params.lambda, params.delta)?,
            params,
        })
    }

    pub fn params(&self) -> &CrmcParams<T> {
        &self.params
    }

    /// Current `F(n)`.
    pub fn inverse_correlation(&self) -> &CMatrix<T> {
        &self.core.f
    }

    /// Overrides the weights, e.g. to warm-start from a known solution.
    pub fn set_weights(&mut self, w: &[Complex<T>]) -> Result<()> {
        check_len(self.core.w.len(), w.len())?;
        self.core.w.copy_from_slice(w);
        Ok(())
    }

    /// One recursion step with an externally supplied weighting factor
    /// instead of the kernel of the a-priori error.
    pub fn step_with_psi(
        &mut self,
        x: &[Complex<T>],
        d: Complex<T>,
        psi: T,
    ) -> Result<StepResult<'_, T>> {
        let s = self.core.update(x, d, |_| psi)?;
        Ok(StepResult {
            output: s.output,
            prior_error: s.error,
            psi: Some(s.psi),
            spectral: Some(s.spectral),
            weights_after: &self.core.w,
        })
    }
}

impl<T: Real> AdaptiveFilter<T> for CrmcFilter<T> {
    fn name(&self) -> &'static str {
        "crmc"
    }

    fn order(&self) -> usize {
        self.core.w.len()
    }

    fn weights(&self) -> &[Complex<T>] {
        &self.core.w
    }

    fn step(&mut self, x: &[Complex<T>], d: Complex<T>) -> Result<StepResult<'_, T>> {
        let sigma = self.params.sigma;
        let s = self.core.update(x, d, |e| gaussian_kernel(e, sigma))?;
        Ok(StepResult {
            output: s.output,
            prior_error: s.error,
            psi: Some(s.psi),
            spectral: Some(s.spectral),
            weights_after: &self.core.w,
        })
    }
}

/// Exponentially weighted complex RLS.
#[derive(Debug, Clone, PartialEq)]
pub struct RlsFilter<T> {
    core: RecursiveCore<T>,
    delta: T,
}

impl<T: Real> RlsFilter<T> {
    pub fn new(order: usize, lambda: T, delta: T) -> Result<Self> {
        Ok(Self {
            core: RecursiveCore::new(order, lambda, delta)?,
            delta,
        })
    }

    pub fn lambda(&self) -> T {
        self.core.lambda
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn inverse_correlation(&self) -> &CMatrix<T> {
        &self.core.f
    }
}

impl<T: Real> AdaptiveFilter<T> for RlsFilter<T> {
    fn name(&self) -> &'static str {
        "rls"
    }

    fn order(&self) -> usize {
        self.core.w.len()
    }

    fn weights(&self) -> &[Complex<T>] {
        &self.core.w
    }

    fn step(&mut self, x: &[Complex<T>], d: Complex<T>) -> Result<StepResult<'_, T>> {
        let s = self.core.update(x, d, |_| T::one())?;
        Ok(StepResult {
            output: s.output,
            prior_error: s.error,
            psi: Some(s.psi),
            spectral: Some(s.spectral),
            weights_after: &self.core.w,
        })
    }
}

/// Gain vector `Φ = ψ F x / (λ + ψ x^H F x)` for the filter's current `F`.
pub fn crmc_gain<T: Real>(
    filter: &CrmcFilter<T>,
    x: &[Complex<T>],
    psi: T,
) -> Result<Vec<Complex<T>>> {
    check_len(filter.order(), x.len())?;
    let fx = filter.core.f.mul_vec(x);
    let q = dot_h(x, &fx).re;
    let denom = filter.params.lambda + psi * q;
    if !(denom > T::zero()) {
        return Err(Error::DegenerateGain(denom.to_f64_lossy()));
    }
    let scale = psi / denom;
    Ok(fx.into_iter().map(|v| v * scale).collect())
}

/// Largest eigenvalue of the rank-one matrix `ψ F x x^H / (λ + ψ x^H F x)`.
///
/// For a rank-one `u v^H` the only nonzero eigenvalue is `v^H u`, here
/// `ψ x^H F x / (λ + ψ x^H F x)`, which lies in `[0, 1)` when `F` is positive
/// definite.
pub fn spectral_condition<T: Real>(filter: &CrmcFilter<T>, x: &[Complex<T>], psi: T) -> Result<T> {
    check_len(filter.order(), x.len())?;
    let fx = filter.core.f.mul_vec(x);
    let q = dot_h(x, &fx).re;
    let num = psi * q;
    Ok(num / (filter.params.lambda + num))
}

/// Stationary point of the correntropy cost on a frozen dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint<T> {
    pub weights: Vec<Complex<T>>,
    /// `ψ(i)` at `weights`.
    pub psi: Vec<T>,
    pub passes: usize,
    pub converged: bool,
}

/// Runs the recursion with `λ = 1` repeatedly over a frozen dataset until the
/// weighting factors and the weights agree.
///
/// The first pass is the plain online CRMC recursion. Each later pass restarts
/// from `F(0) = δ I` and replays the data with `ψ(i)` frozen at the previous
/// pass's weights, so each pass solves the weighted normal equations
/// `(Σ ψ x x^H + I/δ) w = Σ ψ x d*` exactly. Iteration stops once the relative
/// weight change drops below `tol`.
pub fn batch_fixed_point<T: Real>(
    xs: &[Vec<Complex<T>>],
    ds: &[Complex<T>],
    sigma: T,
    delta: T,
    tol: T,
    max_passes: usize,
) -> Result<FixedPoint<T>> {
    check_len(xs.len(), ds.len())?;
    let order = xs
        .first()
        .map(Vec::len)
        .ok_or_else(|| invalid("dataset is empty"))?;
    let params = CrmcParams {
        lambda: T::one(),
        sigma,
        delta,
    };
    let mut online = CrmcFilter::new(order, params)?;
    for (x, d) in xs.iter().zip(ds) {
        online.step(x, *d)?;
    }
    let mut w = online.weights().to_vec();
    let psi_at = |w: &[Complex<T>]| -> Vec<T> {
        xs.iter()
            .zip(ds)
            .map(|(x, d)| gaussian_kernel(d - dot_h(w, x), sigma))
            .collect()
    };

    let mut passes = 1;
    let mut converged = false;
    while passes < max_passes {
        let psi = psi_at(&w);
        let mut f = CrmcFilter::new(order, params)?;
        for ((x, d), p) in xs.iter().zip(ds).zip(&psi) {
            f.step_with_psi(x, *d, *p)?;
        }
        passes += 1;
        let next = f.weights().to_vec();
        let change: Vec<_> = next.iter().zip(&w).map(|(a, b)| a - b).collect();
        let done = norm(&change) <= tol * norm(&next);
        w = next;
        if done {
            converged = true;
            break;
        }
    }
    let psi = psi_at(&w);
    Ok(FixedPoint {
        weights: w,
        psi,
        passes,
        converged,
    })
}
