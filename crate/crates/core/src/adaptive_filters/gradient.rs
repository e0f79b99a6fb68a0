//! Stochastic-gradient baselines: complex LMS, least-mean-p-norm and a
//! discretized continuous mixed p-norm filter.
//!
//! All three share the update `w ← w + μ g(|e|) x e*` and differ only in the
//! error weighting `g`. For `p < 2` the weighting `|e|^{p−2}` is singular at
//! `e = 0`; the update is defined as zero there.

use num_complex::Complex;
use num_traits::Zero;

use super::{AdaptiveFilter, StepResult};
use crate::error::{check_len, invalid, Error, Result};
use crate::linalg::{dot_h, is_finite};
use crate::scalar::Real;

/// Norm orders used by [`CmpnFilter`] when none are given.
pub const DEFAULT_CMPN_GRID: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];

fn check_mu<T: Real>(mu: T) -> Result<()> {
    if !(mu > T::zero()) || !mu.is_finite() {
        return Err(invalid(format!("step size must be positive, got {mu}")));
    }
    Ok(())
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if !(p >= T::one() && p <= T::lit(2.0)) {
        return Err(invalid(format!("norm order must lie in [1, 2], got {p}")));
    }
    Ok(())
}

/// Shared `e = d − w^H x; w ← w + μ g x e*` step.
fn gradient_step<'a, T: Real>(
    w: &'a mut [Complex<T>],
    x: &[Complex<T>],
    d: Complex<T>,
    step: T,
) -> Result<StepResult<'a, T>> {
    check_len(w.len(), x.len())?;
    let output = dot_h(w, x);
    let e = d - output;
    if !e.is_zero() {
        let coeff = e.conj() * step;
        for (wi, xi) in w.iter_mut().zip(x) {
            *wi += xi * coeff;
        }
    }
    if !is_finite(w) {
        return Err(Error::NonFinite);
    }
    Ok(StepResult {
        output,
        prior_error: e,
        psi: None,
        spectral: None,
        weights_after: w,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClmsFilter<T> {
    w: Vec<Complex<T>>,
    mu: T,
}

impl<T: Real> ClmsFilter<T> {
    pub fn new(order: usize, mu: T) -> Result<Self> {
        if order == 0 {
            return Err(invalid("filter order must be at least 1"));
        }
        check_mu(mu)?;
        Ok(Self {
            w: vec![Complex::zero(); order],
            mu,
        })
    }

    pub fn mu(&self) -> T {
        self.mu
    }
}

impl<T: Real> AdaptiveFilter<T> for ClmsFilter<T> {
    fn name(&self) -> &'static str {
        "clms"
    }

    fn order(&self) -> usize {
        self.w.len()
    }

    fn weights(&self) -> &[Complex<T>] {
        &self.w
    }

    fn step(&mut self, x: &[Complex<T>], d: Complex<T>) -> Result<StepResult<'_, T>> {
        let mu = self.mu;
        gradient_step(&mut self.w, x, d, mu)
    }
}

/// Least-mean-p-norm: `w ← w + μ |e|^{p−2} x e*`.
#[derive(Debug, Clone, PartialEq)]
pub struct LmpFilter<T> {
    w: Vec<Complex<T>>,
    mu: T,
    p: T,
}

impl<T: Real> LmpFilter<T> {
    pub fn new(order: usize, mu: T, p: T) -> Result<Self> {
        if order == 0 {
            return Err(invalid("filter order must be at least 1"));
        }
        check_mu(mu)?;
        check_p(p)?;
        Ok(Self {
            w: vec![Complex::zero(); order],
            mu,
            p,
        })
    }
}

impl<T: Real> AdaptiveFilter<T> for LmpFilter<T> {
    fn name(&self) -> &'static str {
        "lmp"
    }

    fn order(&self) -> usize {
        self.w.len()
    }

    fn weights(&self) -> &[Complex<T>] {
        &self.w
    }

    fn step(&mut self, x: &[Complex<T>], d: Complex<T>) -> Result<StepResult<'_, T>> {
        check_len(self.w.len(), x.len())?;
        let mag = (d - dot_h(&self.w, x)).norm();
        let g = if mag > T::zero() {
            mag.powf(self.p - T::lit(2.0))
        } else {
            T::zero()
        };
        let step = self.mu * g;
        gradient_step(&mut self.w, x, d, step)
    }
}

/// Continuous mixed p-norm, discretized with uniform weights over `p_grid`:
/// `w ← w + μ x e* · mean_p(p |e|^{p−2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmpnFilter<T> {
    w: Vec<Complex<T>>,
    mu: T,
    p_grid: Vec<T>,
}

impl<T: Real> CmpnFilter<T> {
    pub fn new(order: usize, mu: T, p_grid: Vec<T>) -> Result<Self> {
        if order == 0 {
            return Err(invalid("filter order must be at least 1"));
        }
        check_mu(mu)?;
        if p_grid.is_empty() {
            return Err(invalid("CMPN needs at least one norm order"));
        }
        for p in &p_grid {
            check_p(*p)?;
        }
        Ok(Self {
            w: vec![Complex::zero(); order],
            mu,
            p_grid,
        })
    }

    pub fn with_default_grid(order: usize, mu: T) -> Result<Self> {
        Self::new(
            order,
            mu,
            DEFAULT_CMPN_GRID.iter().map(|&p| T::lit(p)).collect(),
        )
    }

    pub fn p_grid(&self) -> &[T] {
        &self.p_grid
    }

    fn weighting(&self, mag: T) -> T {
        if !(mag > T::zero()) {
            return T::zero();
        }
        let two = T::lit(2.0);
        let sum: T = self.p_grid.iter().map(|&p| p * mag.powf(p - two)).sum();
        sum / T::lit(self.p_grid.len() as f64)
    }
}

impl<T: Real> AdaptiveFilter<T> for CmpnFilter<T> {
    fn name(&self) -> &'static str {
        "cmpn"
    }

    fn order(&self) -> usize {
        self.w.len()
    }

    fn weights(&self) -> &[Complex<T>] {
        &self.w
    }

    fn step(&mut self, x: &[Complex<T>], d: Complex<T>) -> Result<StepResult<'_, T>> {
        check_len(self.w.len(), x.len())?;
        let mag = (d - dot_h(&self.w, x)).norm();
        let step = self.mu * self.weighting(mag);
        gradient_step(&mut self.w, x, d, step)
    }
}
