use num_complex::Complex;
use num_traits::Zero;

use crate::linalg::dot_h;
use crate::scalar::Real;

/// `exp(−|e|² / 2σ²)`; also the correntropy weighting factor ψ.
#[inline]
pub fn gaussian_kernel<T: Real>(e: Complex<T>, sigma: T) -> T {
    (-e.norm_sqr() / (T::lit(2.0) * sigma * sigma)).exp()
}

/// Exponentially weighted correntropy `Σ_i λ^{n−i} κ(e(i))` of an error
/// sequence, oldest error first.
pub fn crmc_cost<T: Real>(errors: &[Complex<T>], lambda: T, sigma: T) -> T {
    errors.iter().fold(T::zero(), |acc, e| {
        acc * lambda + gaussian_kernel(*e, sigma)
    })
}

/// Cost evaluated at a fixed weight vector, `e(i) = d(i) − w^H x(i)`.
pub fn crmc_cost_at<T: Real>(
    w: &[Complex<T>],
    xs: &[Vec<Complex<T>>],
    ds: &[Complex<T>],
    lambda: T,
    sigma: T,
) -> T {
    let errors: Vec<_> = xs.iter().zip(ds).map(|(x, d)| d - dot_h(w, x)).collect();
    crmc_cost(&errors, lambda, sigma)
}

/// Gradient of [`crmc_cost_at`] with respect to the weights.
///
/// Component `k` packs `∂J/∂Re w_k + j ∂J/∂Im w_k`, which evaluates to
/// `σ^{-2} Σ_i λ^{n−i} ψ(i) x_k(i) e*(i)`.
pub fn crmc_cost_gradient<T: Real>(
    w: &[Complex<T>],
    xs: &[Vec<Complex<T>>],
    ds: &[Complex<T>],
    lambda: T,
    sigma: T,
) -> Vec<Complex<T>> {
    let mut grad = vec![Complex::zero(); w.len()];
    let inv_s2 = (sigma * sigma).recip();
    for (x, d) in xs.iter().zip(ds) {
        for g in grad.iter_mut() {
            *g *= lambda;
        }
        let e = d - dot_h(w, x);
        let coeff = e.conj() * (gaussian_kernel(e, sigma) * inv_s2);
        for (g, xi) in grad.iter_mut().zip(x) {
            *g += xi * coeff;
        }
    }
    grad
}
