//! Minimal dense complex linear algebra for the filter recursions.
//!
//! Vectors are plain slices of `Complex<T>`; matrices are square and stored
//! row-major in [`CMatrix`].

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

/// `a^H b = sum conj(a_i) b_i`.
#[inline]
pub fn dot_h<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Complex::zero();
    for (ai, bi) in a.iter().zip(b) {
        acc += ai.conj() * bi;
    }
    acc
}

#[inline]
pub fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

#[inline]
pub fn norm<T: Real>(a: &[Complex<T>]) -> T {
    norm_sqr(a).sqrt()
}

pub fn is_finite<T: Real>(a: &[Complex<T>]) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::zero(); n * n],
        }
    }

    pub fn scaled_identity(n: usize, scale: T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex::new(scale, T::zero());
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, T::one())
    }

    pub fn from_row_major(n: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_len(n * n, data.len())?;
        Ok(Self { n, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    /// `out = self * x`.
    pub fn mul_vec_into(&self, x: &[Complex<T>], out: &mut [Complex<T>]) {
        let n = self.n;
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = Complex::zero();
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *o = acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); self.n];
        self.mul_vec_into(x, &mut out);
        out
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// `self = scale * self + weight * u v^H`.
    pub fn scale_add_outer(&mut self, scale: T, weight: T, u: &[Complex<T>], v: &[Complex<T>]) {
        let n = self.n;
        for i in 0..n {
            let ui = u[i] * weight;
            for j in 0..n {
                let idx = i * n + j;
                self.data[idx] = self.data[idx] * scale + ui * v[j].conj();
            }
        }
    }

    /// Replaces the matrix by its Hermitian part `(A + A^H) / 2`.
    pub fn hermitize(&mut self) {
        let n = self.n;
        let half = T::lit(0.5);
        for i in 0..n {
            let d = self.data[i * n + i];
            self.data[i * n + i] = Complex::new(d.re, T::zero());
            for j in (i + 1)..n {
                let a = self.data[i * n + j];
                let b = self.data[j * n + i];
                let s = (a + b.conj()) * half;
                self.data[i * n + j] = s;
                self.data[j * n + i] = s.conj();
            }
        }
    }

    /// `max |A - A^H|` over all entries.
    pub fn hermitian_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `max |A - I|` over all entries.
    pub fn identity_defect(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j {
                    Complex::one()
                } else {
                    Complex::zero()
                };
                worst = worst.max((self.get(i, j) - target).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        is_finite(&self.data)
    }
}

/// Cholesky factor `L` (lower, row-major) of a Hermitian positive definite matrix.
pub fn cholesky<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.dim();
    let mut l = CMatrix::zeros(n);
    for j in 0..n {
        let mut diag = a.get(j, j).re;
        for k in 0..j {
            diag -= l.get(j, k).norm_sqr();
        }
        if !(diag > T::zero()) || !diag.is_finite() {
            return Err(Error::Singular);
        }
        let ljj = diag.sqrt();
        l.set(j, j, Complex::new(ljj, T::zero()));
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

/// Solves `A x = b` for Hermitian positive definite `A`.
pub fn solve_hpd<T: Real>(a: &CMatrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = a.dim();
    check_len(n, b.len())?;
    let l = cholesky(a)?;
    let mut y = vec![Complex::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i).re;
    }
    let mut x = vec![Complex::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l.get(k, i).conj() * x[k];
        }
        x[i] = s / l.get(i, i).re;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn dot_h_conjugates_left_operand() {
        let a = [c(0.0, 1.0)];
        let b = [c(0.0, 1.0)];
        assert_eq!(dot_h(&a, &b), c(1.0, 0.0));
    }

    #[test]
    fn hermitize_removes_antihermitian_part() {
        let mut m =
            CMatrix::from_row_major(2, vec![c(1.0, 0.3), c(2.0, 1.0), c(0.0, 0.0), c(4.0, 0.0)])
                .unwrap();
        m.hermitize();
        assert_eq!(m.hermitian_defect(), 0.0);
        assert_eq!(m.get(0, 1), c(1.0, 0.5));
        assert_eq!(m.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn solve_hpd_recovers_known_solution() {
        let a =
            CMatrix::from_row_major(2, vec![c(4.0, 0.0), c(1.0, -1.0), c(1.0, 1.0), c(3.0, 0.0)])
                .unwrap();
        let x_true = [c(1.0, 2.0), c(-0.5, 0.25)];
        let b = a.mul_vec(&x_true);
        let x = solve_hpd(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_hpd_rejects_singular() {
        let a = CMatrix::<f64>::zeros(3);
        assert_eq!(solve_hpd(&a, &[c(1.0, 0.0); 3]), Err(Error::Singular));
    }
}
