//! Random signal generators: QPSK symbols, symmetric alpha-stable variates
//! and isotropic complex alpha-stable noise.
//!
//! Real SαS variates use the Chambers–Mallows–Stuck transform of one uniform
//! and one exponential draw; the characteristic function is
//! `exp(-dispersion * |t|^alpha)`.
//!
//! Isotropic complex variates are sub-Gaussian: `sqrt(A) * (G1 + j G2)` with
//! `G1, G2` standard normal and `A` a positive (alpha/2)-stable variate whose
//! Laplace transform is `exp(-dispersion * s^(alpha/2))`. The joint
//! characteristic function of real and imaginary parts is then
//! `exp(-dispersion * 2^(-alpha/2) * |theta|^alpha)`.

use num_complex::Complex;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Open01, StandardNormal};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Characteristic exponent and dispersion of a symmetric alpha-stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStableParams<T> {
    alpha: T,
    dispersion: T,
}

impl<T: Real> AlphaStableParams<T> {
    pub fn new(alpha: T, dispersion: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(invalid(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if !(dispersion > T::zero()) || !dispersion.is_finite() {
            return Err(invalid(format!(
                "dispersion must be positive, got {dispersion}"
            )));
        }
        Ok(Self { alpha, dispersion })
    }

    /// Unit-dispersion law.
    pub fn standard(alpha: T) -> Result<Self> {
        Self::new(alpha, T::one())
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn dispersion(&self) -> T {
        self.dispersion
    }

    /// Same dispersion, Gaussian (`alpha = 2`) law.
    pub fn gaussian_surrogate(&self) -> Self {
        Self {
            alpha: T::lit(2.0),
            dispersion: self.dispersion,
        }
    }

    /// `exp(-dispersion |t|^alpha)`.
    pub fn real_characteristic_function(&self, t: T) -> T {
        (-self.dispersion * t.abs().powf(self.alpha)).exp()
    }

    /// `exp(-dispersion 2^(-alpha/2) |theta|^alpha)`.
    pub fn isotropic_characteristic_function(&self, theta1: T, theta2: T) -> T {
        let r = theta1.hypot(theta2);
        let c = T::lit(2.0).powf(-self.alpha / T::lit(2.0));
        (-self.dispersion * c * r.powf(self.alpha)).exp()
    }
}

/// Seeded, reproducible random stream.
///
/// Backed by ChaCha8 so that independent sub-streams can be derived from a
/// single seed without correlation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngHandle {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngHandle {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream `stream` of the generator seeded with `seed`.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32-bit words consumed so far.
    pub fn word_position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn open01<T: Real>(&mut self) -> T {
        let u: f64 = Open01.sample(&mut self.rng);
        T::lit(u)
    }

    #[inline]
    pub fn exp1<T: Real>(&mut self) -> T {
        let w: f64 = Exp1.sample(&mut self.rng);
        T::lit(w)
    }

    #[inline]
    pub fn standard_normal<T: Real>(&mut self) -> T {
        let g: f64 = StandardNormal.sample(&mut self.rng);
        T::lit(g)
    }

    #[inline]
    pub fn bit(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Circular complex Gaussian with `E|z|^2 = power`.
    pub fn complex_gaussian<T: Real>(&mut self, power: T) -> Complex<T> {
        let s = (power / T::lit(2.0)).sqrt();
        let re: T = self.standard_normal();
        let im: T = self.standard_normal();
        Complex::new(re * s, im * s)
    }
}

/// One symmetric alpha-stable variate with characteristic function
/// `exp(-dispersion |t|^alpha)`.
pub fn sample_sas_real<T: Real>(params: &AlphaStableParams<T>, rng: &mut RngHandle) -> T {
    let alpha = params.alpha;
    let scale = params.dispersion.powf(alpha.recip());
    let u: T = rng.open01();
    let w: T = rng.exp1();
    let v = T::PI() * (u - T::lit(0.5));
    let one = T::one();
    let x = if alpha == one {
        v.tan()
    } else {
        let cos_v = v.cos();
        (alpha * v).sin() / cos_v.powf(alpha.recip())
            * (((one - alpha) * v).cos() / w).powf((one - alpha) / alpha)
    };
    x * scale
}

/// Positive stable variate of index `a` in (0, 1) with Laplace transform
/// `exp(-s^a)` (Kanter's representation).
fn sample_positive_stable<T: Real>(a: T, rng: &mut RngHandle) -> T {
    let one = T::one();
    let u: T = rng.open01::<T>() * T::PI();
    let w: T = rng.exp1();
    let ratio = (a * u).sin() / u.sin().powf(a.recip());
    let tail = (((one - a) * u).sin() / w).powf((one - a) / a);
    ratio * tail
}

/// One isotropic complex alpha-stable variate whose real/imaginary parts have
/// joint characteristic function `exp(-dispersion 2^(-alpha/2) |theta|^alpha)`.
///
/// `alpha = 2` yields circular Gaussian noise with per-component variance
/// equal to the dispersion.
pub fn sample_isotropic_complex_sas<T: Real>(
    params: &AlphaStableParams<T>,
    rng: &mut RngHandle,
) -> Complex<T> {
    let two = T::lit(2.0);
    let mixing = if params.alpha >= two {
        params.dispersion
    } else {
        let a = params.alpha / two;
        params.dispersion.powf(a.recip()) * sample_positive_stable(a, rng)
    };
    let s = mixing.sqrt();
    let g1: T = rng.standard_normal();
    let g2: T = rng.standard_normal();
    Complex::new(s * g1, s * g2)
}

/// QPSK symbol source over `{(±1 ± j)/√2} · amplitude`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpskSource<T> {
    amplitude: T,
    rng: RngHandle,
}

impl<T: Real> QpskSource<T> {
    pub fn new(amplitude: T, rng: RngHandle) -> Result<Self> {
        if !(amplitude > T::zero()) || !amplitude.is_finite() {
            return Err(invalid(format!(
                "QPSK amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self { amplitude, rng })
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn next_symbol(&mut self) -> Complex<T> {
        let c = T::FRAC_1_SQRT_2() * self.amplitude;
        let re = if self.rng.bit() { c } else { -c };
        let im = if self.rng.bit() { c } else { -c };
        Complex::new(re, im)
    }

    pub fn qpsk_stream(&mut self, n: usize) -> Result<Vec<Complex<T>>> {
        if n == 0 {
            return Err(invalid("QPSK stream length must be at least 1"));
        }
        Ok((0..n).map(|_| self.next_symbol()).collect())
    }
}

/// Waveform emitted by one source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalSpec<T> {
    Qpsk {
        amplitude: T,
    },
    /// Isotropic complex alpha-stable samples.
    AlphaStable(AlphaStableParams<T>),
}

impl<T: Real> SignalSpec<T> {
    /// Gaussian replacement for stable waveforms; QPSK is unchanged.
    pub fn gaussian_surrogate(&self) -> Self {
        match self {
            SignalSpec::Qpsk { .. } => *self,
            SignalSpec::AlphaStable(p) => SignalSpec::AlphaStable(p.gaussian_surrogate()),
        }
    }
}

/// Stateful sample stream for a [`SignalSpec`].
#[derive(Debug, Clone)]
pub enum SignalStream<T> {
    Qpsk(QpskSource<T>),
    AlphaStable {
        params: AlphaStableParams<T>,
        rng: RngHandle,
    },
}

impl<T: Real> SignalStream<T> {
    pub fn new(spec: &SignalSpec<T>, rng: RngHandle) -> Result<Self> {
        Ok(match spec {
            SignalSpec::Qpsk { amplitude } => SignalStream::Qpsk(QpskSource::new(*amplitude, rng)?),
            SignalSpec::AlphaStable(params) => SignalStream::AlphaStable {
                params: *params,
                rng,
            },
        })
    }

    pub fn next_sample(&mut self) -> Complex<T> {
        match self {
            SignalStream::Qpsk(q) => q.next_symbol(),
            SignalStream::AlphaStable { params, rng } => sample_isotropic_complex_sas(params, rng),
        }
    }
}
