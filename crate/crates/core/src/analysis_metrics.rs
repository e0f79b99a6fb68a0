//! Performance metrics and convergence diagnostics.

use num_complex::Complex;
use num_traits::Zero;

use crate::array_model::{steering_vector, Snapshot, UlaGeometry};
use crate::error::{check_len, invalid, Error, Result};
use crate::linalg::{dot_h, norm_sqr, solve_hpd, CMatrix};
use crate::scalar::Real;

/// Floor applied by [`relative_error_db`] when `w == w_o`.
pub const RELATIVE_ERROR_FLOOR_DB: f64 = -300.0;

/// Display floor of normalized beampatterns.
pub const BEAMPATTERN_FLOOR_DB: f64 = -80.0;

/// `10 log10(‖w_o − w‖² / ‖w_o‖²)`, clamped below at −300 dB.
pub fn relative_error_db<T: Real>(w_o: &[Complex<T>], w: &[Complex<T>]) -> Result<T> {
    check_len(w_o.len(), w.len())?;
    let den = norm_sqr(w_o);
    if !(den > T::zero()) {
        return Err(invalid("reference weight vector must be nonzero"));
    }
    let num: T = w_o.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum();
    let floor = T::lit(RELATIVE_ERROR_FLOOR_DB);
    if num.is_nan() {
        return Ok(T::nan());
    }
    Ok((T::lit(10.0) * (num / den).log10()).max(floor))
}

/// Uniform angle grid over [-90°, 90°] with the given spacing.
pub fn angle_grid<T: Real>(step_deg: T) -> Result<Vec<T>> {
    if !(step_deg > T::zero()) {
        return Err(invalid("angle grid spacing must be positive"));
    }
    let n = (T::lit(180.0) / step_deg).floor().to_usize().unwrap_or(0);
    let mut grid: Vec<T> = (0..=n)
        .map(|i| T::lit(-90.0) + step_deg * T::lit(i as f64))
        .collect();
    if let Some(last) = grid.last_mut() {
        if (*last - T::lit(90.0)).abs() < step_deg * T::lit(1e-9) {
            *last = T::lit(90.0);
        }
    }
    Ok(grid)
}

/// Array gain in dB over an angle grid, normalized to a 0 dB peak.
#[derive(Debug, Clone, PartialEq)]
pub struct Beampattern<T> {
    pub angles_deg: Vec<T>,
    pub gain_db: Vec<T>,
}

impl<T: Real> Beampattern<T> {
    /// Grid angle with the largest gain (first one on ties).
    pub fn peak_angle(&self) -> T {
        let mut best = 0;
        for (i, g) in self.gain_db.iter().enumerate() {
            if *g > self.gain_db[best] {
                best = i;
            }
        }
        self.angles_deg[best]
    }

    /// Gain linearly interpolated at `angle_deg`.
    pub fn null_depth(&self, angle_deg: T) -> Result<T> {
        let a = &self.angles_deg;
        let (lo, hi) = (a[0], a[a.len() - 1]);
        if !(angle_deg >= lo && angle_deg <= hi) {
            return Err(Error::OutOfRange(
                angle_deg.to_f64_lossy(),
                lo.to_f64_lossy(),
                hi.to_f64_lossy(),
            ));
        }
        let idx = a.partition_point(|v| *v < angle_deg);
        if idx < a.len() && a[idx] == angle_deg {
            return Ok(self.gain_db[idx]);
        }
        let (i0, i1) = (idx - 1, idx);
        let t = (angle_deg - a[i0]) / (a[i1] - a[i0]);
        Ok(self.gain_db[i0] + (self.gain_db[i1] - self.gain_db[i0]) * t)
    }
}

/// `20 log10 |w^H a(θ)|` normalized to 0 dB peak, floored at −80 dB.
pub fn beampattern<T: Real>(
    w: &[Complex<T>],
    geometry: UlaGeometry,
    angles_deg: &[T],
) -> Result<Beampattern<T>> {
    check_len(geometry.elements(), w.len())?;
    if !(norm_sqr(w) > T::zero()) {
        return Err(invalid("beampattern of an all-zero weight vector"));
    }
    if angles_deg.is_empty() || angles_deg.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(invalid(
            "angle grid must be non-empty and strictly increasing",
        ));
    }
    let mut raw = Vec::with_capacity(angles_deg.len());
    for &theta in angles_deg {
        let a = steering_vector(theta, w.len())?;
        raw.push(T::lit(20.0) * dot_h(w, &a).norm().log10());
    }
    let peak = raw.iter().copied().fold(T::neg_infinity(), T::max);
    if !peak.is_finite() {
        return Err(Error::NonFinite);
    }
    let floor = T::lit(BEAMPATTERN_FLOOR_DB);
    let gain_db = raw.into_iter().map(|g| (g - peak).max(floor)).collect();
    Ok(Beampattern {
        angles_deg: angles_deg.to_vec(),
        gain_db,
    })
}

/// Sample Wiener solution `(Σ x x^H)^{-1} Σ x d*`.
pub fn sample_wiener<T: Real>(snapshots: &[Snapshot<T>]) -> Result<Vec<Complex<T>>> {
    let m = snapshots
        .first()
        .map(|s| s.x.len())
        .ok_or_else(|| invalid("no snapshots"))?;
    let mut r = CMatrix::zeros(m);
    let mut p = vec![Complex::zero(); m];
    for s in snapshots {
        check_len(m, s.x.len())?;
        r.scale_add_outer(T::one(), T::one(), &s.x, &s.x);
        let dc = s.d.conj();
        for (pi, xi) in p.iter_mut().zip(&s.x) {
            *pi += xi * dc;
        }
    }
    r.hermitize();
    solve_hpd(&r, &p)
}

/// Per-iteration diagnostics of one adaptive run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LearningCurve<T> {
    pub relative_error_db: Vec<T>,
    pub abs_error: Vec<T>,
    pub psi: Vec<T>,
    pub spectral: Vec<T>,
}

impl<T: Real> LearningCurve<T> {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            relative_error_db: Vec::with_capacity(n),
            abs_error: Vec::with_capacity(n),
            psi: Vec::with_capacity(n),
            spectral: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, relative_error_db: T, abs_error: T, psi: T, spectral: T) {
        self.relative_error_db.push(relative_error_db);
        self.abs_error.push(abs_error);
        self.psi.push(psi);
        self.spectral.push(spectral);
    }

    pub fn len(&self) -> usize {
        self.relative_error_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relative_error_db.is_empty()
    }

    pub fn final_relative_error_db(&self) -> Option<T> {
        self.relative_error_db.last().copied()
    }
}

/// Least-squares line `y = intercept + slope·x` with coefficient of
/// determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    check_len(xs.len(), ys.len())?;
    if xs.len() < 2 {
        return Err(invalid("linear fit needs at least two points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(invalid("linear fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return Err(invalid("log-log regression needs positive data"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Median of the finite entries; `None` if there are none.
pub fn median(values: &[f64]) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn relative_error_reference_values() {
        let w_o = [c(1.0, 0.0), c(0.0, 0.0)];
        assert_eq!(relative_error_db(&w_o, &w_o).unwrap(), -300.0);
        assert_eq!(relative_error_db(&w_o, &[c(0.0, 0.0); 2]).unwrap(), 0.0);
        let v = relative_error_db(&w_o, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - 3.010_299_956_639_812).abs() < 1e-12);
        assert!(relative_error_db(&[c(0.0, 0.0)], &[c(1.0, 0.0)]).is_err());
        assert!(relative_error_db(&w_o, &[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn matched_filter_peaks_at_its_angle() {
        let g = UlaGeometry::new(8).unwrap();
        let grid = angle_grid(1.0).unwrap();
        for theta in [-40.0f64, 0.0, 15.0, 63.0] {
            let w: Vec<_> = g
                .steering_vector(theta)
                .unwrap()
                .iter()
                .map(|a| a / 8.0)
                .collect();
            let bp = beampattern(&w, g, &grid).unwrap();
            assert_eq!(bp.peak_angle(), theta);
            assert!(bp.null_depth(theta).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn two_element_uniform_pattern_has_endfire_null() {
        let g = UlaGeometry::new(2).unwrap();
        let bp = beampattern(&[c(0.5, 0.0), c(0.5, 0.0)], g, &angle_grid(1.0).unwrap()).unwrap();
        assert_eq!(*bp.gain_db.last().unwrap(), BEAMPATTERN_FLOOR_DB);
        assert_eq!(bp.gain_db[0], BEAMPATTERN_FLOOR_DB);
    }

    #[test]
    fn uniform_sixteen_element_first_sidelobe() {
        // oracle: first sidelobe of the Dirichlet kernel |sin(Mu/2)/(M sin(u/2))|,
        // located by dense brute-force search in u = π sin θ
        let m = 16usize;
        let dirichlet = |u: f64| {
            let s = (u / 2.0).sin();
            if s.abs() < 1e-15 {
                1.0
            } else {
                ((m as f64 * u / 2.0).sin() / (m as f64 * s)).abs()
            }
        };
        let first_null = 2.0 * std::f64::consts::PI / m as f64;
        let second_null = 2.0 * first_null;
        let oracle_db = (0..=200_000)
            .map(|k| first_null + (second_null - first_null) * k as f64 / 200_000.0)
            .map(|u| 20.0 * dirichlet(u).log10())
            .fold(f64::NEG_INFINITY, f64::max);
        // frozen: -13.1468 dB for M = 16 (tends to -13.26 dB as M grows)
        assert!((oracle_db + 13.146_83).abs() < 1e-4, "{oracle_db}");
        assert!((oracle_db + 13.3).abs() < 0.2);

        let g = UlaGeometry::new(m).unwrap();
        let w = vec![c(1.0 / m as f64, 0.0); m];
        let grid = angle_grid(0.01).unwrap();
        let bp = beampattern(&w, g, &grid).unwrap();
        // largest gain outside the main lobe, which ends at sin θ = 2/M
        let main_lobe_edge = (2.0 / m as f64).asin().to_degrees();
        let sidelobe = bp
            .angles_deg
            .iter()
            .zip(&bp.gain_db)
            .filter(|(a, _)| a.abs() > main_lobe_edge)
            .map(|(_, g)| *g)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            (sidelobe - oracle_db).abs() < 0.01,
            "{sidelobe} vs {oracle_db}"
        );
    }

    #[test]
    fn null_depth_interpolates() {
        let bp = Beampattern {
            angles_deg: vec![-1.0, 0.0, 1.0],
            gain_db: vec![-10.0, 0.0, -20.0],
        };
        assert_eq!(bp.null_depth(1.0).unwrap(), -20.0);
        assert_eq!(bp.null_depth(0.5).unwrap(), -10.0);
        assert_eq!(bp.null_depth(-0.5).unwrap(), -5.0);
        assert!(bp.null_depth(1.5).is_err());
    }

    #[test]
    fn beampattern_rejects_zero_weights_and_bad_grid() {
        let g = UlaGeometry::new(2).unwrap();
        assert!(beampattern(&[c(0.0, 0.0); 2], g, &[0.0]).is_err());
        assert!(beampattern(&[c(1.0, 0.0); 2], g, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn grid_covers_full_range() {
        let g = angle_grid(1.0f64).unwrap();
        assert_eq!(g.len(), 181);
        assert_eq!(g[0], -90.0);
        assert_eq!(g[180], 90.0);
    }

    #[test]
    fn linear_fit_exact_line() {
        let f = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let l = loglog_slope(&[10.0, 100.0, 1000.0], &[1.0, 0.1, 0.01]).unwrap();
        assert!((l.slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn median_ignores_nan() {
        assert_eq!(median(&[3.0, f64::NAN, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0]), Some(2.5));
        assert_eq!(median(&[f64::NAN]), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cvec(len: usize) -> impl Strategy<Value = Vec<Complex<f64>>> {
            prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b)), len)
        }

        proptest! {
            #[test]
            fn relative_error_is_rotation_invariant(
                w_o in cvec(4), w in cvec(4), phase in 0.0f64..std::f64::consts::TAU, swap in 0usize..4,
            ) {
                prop_assume!(norm_sqr(&w_o) > 1e-3);
                // unitary: global phase plus a coordinate permutation
                let rot = Complex::from_polar(1.0, phase);
                let permute = |v: &[Complex<f64>]| {
                    let mut out: Vec<_> = v.iter().map(|z| z * rot).collect();
                    out.swap(0, swap);
                    out
                };
                let a = relative_error_db(&w_o, &w).unwrap();
                let b = relative_error_db(&permute(&w_o), &permute(&w)).unwrap();
                prop_assert!((a - b).abs() < 1e-9 || (a <= -299.0 && b <= -299.0));
            }

            #[test]
            fn beampattern_is_scale_invariant(
                w in cvec(6), scale_re in -5.0f64..5.0, scale_im in -5.0f64..5.0,
            ) {
                prop_assume!(norm_sqr(&w) > 1e-3);
                let s = c(scale_re, scale_im);
                prop_assume!(s.norm() > 1e-2);
                let g = UlaGeometry::new(6).unwrap();
                let grid = angle_grid(2.0).unwrap();
                let a = beampattern(&w, g, &grid).unwrap();
                let ws: Vec<_> = w.iter().map(|z| z * s).collect();
                let b = beampattern(&ws, g, &grid).unwrap();
                for (x, y) in a.gain_db.iter().zip(&b.gain_db) {
                    prop_assert!((x - y).abs() < 1e-8);
                }
                prop_assert!(a.gain_db.iter().all(|v| *v <= 0.0));
                prop_assert!(a.gain_db.contains(&0.0));
            }

            #[test]
            fn null_depth_is_non_positive(w in cvec(5), angle in -90.0f64..=90.0) {
                prop_assume!(norm_sqr(&w) > 1e-3);
                let g = UlaGeometry::new(5).unwrap();
                let bp = beampattern(&w, g, &angle_grid(1.0).unwrap()).unwrap();
                prop_assert!(bp.null_depth(angle).unwrap() <= 0.0);
            }
        }
    }
}
