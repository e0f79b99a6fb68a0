use std::time::Instant;

use crmc::linalg::dot_h;
use crmc::{RngHandle, C64};

use crate::error::Result;
use crate::runner::Algorithm;
use crate::scenario::builtin;

const RING: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchResult {
    pub elements: usize,
    pub algorithm: Algorithm,
    pub mean_step_ns: f64,
}

/// Complex multiplications per step, used as the regressor when fitting
/// measured step times.
pub fn multiply_count(algorithm: Algorithm, elements: usize) -> f64 {
    let m = elements as f64;
    match algorithm {
        Algorithm::Clms | Algorithm::Lmp | Algorithm::Cmpn => 2.0 * m + 1.0,
        Algorithm::Rls => 2.0 * m * m + 4.0 * m,
        Algorithm::Crmc => 2.0 * m * m + 4.0 * m + 5.0,
    }
}

/// Mean wall time of one `step` for each algorithm at `elements` taps.
///
/// Inputs come from a pre-generated ring of system-identification
/// snapshots so that data synthesis is not timed. Each algorithm runs
/// `repeats` times and the fastest repeat is reported. Parameters are
/// those of the built-in `sysid` scenario.
pub fn bench_step_times(
    elements: usize,
    iterations: usize,
    repeats: usize,
) -> Result<Vec<BenchResult>> {
    let mut s = builtin("sysid").expect("built-in sysid scenario");
    s.elements = elements;
    s.validate()?;
    let mut rng = RngHandle::new(0xBE4C);
    let w_o: Vec<C64> = (0..elements)
        .map(|_| rng.complex_gaussian(1.0 / elements as f64))
        .collect();
    let ring: Vec<(Vec<C64>, C64)> = (0..RING)
        .map(|_| {
            let x: Vec<C64> = (0..elements).map(|_| rng.complex_gaussian(1.0)).collect();
            let d = dot_h(&w_o, &x) + rng.complex_gaussian(1e-4);
            (x, d)
        })
        .collect();
    Algorithm::ALL
        .into_iter()
        .map(|alg| {
            let mut best = f64::INFINITY;
            for _ in 0..repeats.max(1) {
                let mut f = alg.build(&s)?;
                let start = Instant::now();
                for n in 0..iterations {
                    let (x, d) = &ring[n % RING];
                    if f.step(x, *d).is_err() {
                        f = alg.build(&s)?;
                    }
                }
                best = best.min(start.elapsed().as_nanos() as f64 / iterations.max(1) as f64);
                std::hint::black_box(f.weights());
            }
            Ok(BenchResult {
                elements,
                algorithm: alg,
                mean_step_ns: best,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_grow_as_expected() {
        assert_eq!(multiply_count(Algorithm::Clms, 8), 17.0);
        assert_eq!(multiply_count(Algorithm::Rls, 8), 160.0);
        assert_eq!(multiply_count(Algorithm::Crmc, 8), 165.0);
    }

    #[test]
    fn reports_every_algorithm() {
        let r = bench_step_times(4, 200, 1).unwrap();
        assert_eq!(r.len(), 5);
        assert!(r.iter().all(|b| b.mean_step_ns > 0.0 && b.elements == 4));
    }
}
