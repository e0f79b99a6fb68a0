//! Monte-Carlo experiments built on the system-identification scenario.

use crmc::analysis_metrics::{loglog_slope, LinearFit};
use crmc::linalg::norm;
use crmc::{AdaptiveFilter, CrmcFilter, CrmcParams, C64};
use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::scenario::{Scenario, ScenarioKind};

#[derive(Debug, Clone)]
pub struct BiasDecay {
    /// Iteration counts at which the trial-averaged weights were taken.
    pub checkpoints: Vec<usize>,
    /// `||mean_trials w(n) - w_o||` at each checkpoint.
    pub bias: Vec<f64>,
    pub fit: LinearFit,
    /// Extremes of the per-trial running-mean spectral value.
    pub spectral_range: (f64, f64),
}

/// Log-spaced integers in `[lo, hi]`, deduplicated.
pub fn log_checkpoints(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut v: Vec<usize> = (0..count)
        .map(|i| {
            (a + (b - a) * i as f64 / (count - 1).max(1) as f64)
                .exp()
                .round() as usize
        })
        .collect();
    v.dedup();
    v
}

/// Bias of the CRMC estimate against the planted system.
///
/// Runs the `[crmc]` block of a sysid scenario over all its trials, averages
/// the weight vectors across trials at each checkpoint and fits the log-log
/// slope of the bias norm against the checkpoint index.
pub fn bias_decay(s: &Scenario, checkpoints: &[usize]) -> Result<BiasDecay> {
    s.validate()?;
    if s.kind != ScenarioKind::Sysid {
        return Err(HarnessError::config("bias decay needs a sysid scenario"));
    }
    let c = s
        .crmc
        .ok_or_else(|| HarnessError::config("bias decay needs a [crmc] block"))?;
    if checkpoints.is_empty() || checkpoints.iter().any(|&k| k == 0 || k > s.iterations) {
        return Err(HarnessError::config(
            "checkpoints must lie in 1..=iterations",
        ));
    }
    let params = CrmcParams {
        lambda: c.lambda,
        sigma: c.sigma,
        delta: c.delta,
    };
    let w_o = s.planted_weights();
    let m = s.elements;
    let per_trial: Vec<(Vec<Vec<C64>>, f64, f64)> = (0..s.trials)
        .into_par_iter()
        .map(|trial| {
            let snaps = s.trial_snapshots(trial)?;
            let mut f = CrmcFilter::new(m, params)?;
            let mut taken = Vec::with_capacity(checkpoints.len());
            let (mut sum, mut lo, mut hi) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
            for (n, snap) in snaps.iter().enumerate() {
                let r = f.step(&snap.x, snap.d)?;
                sum += r.spectral.unwrap_or(f64::NAN);
                let mean = sum / (n + 1) as f64;
                lo = lo.min(mean);
                hi = hi.max(mean);
                if checkpoints.contains(&(n + 1)) {
                    taken.push(f.weights().to_vec());
                }
            }
            Ok((taken, lo, hi))
        })
        .collect::<Result<_>>()?;
    let trials = per_trial.len() as f64;
    let bias: Vec<f64> = (0..checkpoints.len())
        .map(|k| {
            let mean: Vec<C64> = (0..m)
                .map(|i| per_trial.iter().map(|t| t.0[k][i]).sum::<C64>() / trials)
                .collect();
            let diff: Vec<C64> = mean.iter().zip(&w_o).map(|(a, b)| a - b).collect();
            norm(&diff)
        })
        .collect();
    let xs: Vec<f64> = checkpoints.iter().map(|&k| k as f64).collect();
    let fit = loglog_slope(&xs, &bias)?;
    let spectral_range = per_trial
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
            (lo.min(t.1), hi.max(t.2))
        });
    Ok(BiasDecay {
        checkpoints: checkpoints.to_vec(),
        bias,
        fit,
        spectral_range,
    })
}
