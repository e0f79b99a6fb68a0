use std::time::Instant;

use crmc::analysis_metrics::{angle_grid, beampattern, relative_error_db};
use crmc::{
    AdaptiveFilter, Beampattern, ClmsFilter, CmpnFilter, CrmcFilter, CrmcParams, Error,
    LearningCurve, LmpFilter, RlsFilter, Snapshot, C64,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::scenario::{Scenario, ScenarioKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Clms,
    Lmp,
    Cmpn,
    Rls,
    Crmc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Clms,
        Algorithm::Lmp,
        Algorithm::Cmpn,
        Algorithm::Rls,
        Algorithm::Crmc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Clms => "clms",
            Algorithm::Lmp => "lmp",
            Algorithm::Cmpn => "cmpn",
            Algorithm::Rls => "rls",
            Algorithm::Crmc => "crmc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| HarnessError::config(format!("unknown algorithm '{s}'")))
    }

    /// Fresh filter configured from the scenario's parameter block.
    pub fn build(self, s: &Scenario) -> Result<Box<dyn AdaptiveFilter<f64>>> {
        let missing = || HarnessError::config(format!("no [{}] parameter block", self.name()));
        let m = s.elements;
        Ok(match self {
            Algorithm::Clms => Box::new(ClmsFilter::new(m, s.clms.ok_or_else(missing)?.mu)?),
            Algorithm::Lmp => {
                let c = s.lmp.ok_or_else(missing)?;
                Box::new(LmpFilter::new(m, c.mu, c.p)?)
            }
            Algorithm::Cmpn => {
                let c = s.cmpn.as_ref().ok_or_else(missing)?;
                match &c.p_grid {
                    Some(g) => Box::new(CmpnFilter::new(m, c.mu, g.clone())?),
                    None => Box::new(CmpnFilter::with_default_grid(m, c.mu)?),
                }
            }
            Algorithm::Rls => {
                let c = s.rls.ok_or_else(missing)?;
                Box::new(RlsFilter::new(m, c.lambda, c.delta)?)
            }
            Algorithm::Crmc => {
                let c = s.crmc.ok_or_else(missing)?;
                Box::new(CrmcFilter::new(
                    m,
                    CrmcParams {
                        lambda: c.lambda,
                        sigma: c.sigma,
                        delta: c.delta,
                    },
                )?)
            }
        })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One algorithm on one trial.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub trial: usize,
    pub seed: u64,
    /// One entry per completed iteration. The `spectral` column holds the
    /// running mean of the per-step spectral value; `psi` and `spectral` are
    /// NaN for the gradient filters.
    pub curve: LearningCurve<f64>,
    pub final_weights: Vec<C64>,
    /// Beamforming scenarios only, and only when the run did not diverge.
    pub beampattern: Option<Beampattern<f64>>,
    /// Iteration at which the weights became non-finite.
    pub diverged_at: Option<usize>,
    pub step_time_ns: f64,
}

impl RunRecord {
    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }
}

/// Runs every algorithm of the scenario over all trials.
///
/// Within a trial every algorithm sees the same snapshot sequence. Records
/// are sorted by (algorithm, trial), so the output does not depend on the
/// thread schedule.
pub fn run_scenario(s: &Scenario) -> Result<Vec<RunRecord>> {
    s.validate()?;
    let w_o = s.wiener_reference()?;
    let grid = match s.kind {
        ScenarioKind::Beamforming => Some(angle_grid(s.metrics.angle_step_deg)?),
        ScenarioKind::Sysid => None,
    };
    let per_trial: Vec<Vec<RunRecord>> = (0..s.trials)
        .into_par_iter()
        .map(|trial| {
            let snaps = s.trial_snapshots(trial)?;
            let mut algs = s.algorithms.clone();
            algs.sort();
            algs.dedup();
            algs.into_iter()
                .map(|alg| run_one(s, alg, trial, &snaps, &w_o, grid.as_deref()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut records: Vec<RunRecord> = per_trial.into_iter().flatten().collect();
    records.sort_by_key(|r| (r.algorithm, r.trial));
    Ok(records)
}

fn run_one(
    s: &Scenario,
    alg: Algorithm,
    trial: usize,
    snaps: &[Snapshot<f64>],
    w_o: &[C64],
    grid: Option<&[f64]>,
) -> Result<RunRecord> {
    let mut filter = alg.build(s)?;
    let mut curve = LearningCurve::with_capacity(snaps.len());
    let mut diverged_at = None;
    let mut spectral_sum = 0.0;
    let start = Instant::now();
    for (n, snap) in snaps.iter().enumerate() {
        match filter.step(&snap.x, snap.d) {
            Ok(r) => {
                let rel = relative_error_db(w_o, r.weights_after)?;
                let spectral = match r.spectral {
                    Some(v) => {
                        spectral_sum += v;
                        spectral_sum / (n + 1) as f64
                    }
                    None => f64::NAN,
                };
                curve.push(
                    rel,
                    r.prior_error.norm(),
                    r.psi.unwrap_or(f64::NAN),
                    spectral,
                );
            }
            Err(Error::NonFinite) | Err(Error::DegenerateGain(_)) => {
                diverged_at = Some(n);
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let elapsed = start.elapsed().as_nanos() as f64;
    let steps = curve.len() + usize::from(diverged_at.is_some());
    let final_weights = filter.weights().to_vec();
    let beampattern = match (grid, diverged_at) {
        (Some(g), None) => beampattern(&final_weights, s.geometry()?, g).ok(),
        _ => None,
    };
    Ok(RunRecord {
        scenario: s.name.clone(),
        algorithm: alg,
        trial,
        seed: s.trial_seed(trial),
        curve,
        final_weights,
        beampattern,
        diverged_at,
        step_time_ns: elapsed / steps.max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(Algorithm::parse(a.name()).unwrap(), a);
        }
        assert_eq!(Algorithm::parse(" CRMC ").unwrap(), Algorithm::Crmc);
        assert!(Algorithm::parse("nlms").is_err());
    }

    #[test]
    fn records_are_sorted_and_complete() {
        let mut s = builtin("example1").unwrap();
        s.trials = 3;
        s.iterations = 50;
        s.metrics.pilot_snapshots = 2000;
        let recs = run_scenario(&s).unwrap();
        assert_eq!(recs.len(), 15);
        let keys: Vec<_> = recs.iter().map(|r| (r.algorithm, r.trial)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for r in &recs {
            if !r.diverged() {
                assert_eq!(r.curve.len(), 50);
                assert_eq!(r.beampattern.as_ref().unwrap().gain_db.len(), 181);
            }
            let gradient = matches!(
                r.algorithm,
                Algorithm::Clms | Algorithm::Lmp | Algorithm::Cmpn
            );
            assert_eq!(r.curve.psi.iter().all(|p| p.is_nan()), gradient);
        }
    }

    #[test]
    fn sysid_has_no_beampattern() {
        let mut s = builtin("sysid").unwrap();
        s.trials = 2;
        s.iterations = 30;
        for r in run_scenario(&s).unwrap() {
            assert!(r.beampattern.is_none());
        }
    }
}
