//! Scenario files.
//!
//! Scenarios are TOML documents. A minimal beamforming scenario:
//!
//! ```toml
//! name = "demo"
//! kind = "beamforming"          # or "sysid"
//! elements = 8
//! iterations = 500
//! trials = 10
//! seed = 1
//! algorithms = ["rls", "crmc"]
//!
//! [noise]                       # array noise; omit to switch it off
//! alpha = 1.2
//! dispersion = 0.01
//!
//! [reference_noise]             # additive contamination of d(n); optional
//! alpha = 1.2
//! dispersion = 1.0
//!
//! [[sources]]
//! role = "desired"
//! angle_deg = 15.0
//! signal = "qpsk"
//! amplitude = 1.0
//!
//! [[sources]]
//! role = "interferer"
//! angle_deg = -20.0
//! signal = "alpha_stable"
//! alpha = 1.4
//! dispersion = 1.0
//!
//! [rls]
//! lambda = 0.99
//! delta = 100.0
//!
//! [crmc]
//! lambda = 0.99
//! sigma = 8.0
//! delta = 100.0
//! ```
//!
//! For `kind = "sysid"` the sources are ignored: the input is circular
//! complex Gaussian with unit power per element, the reference is
//! `d = w_o^H x + v` with `v` drawn from `[noise]`, and `w_o` is a unit-norm
//! vector planted from `[sysid].planted_seed`.

use std::path::Path;

use crmc::analysis_metrics::sample_wiener;
use crmc::linalg::{dot_h, norm};
use crmc::{
    AlphaStableParams, Complex, RngHandle, SignalSpec, Snapshot, SnapshotSynthesizer, SourceSpec,
    UlaGeometry, C64,
};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::runner::Algorithm;

const EXAMPLE1: &str = include_str!("../scenarios/example1.toml");
const EXAMPLE2: &str = include_str!("../scenarios/example2.toml");
const SYSID: &str = include_str!("../scenarios/sysid.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Beamforming,
    Sysid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Desired,
    Interferer,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "signal", rename_all = "snake_case")]
pub enum SignalConfig {
    Qpsk {
        #[serde(default = "one")]
        amplitude: f64,
    },
    AlphaStable {
        alpha: f64,
        #[serde(default = "one")]
        dispersion: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub role: Role,
    pub angle_deg: f64,
    #[serde(flatten)]
    pub signal: SignalConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StableConfig {
    pub alpha: f64,
    pub dispersion: f64,
}

impl StableConfig {
    pub fn params(&self) -> Result<AlphaStableParams<f64>> {
        Ok(AlphaStableParams::new(self.alpha, self.dispersion)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClmsConfig {
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmpConfig {
    pub mu: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmpnConfig {
    pub mu: f64,
    #[serde(default)]
    pub p_grid: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RlsConfig {
    pub lambda: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrmcConfig {
    pub lambda: f64,
    pub sigma: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_delta() -> f64 {
    100.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsConfig {
    /// Length of the Gaussian-surrogate pilot used for the Wiener reference.
    #[serde(default = "default_pilot")]
    pub pilot_snapshots: usize,
    #[serde(default = "one")]
    pub angle_step_deg: f64,
}

fn default_pilot() -> usize {
    20_000
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            pilot_snapshots: default_pilot(),
            angle_step_deg: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SysidConfig {
    pub planted_seed: u64,
}

impl Default for SysidConfig {
    fn default() -> Self {
        Self { planted_seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    pub elements: usize,
    pub iterations: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub noise: Option<StableConfig>,
    #[serde(default)]
    pub reference_noise: Option<StableConfig>,
    #[serde(default)]
    pub sources: Vec<SourceConfig>,
    #[serde(default)]
    pub clms: Option<ClmsConfig>,
    #[serde(default)]
    pub lmp: Option<LmpConfig>,
    #[serde(default)]
    pub cmpn: Option<CmpnConfig>,
    #[serde(default)]
    pub rls: Option<RlsConfig>,
    #[serde(default)]
    pub crmc: Option<CrmcConfig>,
    #[serde(default)]
    pub metrics: MetricsConfig,
    #[serde(default)]
    pub sysid: SysidConfig,
}

fn default_trials() -> usize {
    50
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario =
            toml::from_str(text).map_err(|e| HarnessError::config(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| {
            Err(HarnessError::Config(format!(
                "scenario '{}': {m}",
                self.name
            )))
        };
        if self.iterations < 1 {
            return fail("iterations must be at least 1".into());
        }
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms selected".into());
        }
        UlaGeometry::new(self.elements)?;
        for alg in &self.algorithms {
            let present = match alg {
                Algorithm::Clms => self.clms.is_some(),
                Algorithm::Lmp => self.lmp.is_some(),
                Algorithm::Cmpn => self.cmpn.is_some(),
                Algorithm::Rls => self.rls.is_some(),
                Algorithm::Crmc => self.crmc.is_some(),
            };
            if !present {
                return fail(format!("algorithm '{}' has no parameter block", alg.name()));
            }
            // constructing a filter validates its parameters
            alg.build(self)?;
        }
        if let Some(n) = &self.noise {
            n.params()?;
        }
        if let Some(n) = &self.reference_noise {
            n.params()?;
        }
        if self.kind == ScenarioKind::Beamforming {
            let specs = self.source_specs()?;
            crmc::array_model::desired_index(&specs)?;
            for s in &specs {
                UlaGeometry::new(self.elements)?.steering_vector(s.angle_deg)?;
            }
            if self.metrics.pilot_snapshots < self.elements {
                return fail("pilot_snapshots must be at least the number of elements".into());
            }
        }
        crmc::analysis_metrics::angle_grid(self.metrics.angle_step_deg)?;
        Ok(())
    }

    pub fn geometry(&self) -> Result<UlaGeometry> {
        Ok(UlaGeometry::new(self.elements)?)
    }

    pub fn source_specs(&self) -> Result<Vec<SourceSpec<f64>>> {
        self.sources
            .iter()
            .map(|s| {
                let signal = match s.signal {
                    SignalConfig::Qpsk { amplitude } => SignalSpec::Qpsk { amplitude },
                    SignalConfig::AlphaStable { alpha, dispersion } => {
                        SignalSpec::AlphaStable(AlphaStableParams::new(alpha, dispersion)?)
                    }
                };
                Ok(match s.role {
                    Role::Desired => SourceSpec::desired(s.angle_deg, signal),
                    Role::Interferer => SourceSpec::interferer(s.angle_deg, signal),
                })
            })
            .collect()
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    /// Unit-norm planted system of the sysid scenario.
    pub fn planted_weights(&self) -> Vec<C64> {
        let mut rng = RngHandle::new(self.sysid.planted_seed);
        let w: Vec<C64> = (0..self.elements)
            .map(|_| rng.complex_gaussian(1.0))
            .collect();
        let n = norm(&w);
        w.into_iter().map(|z| z / n).collect()
    }

    /// Snapshot sequence of one trial, shared by every algorithm.
    pub fn trial_snapshots(&self, trial: usize) -> Result<Vec<Snapshot<f64>>> {
        let seed = self.trial_seed(trial);
        match self.kind {
            ScenarioKind::Beamforming => {
                let mut syn = SnapshotSynthesizer::new(
                    self.geometry()?,
                    &self.source_specs()?,
                    self.noise.map(|n| n.params()).transpose()?,
                    self.reference_noise.map(|n| n.params()).transpose()?,
                    seed,
                )?;
                Ok(syn.take(self.iterations))
            }
            ScenarioKind::Sysid => {
                let w_o = self.planted_weights();
                let mut input = RngHandle::substream(seed, 0);
                let mut noise_rng = RngHandle::substream(seed, 1);
                let noise = self.noise.map(|n| n.params()).transpose()?;
                Ok((0..self.iterations)
                    .map(|_| {
                        let x: Vec<C64> = (0..self.elements)
                            .map(|_| input.complex_gaussian(1.0))
                            .collect();
                        let v = noise.as_ref().map_or(Complex::new(0.0, 0.0), |p| {
                            crmc::signal_sources::sample_isotropic_complex_sas(p, &mut noise_rng)
                        });
                        Snapshot {
                            d: dot_h(&w_o, &x) + v,
                            x,
                        }
                    })
                    .collect())
            }
        }
    }

    /// Target `w_o` of the relative-error metric.
    ///
    /// System identification returns the planted system. Beamforming returns
    /// the sample-Wiener solution of a pilot run in which every alpha-stable
    /// waveform (sources and array noise) is replaced by its Gaussian
    /// surrogate of equal dispersion and the reference is uncontaminated.
    pub fn wiener_reference(&self) -> Result<Vec<C64>> {
        match self.kind {
            ScenarioKind::Sysid => Ok(self.planted_weights()),
            ScenarioKind::Beamforming => {
                let specs: Vec<_> = self
                    .source_specs()?
                    .into_iter()
                    .map(|mut s| {
                        s.signal = s.signal.gaussian_surrogate();
                        s
                    })
                    .collect();
                let noise = self
                    .noise
                    .map(|n| n.params().map(|p| p.gaussian_surrogate()))
                    .transpose()?;
                let mut syn = SnapshotSynthesizer::new(
                    self.geometry()?,
                    &specs,
                    noise,
                    None,
                    self.seed ^ PILOT_SEED_MASK,
                )?;
                let pilot = syn.take(self.metrics.pilot_snapshots);
                sample_wiener(&pilot).map_err(|e| {
                    HarnessError::config(format!(
                        "scenario '{}': Wiener reference unavailable ({e})",
                        self.name
                    ))
                })
            }
        }
    }
}

const PILOT_SEED_MASK: u64 = 0x9E37_79B9_7F4A_7C15;

/// Names accepted by [`builtin`].
pub fn builtin_names() -> &'static [&'static str] {
    &["example1", "example2", "sysid"]
}

pub fn builtin(name: &str) -> Option<Scenario> {
    let text = match name {
        "example1" => EXAMPLE1,
        "example2" => EXAMPLE2,
        "sysid" => SYSID,
        _ => return None,
    };
    Some(Scenario::from_toml(text).expect("built-in scenarios are valid"))
}

/// Resolves a built-in name or reads a scenario file.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario> {
    if let Some(s) = builtin(name_or_path) {
        return Ok(s);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(HarnessError::config(format!(
            "'{name_or_path}' is neither a built-in scenario ({}) nor an existing file",
            builtin_names().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Scenario::from_toml(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_carry_published_constants() {
        let e1 = builtin("example1").unwrap();
        assert_eq!(e1.elements, 16);
        assert_eq!(e1.iterations, 1000);
        assert_eq!(e1.clms.unwrap().mu, 0.0003);
        assert_eq!(e1.lmp.unwrap(), LmpConfig { mu: 0.001, p: 1.0 });
        assert_eq!(e1.cmpn.as_ref().unwrap().mu, 0.001);
        assert_eq!(e1.rls.unwrap().lambda, 0.99);
        let c = e1.crmc.unwrap();
        assert_eq!((c.lambda, c.sigma), (0.99, 8.0));
        assert_eq!(e1.noise.unwrap().alpha, 1.2);
        assert!(e1.reference_noise.is_some());
        let angles: Vec<f64> = e1.sources.iter().map(|s| s.angle_deg).collect();
        assert_eq!(angles, vec![15.0, 7.0, 23.0]);
        assert_eq!(e1.sources[0].role, Role::Desired);

        let e2 = builtin("example2").unwrap();
        assert_eq!(e2.noise.unwrap().alpha, 1.2);
        assert_eq!(e2.sources[0].angle_deg, 10.0);
        assert_eq!(
            e2.sources[0].signal,
            SignalConfig::AlphaStable {
                alpha: 1.4,
                dispersion: 1.0
            }
        );
        let angles: Vec<f64> = e2.sources[1..].iter().map(|s| s.angle_deg).collect();
        assert_eq!(angles, vec![-10.0, 20.0]);

        let sys = builtin("sysid").unwrap();
        assert_eq!(sys.kind, ScenarioKind::Sysid);
        assert!((norm(&sys.planted_weights()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn toml_round_trip() {
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            let back = Scenario::from_toml(&s.to_toml()).unwrap();
            assert_eq!(s, back);
        }
    }

    #[test]
    fn missing_parameter_block_is_a_config_error() {
        let mut s = builtin("example1").unwrap();
        s.crmc = None;
        let err = s.validate().unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("crmc"));
    }

    #[test]
    fn invalid_values_are_rejected() {
        let mut s = builtin("example1").unwrap();
        s.trials = 0;
        assert!(s.validate().is_err());
        let mut s = builtin("example1").unwrap();
        s.sources[1].role = Role::Desired;
        assert!(s.validate().is_err());
        let mut s = builtin("example1").unwrap();
        s.noise = Some(StableConfig {
            alpha: 2.5,
            dispersion: 1.0,
        });
        assert!(s.validate().is_err());
        let mut s = builtin("example1").unwrap();
        s.crmc = Some(CrmcConfig {
            lambda: 1.5,
            sigma: 8.0,
            delta: 100.0,
        });
        assert!(s.validate().is_err());
        assert!(Scenario::from_toml("name = 'x'").is_err());
        assert!(load_scenario("/no/such/file.toml").is_err());
    }

    #[test]
    fn sysid_reference_follows_planted_model() {
        let mut s = builtin("sysid").unwrap();
        s.noise = None;
        s.iterations = 20;
        let w_o = s.wiener_reference().unwrap();
        for snap in s.trial_snapshots(3).unwrap() {
            assert!((snap.d - dot_h(&w_o, &snap.x)).norm() < 1e-12);
        }
    }

    #[test]
    fn noise_free_beamforming_reference_is_singular() {
        let mut s = builtin("example1").unwrap();
        s.noise = None;
        assert!(s.wiener_reference().is_err());
    }
}
