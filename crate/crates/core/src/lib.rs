//! Complex-valued adaptive filtering in impulsive noise.
//!
//! The crate provides:
//!
//! * [`signal_sources`]: QPSK symbol streams, symmetric alpha-stable variates
//!   and isotropic complex alpha-stable noise, all driven by seeded,
//!   reproducible random streams.
//! * [`array_model`]: steering vectors of a half-wavelength uniform linear
//!   array and snapshot synthesis for multi-source scenarios.
//! * [`adaptive_filters`]: the recursive maximum-correntropy filter (CRMC),
//!   complex RLS, and the CLMS / LMP / CMPN stochastic-gradient baselines.
//! * [`analysis_metrics`]: relative error, beampatterns, null depths,
//!   sample-Wiener references and regression helpers for convergence studies.
//!
//! All numerical code is generic over a real scalar [`Real`] (`f32` or `f64`);
//! the `*64` / `*32` aliases below name the common concrete instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod adaptive_filters;
pub mod analysis_metrics;
pub mod array_model;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod signal_sources;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::Real;

pub use adaptive_filters::{
    AdaptiveFilter, ClmsFilter, CmpnFilter, CrmcFilter, CrmcParams, LmpFilter, RlsFilter,
    StepResult,
};
pub use analysis_metrics::{Beampattern, LearningCurve};
pub use array_model::{Snapshot, SnapshotSynthesizer, SourceRole, SourceSpec, UlaGeometry};
pub use signal_sources::{AlphaStableParams, QpskSource, RngHandle, SignalSpec};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type CrmcFilter64 = CrmcFilter<f64>;
pub type CrmcFilter32 = CrmcFilter<f32>;
pub type RlsFilter64 = RlsFilter<f64>;
pub type RlsFilter32 = RlsFilter<f32>;
pub type ClmsFilter64 = ClmsFilter<f64>;
pub type ClmsFilter32 = ClmsFilter<f32>;
pub type LmpFilter64 = LmpFilter<f64>;
pub type LmpFilter32 = LmpFilter<f32>;
pub type CmpnFilter64 = CmpnFilter<f64>;
pub type CmpnFilter32 = CmpnFilter<f32>;

pub type AlphaStableParams64 = AlphaStableParams<f64>;
pub type AlphaStableParams32 = AlphaStableParams<f32>;
pub type Snapshot64 = Snapshot<f64>;
pub type Snapshot32 = Snapshot<f32>;
pub type Beampattern64 = Beampattern<f64>;
pub type Beampattern32 = Beampattern<f32>;
