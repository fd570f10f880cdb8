//! Sideband-picture simulation of continuous-variable entangled light sent
//! through a lossy three-port sample, optionally closed into a coherent
//! feedback loop with the parametric source that produced it.
//!
//! All quantities are evaluated at a single analysis frequency in the
//! doubled operator basis `(a(Ω), a†(−Ω))`. Quadratures follow
//! `X = a + a†`, `Y = −i(a − a†)` so the vacuum variance (shot-noise limit)
//! is exactly 1.

pub mod bogoliubov;
pub mod config;
pub mod elements;
pub mod error;
pub mod network;
pub mod numerics;
pub mod scenarios;
pub mod spectrum;
pub mod units;

pub use bogoliubov::BogoliubovTransfer;
pub use config::{ClassicalConfig, DetectionConfig, FeedbackConfig, ScenarioConfig, SweepSpec};
pub use elements::{
    BeamSplitterParams, DetectionParams, Element, ElementTransfer, NopaParams, ThreePortSample,
};
pub use error::{Error, Result};
pub use network::{LoopSolveResult, Network, PortRef};
pub use spectrum::{duan_sum, physicality_check, NoiseSpectrum, Physicality, QuadratureCombo};
pub use units::{db_to_variance, variance_to_db, AnalysisFrequency, SqueezingDb};
