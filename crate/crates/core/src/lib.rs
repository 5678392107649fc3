//! Gaussian-state simulation of a lossy SU(1,1) interferometer: input
//! states, the OPA / phase / loss pipeline, parity, homodyne and intensity
//! detection, closed-form sensitivities, a truncated Fock-space oracle and
//! the sweep and verification tooling built on them.

pub mod analysis;
pub mod closed_forms;
pub mod detection;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod numerics;

pub use detection::{DetectionKind, PhaseWindow, Quadrature, SensitivityResult, Sensor};
pub use error::{Error, Result};
pub use gaussian::{BogoliubovMap, GaussianState, InputKind, InputSpec};
pub use interferometer::{InterferometerConfig, PhotonBudget, Propagator};
