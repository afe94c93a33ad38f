//! Dense complex linear algebra and single-system quantum primitives.

pub mod channel;
pub mod gates;
pub mod matrix;
pub mod measurement;
pub mod random;
pub mod state;

pub use channel::{apply_channel, Channel};
pub use gates::{qudit_gates, QuditGates};
pub use matrix::{Complex, ComplexMatrix};
pub use measurement::{outcome_distribution, Measurement, PauliAxis};
pub use state::State;

/// Structural checks: completeness of Kraus sets, projector algebra.
pub const COMPLETENESS_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Agreement between two computed probabilities.
pub const PROBABILITY_TOL: f64 = 1e-12;
