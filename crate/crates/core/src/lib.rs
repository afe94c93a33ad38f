//! Single-system CHSH* game toolkit.
//!
//! A player holding one system receives two inputs in sequence, applies a
//! pre-agreed operation after each, and measures. This crate evaluates any
//! strategy exactly, computes the optimal success probability under several
//! physical restrictions (unitary, Clifford, reversible and irreversible
//! classical, qutrit), maps qubit strategies onto two-party Bell-pair
//! strategies, and tracks the erasure cost of irreversible strategies.

pub mod chshmap;
pub mod error;
pub mod game;
pub mod landauer;
pub mod qcore;
pub mod settings;

pub use chshmap::{evaluate_chsh, lift, verify_equivalence, ChshReport, ChshStrategy, EquivalenceCheck};
pub use error::{Error, Result};
pub use game::{
    evaluate, evaluate_classical, winning_answer, ClassicalStrategy, EvaluationReport, GameSpec, StochasticMap,
    Strategy,
};
pub use landauer::{entropy_ledger, erasure_value, solve_erasure_probability, EntropyReport, ErasureStrategy};
pub use qcore::{Channel, Complex, ComplexMatrix, Measurement, State};
pub use settings::{
    compute_value, Method, OptimizerConfig, SettingKind, SettingSpec, SweepPoint, ValueResult, Witness, DEFAULT_SEED,
};

/// cos²(π/8) = (2 + √2)/4.
pub fn tsirelson_value() -> f64 {
    (std::f64::consts::PI / 8.0).cos().powi(2)
}
