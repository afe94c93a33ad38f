//! Unitary setting: maximize over four qubit unitaries numerically.
//!
//! Each gate is `R_z(α) R_y(β) R_z(γ)`, which reaches every qubit unitary up
//! to global phase. In the default (normal-form) search the initial state is
//! `|+⟩` and the measurement is X; the free search also optimizes the
//! initial Bloch vector and measurement axis.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use serde::Serialize;

use crate::error::Result;
use crate::game::{evaluate, GameSpec, Strategy};
use crate::qcore::{gates, Measurement, State};
use crate::settings::optimizer::{maximize_with_restarts, random_angles, OptimizerConfig};
use crate::settings::{Method, SettingKind, SettingSpec, ValueResult, Witness};

const GATE_PARAMS: usize = 12;

/// Normal-form strategy from 12 Euler angles (A₀, A₁, B₀, B₁ in order).
pub fn euler_strategy(angles: &[f64]) -> Result<Strategy> {
    euler_strategy_with(angles, State::plus(2), Measurement::x())
}

fn euler_strategy_with(angles: &[f64], initial: State, measurement: Measurement) -> Result<Strategy> {
    let gate = |k: usize| gates::euler_zyz(angles[3 * k], angles[3 * k + 1], angles[3 * k + 2]);
    Strategy::unitary(initial, vec![gate(0), gate(1)], vec![gate(2), gate(3)], measurement)
}

/// Euler angles of the S / T† / T strategy: A₀ = I, A₁ = S, B₀ = T†, B₁ = T
/// (all z rotations, so only α is nonzero).
pub fn optimal_angles() -> Vec<f64> {
    vec![0.0, 0.0, 0.0, FRAC_PI_2, 0.0, 0.0, -FRAC_PI_4, 0.0, 0.0, FRAC_PI_4, 0.0, 0.0]
}

fn score(s: &Strategy) -> f64 {
    evaluate(&GameSpec::chsh(), s).map(|r| r.average).unwrap_or(f64::NEG_INFINITY)
}

fn sample_gate_angles(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    random_angles(rng, GATE_PARAMS)
}

pub fn value_unitary(config: &OptimizerConfig) -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::Unitary, 2)?;
    let objective = |x: &[f64]| euler_strategy(x).map(|s| score(&s)).unwrap_or(f64::NEG_INFINITY);
    let outcome = maximize_with_restarts(objective, sample_gate_angles, config)?;
    let witness = euler_strategy(&outcome.best.point)?;
    let value = score(&witness);
    Ok(ValueResult {
        setting,
        value,
        witness: Witness::Quantum(witness),
        method: Method::Optimized,
        strategies_examined: outcome.evaluations as u64,
        value_histogram: Vec::new(),
    })
}

/// Free search: 16 parameters (initial Bloch angles, measurement Bloch
/// angles, then the 12 gate angles). Trivial measurements {I, 0} are also
/// scored; they can only ever reach 3/4.
pub fn value_unitary_free(config: &OptimizerConfig) -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::Unitary, 2)?;
    let build = |x: &[f64]| -> Result<Strategy> {
        let (s, c) = (x[0] / 2.0).sin_cos();
        let initial = State::pure(&[crate::qcore::Complex::new(c, 0.0), crate::qcore::Complex::from_polar(s, x[1])])?;
        euler_strategy_with(&x[4..], initial, Measurement::bloch_axis(x[2], x[3]))
    };
    let objective = |x: &[f64]| build(x).map(|s| score(&s)).unwrap_or(f64::NEG_INFINITY);
    let config = OptimizerConfig { initial_guess: None, ..config.clone() };
    let outcome = maximize_with_restarts(objective, |rng| random_angles(rng, 4 + GATE_PARAMS), &config)?;
    let mut witness = build(&outcome.best.point)?;
    let mut value = score(&witness);
    let mut examined = outcome.evaluations as u64;

    for label in [0, 1] {
        let trivial = euler_strategy_with(
            &outcome.best.point[4..],
            witness.initial.clone(),
            Measurement::trivial(2, label, 1 - label),
        )?;
        examined += 1;
        let v = score(&trivial);
        if v > value + 1e-12 {
            value = v;
            witness = trivial;
        }
    }
    Ok(ValueResult {
        setting,
        value,
        witness: Witness::Quantum(witness),
        method: Method::Optimized,
        strategies_examined: examined,
        value_histogram: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZGridResult {
    pub points: usize,
    pub best_value: f64,
    /// (α₁, β₀, β₁) at the maximum; α₀ is pinned to 0.
    pub best_angles: [f64; 3],
}

/// Grid search with every gate a z rotation. Only the sums α_a + β_b
/// matter, so α₀ = 0 without loss; the other three angles take
/// `steps` values `2πk/steps` each.
pub fn z_rotation_grid(steps: usize) -> Result<ZGridResult> {
    let grid: Vec<f64> = (0..steps).map(|k| TAU * k as f64 / steps as f64).collect();
    let mut best = ZGridResult { points: 0, best_value: f64::NEG_INFINITY, best_angles: [0.0; 3] };
    for &a1 in &grid {
        for &b0 in &grid {
            for &b1 in &grid {
                let s = Strategy::unitary(
                    State::plus(2),
                    vec![gates::identity2(), gates::rz(a1)],
                    vec![gates::rz(b0), gates::rz(b1)],
                    Measurement::x(),
                )?;
                let v = score(&s);
                best.points += 1;
                if v > best.best_value + 1e-12 {
                    best.best_value = v;
                    best.best_angles = [a1, b0, b1];
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn optimal_angles_give_tsirelson() {
        let s = euler_strategy(&optimal_angles()).unwrap();
        let c2 = (PI / 8.0).cos().powi(2);
        assert!((score(&s) - c2).abs() < 1e-12);
    }

    #[test]
    fn z_rotation_grid_reaches_tsirelson() {
        let r = z_rotation_grid(24).unwrap();
        assert_eq!(r.points, 13_824);
        assert!((r.best_value - (PI / 8.0).cos().powi(2)).abs() < 1e-4);
    }

    #[test]
    fn euler_strategy_is_normal_form() {
        let s = euler_strategy(&[0.1; 12]).unwrap();
        assert!(crate::chshmap::lift(&s).is_ok());
    }
}
