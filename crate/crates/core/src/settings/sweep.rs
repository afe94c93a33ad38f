use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{evaluate, GameSpec, Strategy};
use crate::qcore::{gates, Measurement, State};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub p_formula: f64,
    pub p_circuit: f64,
}

/// Closed-form success probability of the S / R_z(ε)† / R_z(ε) strategy,
/// written term by term for inputs (0,0), (0,1), (1,0), (1,1).
pub fn p_suc_formula(epsilon: f64) -> f64 {
    let e = epsilon;
    0.25 * ((0.5 + e.cos() / 2.0)
        + (0.5 + (-e).cos() / 2.0)
        + (0.5 + (FRAC_PI_2 - e).cos() / 2.0)
        + (1.0 - 0.5 - (FRAC_PI_2 + e).cos() / 2.0))
}

/// `|+⟩`, A₀ = I, A₁ = S, B₀ = R_z(ε)†, B₁ = R_z(ε), X measurement.
pub fn rz_strategy(epsilon: f64) -> Result<Strategy> {
    Strategy::unitary(
        State::plus(2),
        vec![gates::identity2(), gates::s()],
        vec![gates::rz(epsilon).dagger(), gates::rz(epsilon)],
        Measurement::x(),
    )
}

/// `steps` equally spaced points strictly inside (0, π/2):
/// ε_k = (k + 1)·(π/2)/(steps + 1). Odd `steps` puts the middle point at π/4.
pub fn open_interval_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::OutOfRange { value: steps as f64, range: "steps >= 2" });
    }
    Ok((0..steps).map(|k| (k + 1) as f64 * FRAC_PI_2 / (steps + 1) as f64).collect())
}

/// Evaluates both the closed form and the circuit at every grid point.
pub fn epsilon_sweep(eps_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    let game = GameSpec::chsh();
    eps_grid
        .iter()
        .map(|&epsilon| {
            if !(epsilon > 0.0 && epsilon < FRAC_PI_2) {
                return Err(Error::OutOfRange { value: epsilon, range: "(0, pi/2)" });
            }
            Ok(SweepPoint {
                epsilon,
                p_formula: p_suc_formula(epsilon),
                p_circuit: evaluate(&game, &rz_strategy(epsilon)?)?.average,
            })
        })
        .collect()
}
