//! Lift of a single-qubit unitary strategy to a two-party strategy on a
//! shared Bell pair.
//!
//! Given a strategy in normal form (initial `|+⟩`, X measurement, unitary
//! gates), Alice applies `A_aᵀ` to her half of `|Φ+⟩`, Bob applies `B_b` to
//! his, and both measure X with `+ ↦ 0`, `− ↦ 1`. Because
//! `(Aᵀ ⊗ I)|Φ+⟩ = (I ⊗ A)|Φ+⟩`, Bob's qubit after Alice reads `x` is
//! `A_a Z^x |+⟩`, and the probability that `x ⊕ y = a·b` equals the
//! single-system win probability on every input.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{evaluate, GameSpec, Strategy};
use crate::qcore::matrix::{Complex, ComplexMatrix};
use crate::qcore::{Measurement, State, COMPLETENESS_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct ChshStrategy {
    pub shared_state: State,
    /// Alice's gate per input, `A_aᵀ`.
    pub alice_gates: Vec<ComplexMatrix>,
    pub bob_gates: Vec<ComplexMatrix>,
    pub alice_measurement: Measurement,
    pub bob_measurement: Measurement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointOutcome {
    pub a: usize,
    pub b: usize,
    pub x: usize,
    pub y: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshWin {
    pub a: usize,
    pub b: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshReport {
    pub per_input: Vec<ChshWin>,
    pub joint_table: Vec<JointOutcome>,
}

impl ChshReport {
    pub fn probability(&self, a: usize, b: usize) -> Option<f64> {
        self.per_input.iter().find(|w| w.a == a && w.b == b).map(|w| w.probability)
    }

    pub fn joint(&self, a: usize, b: usize, x: usize, y: usize) -> Option<f64> {
        self.joint_table.iter().find(|j| (j.a, j.b, j.x, j.y) == (a, b, x, y)).map(|j| j.probability)
    }
}

/// (|00⟩ + |11⟩)/√2.
pub fn phi_plus_vector() -> Vec<Complex> {
    let h = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex::new(0.0, 0.0);
    vec![h, z, z, h]
}

pub fn bell_pair() -> State {
    State::pure(&phi_plus_vector()).expect("normalized")
}

const NORMAL_FORM_TOL: f64 = 1e-10;

fn check_normal_form(s: &Strategy) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>)> {
    if s.dim() != 2 {
        return Err(Error::NotNormalForm(format!("dimension {} (qubit required)", s.dim())));
    }
    if !s.initial.density().approx_eq(State::plus(2).density(), NORMAL_FORM_TOL) {
        return Err(Error::NotNormalForm("initial state is not |+>".into()));
    }
    let x = Measurement::x();
    let same_measurement = s.measurement.labels() == x.labels()
        && s.measurement.projectors().len() == 2
        && s.measurement.projectors().iter().zip(x.projectors()).all(|(p, q)| p.approx_eq(q, NORMAL_FORM_TOL));
    if !same_measurement {
        return Err(Error::NotNormalForm("measurement is not X with +→0, −→1".into()));
    }
    let unitaries = |side: &str, chans: &[crate::qcore::Channel]| {
        chans
            .iter()
            .enumerate()
            .map(|(i, ch)| {
                ch.as_unitary()
                    .cloned()
                    .ok_or_else(|| Error::NotNormalForm(format!("{side}_{i} is not a unitary gate")))
            })
            .collect::<Result<Vec<_>>>()
    };
    let a = unitaries("A", &s.a_gates)?;
    let b = unitaries("B", &s.b_gates)?;
    if a.len() != 2 || b.len() != 2 {
        return Err(Error::NotNormalForm("binary inputs required".into()));
    }
    Ok((a, b))
}

/// Builds the two-party strategy. Rejects anything outside normal form.
pub fn lift(s: &Strategy) -> Result<ChshStrategy> {
    let (a, b) = check_normal_form(s)?;
    Ok(ChshStrategy {
        shared_state: bell_pair(),
        alice_gates: a.iter().map(ComplexMatrix::transpose).collect(),
        bob_gates: b,
        alice_measurement: Measurement::x(),
        bob_measurement: Measurement::x(),
    })
}

fn check_chsh_dims(cs: &ChshStrategy) -> Result<()> {
    if cs.shared_state.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "two-qubit shared state".into(),
            found: format!("dimension {}", cs.shared_state.dim()),
        });
    }
    let all_qubit = cs.alice_gates.iter().chain(&cs.bob_gates).all(|g| g.rows() == 2 && g.cols() == 2)
        && cs.alice_measurement.dim() == 2
        && cs.bob_measurement.dim() == 2;
    if !all_qubit {
        return Err(Error::DimensionMismatch { expected: "2x2 local gates".into(), found: "other".into() });
    }
    Ok(())
}

/// Exact joint distribution of (x, y) for every input pair.
pub fn evaluate_chsh(cs: &ChshStrategy) -> Result<ChshReport> {
    check_chsh_dims(cs)?;
    let mut per_input = Vec::new();
    let mut joint_table = Vec::new();
    for (a, alice) in cs.alice_gates.iter().enumerate() {
        for (b, bob) in cs.bob_gates.iter().enumerate() {
            let rho = cs.shared_state.evolve(&alice.tensor(bob))?;
            let target = (a * b) % 2;
            let mut win = 0.0;
            for (pa, &x) in cs.alice_measurement.projectors().iter().zip(cs.alice_measurement.labels()) {
                for (pb, &y) in cs.bob_measurement.projectors().iter().zip(cs.bob_measurement.labels()) {
                    let proj = pa.tensor(pb);
                    let probability = proj.matmul(rho.density())?.trace().re;
                    joint_table.push(JointOutcome { a, b, x, y, probability });
                    if (x ^ y) == target {
                        win += probability;
                    }
                }
            }
            per_input.push(ChshWin { a, b, probability: win });
        }
    }
    Ok(ChshReport { per_input, joint_table })
}

/// Bob's (normalized) qubit after Alice applies her gate for input `a` and
/// reads `x`, before Bob acts.
pub fn bob_residual_state(cs: &ChshStrategy, a: usize, x: usize) -> Result<State> {
    check_chsh_dims(cs)?;
    let rho = cs.shared_state.evolve(&cs.alice_gates[a].tensor(&ComplexMatrix::identity(2)))?;
    let idx = cs
        .alice_measurement
        .labels()
        .iter()
        .position(|&l| l == x)
        .ok_or_else(|| Error::InvalidMeasurement(format!("no outcome labeled {x}")))?;
    let proj = cs.alice_measurement.projectors()[idx].tensor(&ComplexMatrix::identity(2));
    let post = proj.matmul(rho.density())?.matmul(&proj)?;
    // partial trace over Alice
    let mut bob = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            bob[(i, j)] = post.get(i, j) + post.get(2 + i, 2 + j);
        }
    }
    let p = bob.trace().re;
    if p < COMPLETENESS_TOL {
        return Err(Error::InvalidState(format!("outcome {x} has probability zero")));
    }
    State::from_density(bob.scale_real(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceCheck {
    pub passed: bool,
    pub max_deviation: f64,
}

/// Compares per-input win probabilities of `s` and its lift.
pub fn verify_equivalence(s: &Strategy, tol: f64) -> Result<EquivalenceCheck> {
    let lifted = evaluate_chsh(&lift(s)?)?;
    let single = evaluate(&GameSpec::chsh(), s)?;
    let max_deviation = single
        .per_input
        .iter()
        .map(|w| {
            let other = lifted.probability(w.a, w.b).expect("same input alphabet");
            (w.probability - other).abs()
        })
        .fold(0.0, f64::max);
    Ok(EquivalenceCheck { passed: max_deviation < tol, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{gates, Channel};
    use std::f64::consts::PI;

    fn normal_form(a: [ComplexMatrix; 2], b: [ComplexMatrix; 2]) -> Strategy {
        Strategy::unitary(State::plus(2), a.to_vec(), b.to_vec(), Measurement::x()).unwrap()
    }

    fn optimal() -> Strategy {
        normal_form([gates::identity2(), gates::s()], [gates::t().dagger(), gates::t()])
    }

    #[test]
    fn identity_lift_measures_bell_pair_directly() {
        let id = gates::identity2();
        let cs = lift(&normal_form([id.clone(), id.clone()], [id.clone(), id.clone()])).unwrap();
        assert!(cs.alice_gates.iter().chain(&cs.bob_gates).all(|g| g == &id));
        let r = evaluate_chsh(&cs).unwrap();
        assert!((r.probability(0, 0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lifted_s_is_diagonal_transpose() {
        let cs = lift(&optimal()).unwrap();
        assert_eq!(cs.alice_gates[1], gates::s());
    }

    #[test]
    fn optimal_lift_reaches_tsirelson_on_every_input() {
        let r = evaluate_chsh(&lift(&optimal()).unwrap()).unwrap();
        let c2 = (PI / 8.0).cos().powi(2);
        for w in &r.per_input {
            assert!((w.probability - c2).abs() < 1e-12);
        }
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let total: f64 =
                (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).map(|(x, y)| r.joint(a, b, x, y).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn residual_state_is_teleported_gate() {
        let s = optimal();
        let cs = lift(&s).unwrap();
        let z = gates::pauli_z();
        let plus = gates::plus_vector(2);
        for a in 0..2 {
            let ua = s.a_gates[a].as_unitary().unwrap();
            for x in 0..2 {
                let op = if x == 0 { ua.clone() } else { ua.matmul(&z).unwrap() };
                let expected = crate::qcore::matrix::apply(&op, &plus).unwrap();
                let residual = bob_residual_state(&cs, a, x).unwrap();
                assert!((residual.fidelity_with_pure(&expected) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn verify_identity_and_optimal() {
        let id = gates::identity2();
        let check = verify_equivalence(&normal_form([id.clone(), id.clone()], [id.clone(), id]), 1e-12).unwrap();
        assert!(check.passed && check.max_deviation < 1e-12);
        assert!(verify_equivalence(&optimal(), 1e-12).unwrap().passed);
    }

    #[test]
    fn rejects_non_normal_forms() {
        let mut s = optimal();
        s.initial = State::zero();
        assert!(matches!(lift(&s), Err(Error::NotNormalForm(_))));

        let mut s = optimal();
        s.measurement = Measurement::z();
        assert!(matches!(lift(&s), Err(Error::NotNormalForm(_))));

        let mut s = optimal();
        s.b_gates[0] = Channel::erase();
        assert!(matches!(lift(&s), Err(Error::NotNormalForm(_))));

        let q =
            Strategy::unitary(State::plus(3), vec![gates::shift(3)], vec![gates::shift(3)], Measurement::fourier(3))
                .unwrap();
        assert!(matches!(lift(&q), Err(Error::NotNormalForm(_))));
    }
}
