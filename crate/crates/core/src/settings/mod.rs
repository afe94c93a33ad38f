//! Game values for each physical setting.
//!
//! Finite settings are solved by exhaustive enumeration in a fixed iteration
//! order (first maximum found wins, so witnesses are deterministic). The
//! unitary setting is solved numerically with restarted Nelder–Mead.

mod classical;
mod clifford;
pub mod optimizer;
mod qutrit;
mod sweep;
mod unitary;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{evaluate, evaluate_classical, ClassicalStrategy, GameSpec, Strategy};
use crate::qcore::{gates, Channel, ComplexMatrix, Measurement, PauliAxis, State};

pub use classical::{
    classical_search, value_classical_irreversible, value_classical_q3, value_classical_q3_permutations,
    value_classical_reversible, GatePool,
};
pub use clifford::{clifford_group_d2, preserves_stabilizer_states, value_clifford, value_clifford_plus_rz, QubitPool};
pub use optimizer::{NelderMead, OptimizerConfig, DEFAULT_SEED};
pub use qutrit::{qutrit_q3_strategy, value_qutrit_q3_fixed, QUTRIT_Q3_VALUE};
pub use sweep::{epsilon_sweep, open_interval_grid, p_suc_formula, rz_strategy, SweepPoint};
pub use unitary::{euler_strategy, optimal_angles, value_unitary, value_unitary_free, z_rotation_grid, ZGridResult};

/// Consistency between a witness and its claimed value.
pub const WITNESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "epsilon", rename_all = "snake_case")]
pub enum SettingKind {
    Unitary,
    Clifford,
    ClassicalReversible,
    ClassicalIrreversible,
    CliffordPlusRz(f64),
    QutritUnitaryFixed,
    /// Trit, shift gates only, modulus-3 game.
    ClassicalQ3Shift,
    /// Trit, all permutation gates, modulus-3 game.
    ClassicalQ3Permutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SettingSpec {
    pub kind: SettingKind,
    pub dimension: usize,
}

impl SettingSpec {
    pub fn new(kind: SettingKind, dimension: usize) -> Result<Self> {
        use SettingKind::*;
        let ok = match kind {
            Unitary | Clifford | ClassicalIrreversible => dimension == 2,
            CliffordPlusRz(eps) => {
                if !(eps > 0.0 && eps < FRAC_PI_2) {
                    return Err(Error::OutOfRange { value: eps, range: "(0, pi/2)" });
                }
                dimension == 2
            }
            ClassicalReversible => dimension == 2 || dimension == 3,
            QutritUnitaryFixed | ClassicalQ3Shift | ClassicalQ3Permutation => dimension == 3,
        };
        if !ok {
            return Err(Error::UnsupportedDimension(dimension));
        }
        Ok(Self { kind, dimension })
    }

    /// The game this setting is played with.
    pub fn game(&self) -> GameSpec {
        match self.kind {
            SettingKind::QutritUnitaryFixed | SettingKind::ClassicalQ3Shift | SettingKind::ClassicalQ3Permutation => {
                GameSpec::new(3).expect("supported modulus")
            }
            _ => GameSpec::chsh(),
        }
    }
}

impl fmt::Display for SettingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SettingKind::Unitary => write!(f, "unitary"),
            SettingKind::Clifford => write!(f, "clifford"),
            SettingKind::ClassicalReversible => write!(f, "classical-reversible (d={})", self.dimension),
            SettingKind::ClassicalIrreversible => write!(f, "irreversible"),
            SettingKind::CliffordPlusRz(e) => write!(f, "clifford+rz (epsilon={e})"),
            SettingKind::QutritUnitaryFixed => write!(f, "qutrit-q3 (fixed strategy)"),
            SettingKind::ClassicalQ3Shift => write!(f, "classical-q3 (shift gates)"),
            SettingKind::ClassicalQ3Permutation => write!(f, "classical-q3 (all permutations)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Optimized,
    /// A single prescribed strategy, evaluated exactly.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Quantum(Strategy),
    Classical(ClassicalStrategy),
}

impl Witness {
    pub fn evaluate(&self, game: &GameSpec) -> Result<f64> {
        Ok(match self {
            Witness::Quantum(s) => evaluate(game, s)?.average,
            Witness::Classical(s) => evaluate_classical(game, s)?.average,
        })
    }
}

/// Human-readable names for a witness; `None` where nothing matched.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessDescription {
    pub system: &'static str,
    pub initial: Option<String>,
    pub a_gates: Vec<Option<String>>,
    pub b_gates: Vec<Option<String>>,
    pub measurement: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueResult {
    pub setting: SettingSpec,
    pub value: f64,
    pub witness: Witness,
    pub method: Method,
    pub strategies_examined: u64,
    /// Distinct averages seen during an exhaustive search (binned at 1e-9)
    /// with their counts; empty for other methods.
    pub value_histogram: Vec<(f64, u64)>,
}

impl ValueResult {
    /// Re-evaluates the witness from scratch.
    pub fn reevaluate(&self) -> Result<f64> {
        self.witness.evaluate(&self.setting.game())
    }

    pub fn is_consistent(&self) -> bool {
        self.reevaluate().map(|v| (v - self.value).abs() <= WITNESS_TOL).unwrap_or(false)
    }

    pub fn describe(&self) -> WitnessDescription {
        describe_witness(&self.witness)
    }
}

/// Accumulates a histogram of averages at 1e-9 resolution.
#[derive(Debug, Default, Clone)]
pub(crate) struct Histogram {
    bins: BTreeMap<i64, u64>,
}

impl Histogram {
    pub(crate) fn add(&mut self, value: f64) {
        *self.bins.entry((value * 1e9).round() as i64).or_insert(0) += 1;
    }

    pub(crate) fn merge(&mut self, other: Histogram) {
        for (k, n) in other.bins {
            *self.bins.entry(k).or_insert(0) += n;
        }
    }

    pub(crate) fn into_vec(self) -> Vec<(f64, u64)> {
        self.bins.into_iter().map(|(k, n)| (k as f64 * 1e-9, n)).collect()
    }
}

/// Dispatches to the right solver for `spec`.
pub fn compute_value(spec: &SettingSpec, config: &OptimizerConfig) -> Result<ValueResult> {
    match spec.kind {
        SettingKind::Unitary => value_unitary(config),
        SettingKind::Clifford => value_clifford(),
        SettingKind::ClassicalReversible => value_classical_reversible(spec.dimension),
        SettingKind::ClassicalIrreversible => value_classical_irreversible(),
        SettingKind::CliffordPlusRz(eps) => value_clifford_plus_rz(eps),
        SettingKind::QutritUnitaryFixed => value_qutrit_q3_fixed(),
        SettingKind::ClassicalQ3Shift => value_classical_q3(),
        SettingKind::ClassicalQ3Permutation => value_classical_q3_permutations(),
    }
}

fn name_state(s: &State) -> Option<String> {
    const TOL: f64 = 1e-9;
    let d = s.dim();
    if d == 2 {
        for (name, p) in State::pauli_eigenstates() {
            if p.density().approx_eq(s.density(), TOL) {
                return Some(name.to_string());
            }
        }
    }
    if d == 3 {
        let t3_plus = State::plus(3).evolve(&gates::t3()).ok()?;
        if t3_plus.density().approx_eq(s.density(), TOL) {
            return Some("T3|+>".into());
        }
    }
    (0..d)
        .find(|&i| State::basis(d, i).density().approx_eq(s.density(), TOL))
        .map(|i| format!("|{i}>"))
        .or_else(|| State::plus(d).density().approx_eq(s.density(), TOL).then(|| "|+>".into()))
}

fn name_channel(ch: &Channel) -> Option<String> {
    if let Some(u) = ch.as_unitary() {
        return gates::recognize(u).map(str::to_string);
    }
    if ch.dim() == 2 && ch.same_kraus(&Channel::erase(), 1e-9) {
        return Some("ERASE".into());
    }
    None
}

fn name_measurement(m: &Measurement) -> Option<String> {
    const TOL: f64 = 1e-9;
    let same = |other: &Measurement| {
        m.labels() == other.labels()
            && m.projectors().len() == other.projectors().len()
            && m.projectors().iter().zip(other.projectors()).all(|(p, q)| p.approx_eq(q, TOL))
    };
    if m.dim() == 2 {
        for axis in PauliAxis::ALL {
            for flipped in [false, true] {
                if same(&Measurement::pauli(axis, flipped)) {
                    let suffix = if flipped { " (labels swapped)" } else { "" };
                    return Some(format!("{}{}", axis.name(), suffix));
                }
            }
        }
    }
    if same(&Measurement::fourier(m.dim())) {
        return Some("Fourier (X) basis".into());
    }
    let diagonal =
        m.projectors().iter().all(|p| (0..p.rows()).all(|r| (0..p.cols()).all(|c| r == c || p.get(r, c).norm() < TOL)));
    diagonal.then(|| format!("computational, labels {:?}", m.labels()))
}

fn name_stochastic(f: &crate::game::StochasticMap) -> String {
    let d = f.dim();
    match f.as_function() {
        Some(t) if t.iter().enumerate().all(|(i, &x)| i == x) => "I".into(),
        Some(t) if d == 2 && t == [1, 0] => "NOT".into(),
        Some(t) if t.iter().enumerate().all(|(i, &x)| x == (i + 1) % d) => "X".into(),
        Some(t) if t.iter().enumerate().all(|(i, &x)| x == (i + 2) % d) => "X^2".into(),
        Some(t) if t.iter().all(|&x| x == t[0]) => format!("const-{} (ERASE)", t[0]),
        Some(t) => format!("map {t:?}"),
        None if d == 2 && (f.entry(0, 0) - 1.0).abs() < 1e-12 && f.entry(1, 0).abs() < 1e-12 => {
            format!("partial ERASE (p={})", f.entry(0, 1))
        }
        None => "stochastic".into(),
    }
}

pub fn describe_witness(w: &Witness) -> WitnessDescription {
    match w {
        Witness::Quantum(s) => WitnessDescription {
            system: "quantum",
            initial: name_state(&s.initial),
            a_gates: s.a_gates.iter().map(name_channel).collect(),
            b_gates: s.b_gates.iter().map(name_channel).collect(),
            measurement: name_measurement(&s.measurement),
        },
        Witness::Classical(s) => WitnessDescription {
            system: "classical",
            initial: Some(s.initial.to_string()),
            a_gates: s.a_gates.iter().map(|g| Some(name_stochastic(g))).collect(),
            b_gates: s.b_gates.iter().map(|g| Some(name_stochastic(g))).collect(),
            measurement: Some(format!("readout {:?}", s.readout)),
        },
    }
}

/// Raw matrices of a quantum witness, for output when names are missing.
pub fn witness_matrices(s: &Strategy) -> (Vec<Vec<ComplexMatrix>>, Vec<Vec<ComplexMatrix>>) {
    let kraus = |chs: &[Channel]| chs.iter().map(|c| c.kraus().to_vec()).collect();
    (kraus(&s.a_gates), kraus(&s.b_gates))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setting_compatibility() {
        assert!(SettingSpec::new(SettingKind::Clifford, 3).is_err());
        assert!(SettingSpec::new(SettingKind::ClassicalReversible, 3).is_ok());
        assert!(SettingSpec::new(SettingKind::ClassicalReversible, 4).is_err());
        assert!(SettingSpec::new(SettingKind::CliffordPlusRz(0.0), 2).is_err());
        assert!(SettingSpec::new(SettingKind::CliffordPlusRz(FRAC_PI_2), 2).is_err());
        assert!(SettingSpec::new(SettingKind::QutritUnitaryFixed, 3).is_ok());
        assert_eq!(SettingSpec::new(SettingKind::ClassicalQ3Shift, 3).unwrap().game().q(), 3);
    }

    #[test]
    fn names_known_objects() {
        assert_eq!(name_measurement(&Measurement::x()).as_deref(), Some("X"));
        assert_eq!(name_measurement(&Measurement::pauli(PauliAxis::Z, true)).as_deref(), Some("Z (labels swapped)"));
        assert_eq!(name_channel(&Channel::erase()).as_deref(), Some("ERASE"));
        assert_eq!(name_state(&State::minus_i()).as_deref(), Some("|-i>"));
        assert_eq!(name_state(&State::basis(3, 2)).as_deref(), Some("|2>"));
    }
}
