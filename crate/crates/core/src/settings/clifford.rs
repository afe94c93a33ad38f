use rayon::prelude::*;

use crate::error::Result;
use crate::game::{GameSpec, Strategy};
use crate::qcore::{gates, ComplexMatrix, Measurement, PauliAxis, State};
use crate::settings::{Histogram, Method, SettingKind, SettingSpec, ValueResult, Witness};

const CANONICAL_TOL: f64 = 1e-9;

/// The 24 single-qubit Cliffords modulo global phase, as the closure of
/// {H, S} in breadth-first order starting from the identity.
pub fn clifford_group_d2() -> Vec<ComplexMatrix> {
    let generators = [gates::hadamard(), gates::s()];
    let mut group = vec![ComplexMatrix::identity(2).phase_canonical()];
    let mut frontier = 0;
    while frontier < group.len() {
        let g = group[frontier].clone();
        frontier += 1;
        for h in &generators {
            let next = h.matmul(&g).expect("2x2").phase_canonical();
            if !group.iter().any(|e| e.approx_eq(&next, CANONICAL_TOL)) {
                group.push(next);
            }
        }
    }
    assert_eq!(group.len(), 24, "single-qubit Clifford closure must have 24 elements");
    group
}

/// Finite pool of qubit strategy components, searched exhaustively.
pub struct QubitPool {
    pub initials: Vec<(String, State)>,
    pub gates: Vec<(String, ComplexMatrix)>,
    pub measurements: Vec<(String, Measurement)>,
}

impl QubitPool {
    /// Pauli eigenstates, Clifford group, Pauli measurements with both
    /// labelings.
    pub fn clifford() -> Self {
        let gates = clifford_group_d2()
            .into_iter()
            .enumerate()
            .map(|(i, g)| (gates::recognize(&g).map(str::to_string).unwrap_or_else(|| format!("C{i}")), g))
            .collect();
        Self { initials: pauli_initials(), gates, measurements: pauli_measurements() }
    }

    /// Clifford pool plus the pair R_z(ε), R_z(ε)†.
    pub fn clifford_plus_rz(epsilon: f64) -> Self {
        let mut pool = Self::clifford();
        pool.gates.push((format!("Rz({epsilon})"), gates::rz(epsilon)));
        pool.gates.push((format!("Rz({epsilon})†"), gates::rz(epsilon).dagger()));
        pool
    }

    pub fn size(&self) -> u64 {
        let g = self.gates.len() as u64;
        self.initials.len() as u64 * self.measurements.len() as u64 * g.pow(4)
    }

    /// `table[a_gate][b_gate][label]`: probability that measurement `m`
    /// reports `label` on `B A |initial⟩`.
    fn win_table(&self, initial: &State, m: &Measurement) -> Vec<[f64; 2]> {
        let g = self.gates.len();
        let mut table = vec![[0.0; 2]; g * g];
        for (ia, (_, a)) in self.gates.iter().enumerate() {
            let after_a = initial.evolve(a).expect("2x2");
            for (ib, (_, b)) in self.gates.iter().enumerate() {
                let rho = after_a.evolve(b).expect("2x2");
                for (label, slot) in table[ia * g + ib].iter_mut().enumerate() {
                    *slot = m.probability_of(&rho, label).expect("qubit measurement");
                }
            }
        }
        table
    }

    /// Exhaustive search. Iteration order: initial, measurement, A₀, A₁, B₀,
    /// B₁ (last fastest); the first maximum found is kept.
    pub fn search(&self, setting: SettingSpec) -> Result<ValueResult> {
        let g = self.gates.len();
        let combos: Vec<(usize, usize)> =
            (0..self.initials.len()).flat_map(|i| (0..self.measurements.len()).map(move |m| (i, m))).collect();
        let partial: Vec<(f64, [usize; 4], Histogram)> = combos
            .par_iter()
            .map(|&(i, m)| {
                let table = self.win_table(&self.initials[i].1, &self.measurements[m].1);
                let mut best = (f64::NEG_INFINITY, [0; 4]);
                let mut hist = Histogram::default();
                for a0 in 0..g {
                    for a1 in 0..g {
                        for b0 in 0..g {
                            let p00 = table[a0 * g + b0][0];
                            let p10 = table[a1 * g + b0][0];
                            for b1 in 0..g {
                                // win targets: (0,0),(0,1),(1,0) → 0 and (1,1) → 1
                                let avg = (p00 + table[a0 * g + b1][0] + p10 + table[a1 * g + b1][1]) / 4.0;
                                hist.add(avg);
                                if avg > best.0 + 1e-12 {
                                    best = (avg, [a0, a1, b0, b1]);
                                }
                            }
                        }
                    }
                }
                (best.0, best.1, hist)
            })
            .collect();

        let mut hist = Histogram::default();
        let mut best = (f64::NEG_INFINITY, 0, [0; 4]);
        for (k, (value, idx, h)) in partial.into_iter().enumerate() {
            hist.merge(h);
            if value > best.0 + 1e-12 {
                best = (value, k, idx);
            }
        }
        let (_, k, [a0, a1, b0, b1]) = best;
        let (i, m) = combos[k];
        let gate = |j: usize| self.gates[j].1.clone();
        let witness = Strategy::unitary(
            self.initials[i].1.clone(),
            vec![gate(a0), gate(a1)],
            vec![gate(b0), gate(b1)],
            self.measurements[m].1.clone(),
        )?;
        // Clifford averages are multiples of 1/8; snap the re-evaluated value
        // onto that grid so round-off does not leak into the reported value.
        let exact = crate::game::evaluate(&GameSpec::chsh(), &witness)?.average;
        let snapped = (8.0 * exact).round() / 8.0;
        let value = if (snapped - exact).abs() < 1e-9 { snapped } else { exact };
        Ok(ValueResult {
            setting,
            value,
            witness: Witness::Quantum(witness),
            method: Method::Exhaustive,
            strategies_examined: self.size(),
            value_histogram: hist.into_vec(),
        })
    }
}

fn pauli_initials() -> Vec<(String, State)> {
    State::pauli_eigenstates().into_iter().map(|(n, s)| (n.to_string(), s)).collect()
}

fn pauli_measurements() -> Vec<(String, Measurement)> {
    PauliAxis::ALL
        .iter()
        .flat_map(|&axis| {
            [false, true].into_iter().map(move |flipped| {
                let name = if flipped { format!("{}'", axis.name()) } else { axis.name().to_string() };
                (name, Measurement::pauli(axis, flipped))
            })
        })
        .collect()
}

pub fn value_clifford() -> Result<ValueResult> {
    QubitPool::clifford().search(SettingSpec::new(SettingKind::Clifford, 2)?)
}

/// Exhaustive value over single-gate choices from the Clifford group plus
/// `R_z(ε)` and its inverse. The group those gates generate is infinite, so
/// this is a lower bound on the value of the enlarged setting.
pub fn value_clifford_plus_rz(epsilon: f64) -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::CliffordPlusRz(epsilon), 2)?;
    QubitPool::clifford_plus_rz(epsilon).search(setting)
}

/// Stabilizer-state image check: every element maps the six Pauli
/// eigenstates onto the same set.
pub fn preserves_stabilizer_states(g: &ComplexMatrix) -> bool {
    let states = State::pauli_eigenstates();
    states.iter().all(|(_, s)| {
        let image = s.evolve(g).expect("2x2");
        states.iter().any(|(_, t)| t.density().approx_eq(image.density(), 1e-9))
    })
}
