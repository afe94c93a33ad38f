use crate::error::{Error, Result};
use crate::game::{evaluate_classical, ClassicalStrategy};
use crate::settings::{Histogram, Method, SettingKind, SettingSpec, ValueResult, Witness};

/// Which maps on `0..d` a classical gate slot may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GatePool {
    /// Powers of the cyclic shift `X` (the generalized Pauli group on symbols).
    Shifts,
    /// Permutations only.
    Reversible,
    /// Every function `0..d → 0..d`.
    All,
}

impl GatePool {
    /// Function tables in search order: identity and powers of the cyclic
    /// shift first, then the remaining permutations lexicographically, then
    /// (for [`GatePool::All`]) the non-injective maps lexicographically.
    pub fn functions(self, d: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..d).map(|k| (0..d).map(|s| (s + k) % d).collect()).collect();
        if self == GatePool::Shifts {
            return out;
        }
        let all = all_functions(d);
        out.extend(all.iter().filter(|f| is_permutation(f) && !out.contains(f)).cloned().collect::<Vec<_>>());
        if self == GatePool::All {
            out.extend(all.into_iter().filter(|f| !is_permutation(f)));
        }
        out
    }
}

fn all_functions(d: usize) -> Vec<Vec<usize>> {
    let total = d.pow(d as u32);
    (0..total)
        .map(|mut n| {
            let mut f = vec![0; d];
            for slot in f.iter_mut().rev() {
                *slot = n % d;
                n /= d;
            }
            f
        })
        .collect()
}

fn is_permutation(f: &[usize]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
}

/// All labelings of `d` symbols into `0..q`, lexicographic.
fn all_labelings(d: usize, q: usize) -> Vec<Vec<usize>> {
    (0..q.pow(d as u32))
        .map(|mut n| {
            let mut l = vec![0; d];
            for slot in l.iter_mut().rev() {
                *slot = n % q;
                n /= q;
            }
            l
        })
        .collect()
}

/// Exhaustive search over deterministic classical strategies: initial
/// symbol, one map from `pool` per gate slot, and one readout from
/// `readouts`. Order: initial, A₀…A_{q−1}, B₀…B_{q−1}, readout (last fastest).
pub fn classical_search(
    setting: SettingSpec,
    d: usize,
    pool: GatePool,
    readouts: &[Vec<usize>],
) -> Result<ValueResult> {
    let game = setting.game();
    let q = game.q();
    let funcs = pool.functions(d);
    let slots = 2 * q;
    let n_inputs = (q * q) as f64;
    let targets: Vec<usize> = game.inputs().map(|(a, b)| (a * b) % q).collect();

    let mut best: Option<(f64, usize, Vec<usize>, usize)> = None;
    let mut hist = Histogram::default();
    let mut examined = 0u64;
    let mut idx = vec![0usize; slots];
    for initial in 0..d {
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let final_symbols: Vec<usize> = game
                .inputs()
                .map(|(a, b)| {
                    let after_a = funcs[idx[a]][initial];
                    funcs[idx[q + b]][after_a]
                })
                .collect();
            for (r, readout) in readouts.iter().enumerate() {
                let wins = final_symbols.iter().zip(&targets).filter(|(&s, &t)| readout[s] == t).count();
                let avg = wins as f64 / n_inputs;
                examined += 1;
                hist.add(avg);
                if best.as_ref().is_none_or(|b| avg > b.0 + 1e-12) {
                    best = Some((avg, initial, idx.clone(), r));
                }
            }
            // odometer, last slot fastest
            let mut k = slots;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < funcs.len() {
                    break;
                }
                idx[k] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }

    let (_, initial, gates_idx, r) = best.ok_or_else(|| Error::InvalidStrategy("empty search space".into()))?;
    let pick = |range: std::ops::Range<usize>| range.map(|k| funcs[gates_idx[k]].clone()).collect::<Vec<_>>();
    let witness = ClassicalStrategy::deterministic(initial, &pick(0..q), &pick(q..slots), readouts[r].clone())?;
    let value = evaluate_classical(&game, &witness)?.average;
    Ok(ValueResult {
        setting,
        value,
        witness: Witness::Classical(witness),
        method: Method::Exhaustive,
        strategies_examined: examined,
        value_histogram: hist.into_vec(),
    })
}

/// Permutation gates on `d ∈ {2, 3}` symbols, every bit readout.
pub fn value_classical_reversible(d: usize) -> Result<ValueResult> {
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    let setting = SettingSpec::new(SettingKind::ClassicalReversible, d)?;
    classical_search(setting, d, GatePool::Reversible, &all_labelings(d, 2))
}

/// Arbitrary functions on a bit, every readout.
pub fn value_classical_irreversible() -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::ClassicalIrreversible, 2)?;
    classical_search(setting, 2, GatePool::All, &all_labelings(2, 2))
}

/// Trit with shift gates `I, X, X²`, identity readout, modulus-3 game.
/// Every such strategy outputs `s + α_a + β_b`, a sum of one-input terms,
/// which is why its value equals the two-party classical bound 2/3.
pub fn value_classical_q3() -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::ClassicalQ3Shift, 3)?;
    classical_search(setting, 3, GatePool::Shifts, &[vec![0, 1, 2]])
}

/// Trit with all six permutation gates, identity readout, modulus-3 game.
/// Reaches 7/9: A_a sends 0 to a, then B₁ = I and B₂ = (1 2) compute `a·b`
/// exactly, losing only on (a, b) = (1, 0) and (2, 0).
pub fn value_classical_q3_permutations() -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::ClassicalQ3Permutation, 3)?;
    classical_search(setting, 3, GatePool::Reversible, &[vec![0, 1, 2]])
}
