//! The single-system game: a player receives `a`, applies `A_a`, receives
//! `b`, applies `B_b`, measures, and wins when the reported label equals
//! `a·b mod q`. Inputs are uniform, so a strategy's score is the plain mean
//! of its per-input win probabilities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{Channel, ComplexMatrix, Measurement, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GameSpec {
    q: usize,
}

impl GameSpec {
    pub fn new(q: usize) -> Result<Self> {
        match q {
            2 | 3 => Ok(Self { q }),
            _ => Err(Error::UnsupportedModulus(q)),
        }
    }

    /// The two-bit game.
    pub fn chsh() -> Self {
        Self { q: 2 }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Both inputs range over `0..q`.
    pub fn alphabet_size(&self) -> usize {
        self.q
    }

    pub fn inputs(&self) -> impl Iterator<Item = (usize, usize)> {
        let q = self.q;
        (0..q).flat_map(move |a| (0..q).map(move |b| (a, b)))
    }

    pub fn winning_answer(&self, a: usize, b: usize) -> Result<usize> {
        if a >= self.q || b >= self.q {
            return Err(Error::InputOutOfAlphabet { a, b, size: self.q });
        }
        Ok((a * b) % self.q)
    }
}

/// Free function form of [`GameSpec::winning_answer`].
pub fn winning_answer(spec: &GameSpec, a: usize, b: usize) -> Result<usize> {
    spec.winning_answer(a, b)
}

/// Quantum (or embedded classical) strategy: everything is fixed before the
/// inputs arrive.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    pub initial: State,
    pub a_gates: Vec<Channel>,
    pub b_gates: Vec<Channel>,
    pub measurement: Measurement,
}

impl Strategy {
    pub fn new(initial: State, a_gates: Vec<Channel>, b_gates: Vec<Channel>, measurement: Measurement) -> Result<Self> {
        let d = initial.dim();
        if a_gates.is_empty() || b_gates.is_empty() {
            return Err(Error::InvalidStrategy("gate maps must be nonempty".into()));
        }
        for ch in a_gates.iter().chain(&b_gates) {
            if ch.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: format!("channels of dimension {d}"),
                    found: format!("dimension {}", ch.dim()),
                });
            }
        }
        if measurement.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: format!("measurement of dimension {d}"),
                found: format!("dimension {}", measurement.dim()),
            });
        }
        Ok(Self { initial, a_gates, b_gates, measurement })
    }

    /// All gates unitary; convenience for the common case.
    pub fn unitary(
        initial: State,
        a_gates: Vec<ComplexMatrix>,
        b_gates: Vec<ComplexMatrix>,
        measurement: Measurement,
    ) -> Result<Self> {
        let wrap = |gates: Vec<ComplexMatrix>| gates.into_iter().map(Channel::unitary).collect::<Result<Vec<_>>>();
        Self::new(initial, wrap(a_gates)?, wrap(b_gates)?, measurement)
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    /// State just before the measurement on input (a, b).
    pub fn final_state(&self, a: usize, b: usize) -> Result<State> {
        let after_a = self.a_gates[a].apply(&self.initial)?;
        self.b_gates[b].apply(&after_a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputWin {
    pub a: usize,
    pub b: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InputErasure {
    pub a: usize,
    pub b: usize,
    /// Expected number of bits erased on this input.
    pub bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub per_input: Vec<InputWin>,
    pub average: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub erasure_ledger: Option<Vec<InputErasure>>,
}

impl EvaluationReport {
    fn from_per_input(per_input: Vec<InputWin>, erasure_ledger: Option<Vec<InputErasure>>) -> Self {
        let average = per_input.iter().map(|w| w.probability).sum::<f64>() / per_input.len() as f64;
        Self { per_input, average, erasure_ledger }
    }

    pub fn probability(&self, a: usize, b: usize) -> Option<f64> {
        self.per_input.iter().find(|w| w.a == a && w.b == b).map(|w| w.probability)
    }
}

fn check_alphabet(spec: &GameSpec, n_a: usize, n_b: usize) -> Result<()> {
    let q = spec.alphabet_size();
    if n_a != q || n_b != q {
        return Err(Error::InvalidStrategy(format!("gate maps cover {n_a} and {n_b} inputs, game needs {q} each")));
    }
    Ok(())
}

fn check_labels(spec: &GameSpec, labels: &[usize]) -> Result<()> {
    match labels.iter().find(|&&l| l >= spec.q()) {
        Some(&label) => Err(Error::LabelOutOfRange { label, q: spec.q() }),
        None => Ok(()),
    }
}

/// Exact success probabilities of a quantum strategy.
pub fn evaluate(spec: &GameSpec, s: &Strategy) -> Result<EvaluationReport> {
    check_alphabet(spec, s.a_gates.len(), s.b_gates.len())?;
    check_labels(spec, s.measurement.labels())?;
    let per_input = spec
        .inputs()
        .map(|(a, b)| {
            let target = spec.winning_answer(a, b)?;
            let rho = s.final_state(a, b)?;
            let probability = s.measurement.probability_of(&rho, target)?;
            Ok(InputWin { a, b, probability })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationReport::from_per_input(per_input, None))
}

/// Column-stochastic map on `0..d`: `entry(to, from)` is the probability of
/// moving from symbol `from` to symbol `to`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticMap {
    dim: usize,
    /// Row-major `[to][from]`.
    entries: Vec<f64>,
}

const STOCHASTIC_TOL: f64 = 1e-12;

impl StochasticMap {
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::NotStochastic(format!("expected {0}x{0} entries", dim)));
        }
        if let Some(x) = entries.iter().find(|x| !x.is_finite() || **x < -STOCHASTIC_TOL) {
            return Err(Error::NotStochastic(format!("entry {x} is negative or non-finite")));
        }
        for from in 0..dim {
            let col: f64 = (0..dim).map(|to| entries[to * dim + from]).sum();
            if (col - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic(format!("column {from} sums to {col}")));
            }
        }
        Ok(Self { dim, entries })
    }

    /// Deterministic map `s ↦ f[s]`.
    pub fn from_function(f: &[usize]) -> Result<Self> {
        let d = f.len();
        if let Some(&bad) = f.iter().find(|&&t| t >= d) {
            return Err(Error::NotStochastic(format!("image {bad} outside 0..{d}")));
        }
        let mut entries = vec![0.0; d * d];
        for (from, &to) in f.iter().enumerate() {
            entries[to * d + from] = 1.0;
        }
        Self::new(d, entries)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_function(&(0..d).collect::<Vec<_>>()).expect("identity")
    }

    /// Cyclic increment `s ↦ s + 1 mod d`.
    pub fn shift(d: usize) -> Self {
        Self::from_function(&(0..d).map(|s| (s + 1) % d).collect::<Vec<_>>()).expect("shift")
    }

    /// Bit flip.
    pub fn not() -> Self {
        Self::from_function(&[1, 0]).expect("not")
    }

    pub fn constant(d: usize, value: usize) -> Result<Self> {
        Self::from_function(&vec![value; d])
    }

    /// Erase to 0 with probability p, leave the bit alone otherwise.
    pub fn partial_erase(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { value: p, range: "[0, 1]" });
        }
        // [to][from]: column 1 splits between 0 (p) and 1 (1 − p)
        Self::new(2, vec![1.0, p, 0.0, 1.0 - p])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, to: usize, from: usize) -> f64 {
        self.entries[to * self.dim + from]
    }

    /// The underlying function if every column is a point mass.
    pub fn as_function(&self) -> Option<Vec<usize>> {
        (0..self.dim)
            .map(|from| (0..self.dim).find(|&to| (self.entry(to, from) - 1.0).abs() <= STOCHASTIC_TOL))
            .collect()
    }

    /// True for permutation matrices.
    pub fn is_reversible(&self) -> bool {
        match self.as_function() {
            Some(f) => {
                let mut seen = vec![false; self.dim];
                f.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
            }
            None => false,
        }
    }

    pub fn apply(&self, dist: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|to| (0..self.dim).map(|from| self.entry(to, from) * dist[from]).sum()).collect()
    }

    /// Expected erased bits when applied to `dist`: the probability mass an
    /// irreversible map moves off its current symbol. Permutations erase
    /// nothing.
    pub fn erased_bits(&self, dist: &[f64]) -> f64 {
        if self.is_reversible() {
            return 0.0;
        }
        (0..self.dim)
            .map(|from| {
                let moved: f64 = (0..self.dim).filter(|&to| to != from).map(|to| self.entry(to, from)).sum();
                dist[from] * moved
            })
            .sum()
    }

    /// Kraus embedding {√M(j,i) |j⟩⟨i|} as a quantum channel.
    pub fn to_channel(&self) -> Channel {
        let mut kraus = Vec::new();
        for from in 0..self.dim {
            for to in 0..self.dim {
                let p = self.entry(to, from);
                if p > 0.0 {
                    kraus.push(ComplexMatrix::basis_op(self.dim, to, from).scale_real(p.sqrt()));
                }
            }
        }
        Channel::new(kraus).expect("stochastic maps embed as trace-preserving channels")
    }
}

/// Strategy for a classical system with symbols `0..dim`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalStrategy {
    pub dim: usize,
    pub initial: usize,
    pub a_gates: Vec<StochasticMap>,
    pub b_gates: Vec<StochasticMap>,
    /// Answer reported for each final symbol.
    pub readout: Vec<usize>,
}

impl ClassicalStrategy {
    pub fn new(
        initial: usize,
        a_gates: Vec<StochasticMap>,
        b_gates: Vec<StochasticMap>,
        readout: Vec<usize>,
    ) -> Result<Self> {
        let dim = readout.len();
        if initial >= dim {
            return Err(Error::InvalidStrategy(format!("initial symbol {initial} outside 0..{dim}")));
        }
        if a_gates.is_empty() || b_gates.is_empty() {
            return Err(Error::InvalidStrategy("gate maps must be nonempty".into()));
        }
        if let Some(g) = a_gates.iter().chain(&b_gates).find(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: format!("maps on {dim} symbols"),
                found: format!("{} symbols", g.dim()),
            });
        }
        Ok(Self { dim, initial, a_gates, b_gates, readout })
    }

    /// Deterministic strategy from function tables.
    pub fn deterministic(initial: usize, a: &[Vec<usize>], b: &[Vec<usize>], readout: Vec<usize>) -> Result<Self> {
        let maps = |fs: &[Vec<usize>]| fs.iter().map(|f| StochasticMap::from_function(f)).collect::<Result<Vec<_>>>();
        Self::new(initial, maps(a)?, maps(b)?, readout)
    }

    /// Same strategy as a quantum one: basis-state preparation, Kraus
    /// embedding of each map, computational-basis readout.
    pub fn to_quantum(&self) -> Result<Strategy> {
        let channels = |maps: &[StochasticMap]| maps.iter().map(StochasticMap::to_channel).collect::<Vec<_>>();
        Strategy::new(
            State::basis(self.dim, self.initial),
            channels(&self.a_gates),
            channels(&self.b_gates),
            Measurement::computational(self.readout.clone())?,
        )
    }

    pub fn is_reversible(&self) -> bool {
        self.a_gates.iter().chain(&self.b_gates).all(StochasticMap::is_reversible)
    }
}

/// Exact success probabilities of a classical strategy, with the expected
/// number of erased bits per input.
pub fn evaluate_classical(spec: &GameSpec, s: &ClassicalStrategy) -> Result<EvaluationReport> {
    check_alphabet(spec, s.a_gates.len(), s.b_gates.len())?;
    check_labels(spec, &s.readout)?;
    let mut per_input = Vec::new();
    let mut ledger = Vec::new();
    for (a, b) in spec.inputs() {
        let target = spec.winning_answer(a, b)?;
        let mut dist = vec![0.0; s.dim];
        dist[s.initial] = 1.0;
        let mut bits = s.a_gates[a].erased_bits(&dist);
        dist = s.a_gates[a].apply(&dist);
        bits += s.b_gates[b].erased_bits(&dist);
        dist = s.b_gates[b].apply(&dist);
        let probability = dist.iter().zip(&s.readout).filter(|(_, &l)| l == target).map(|(p, _)| p).sum();
        per_input.push(InputWin { a, b, probability });
        ledger.push(InputErasure { a, b, bits });
    }
    Ok(EvaluationReport::from_per_input(per_input, Some(ledger)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;
    use std::f64::consts::PI;

    fn optimal() -> Strategy {
        Strategy::unitary(
            State::plus(2),
            vec![gates::identity2(), gates::s()],
            vec![gates::t().dagger(), gates::t()],
            Measurement::x(),
        )
        .unwrap()
    }

    #[test]
    fn winning_answers() {
        let g2 = GameSpec::chsh();
        assert_eq!(g2.winning_answer(1, 1).unwrap(), 1);
        assert_eq!(g2.winning_answer(1, 0).unwrap(), 0);
        assert_eq!(GameSpec::new(3).unwrap().winning_answer(2, 2).unwrap(), 1);
        assert!(matches!(g2.winning_answer(2, 0), Err(Error::InputOutOfAlphabet { .. })));
        assert_eq!(GameSpec::new(4).unwrap_err(), Error::UnsupportedModulus(4));
    }

    #[test]
    fn optimal_unitary_strategy_hits_every_input_equally() {
        let r = evaluate(&GameSpec::chsh(), &optimal()).unwrap();
        let c2 = (PI / 8.0).cos().powi(2);
        assert!((r.average - c2).abs() < 1e-12);
        for w in &r.per_input {
            assert!((w.probability - c2).abs() < 1e-12, "{w:?}");
        }
        assert!(r.erasure_ledger.is_none());
    }

    #[test]
    fn trivial_strategy_scores_three_quarters() {
        let id = || vec![gates::identity2(), gates::identity2()];
        let s = Strategy::unitary(State::zero(), id(), id(), Measurement::computational(vec![0, 0]).unwrap()).unwrap();
        let r = evaluate(&GameSpec::chsh(), &s).unwrap();
        assert!((r.average - 0.75).abs() < 1e-15);
    }

    #[test]
    fn erase_strategy_always_wins() {
        let s = Strategy::new(
            State::zero(),
            vec![Channel::identity(2), Channel::unitary(gates::pauli_x()).unwrap()],
            vec![Channel::erase(), Channel::identity(2)],
            Measurement::z(),
        )
        .unwrap();
        let r = evaluate(&GameSpec::chsh(), &s).unwrap();
        assert!((r.average - 1.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_bad_labels_and_alphabet() {
        let mut s = optimal();
        s.measurement = Measurement::computational(vec![0, 2]).unwrap();
        assert_eq!(evaluate(&GameSpec::chsh(), &s).unwrap_err(), Error::LabelOutOfRange { label: 2, q: 2 });
        assert!(matches!(evaluate(&GameSpec::new(3).unwrap(), &optimal()), Err(Error::InvalidStrategy(_))));
    }

    #[test]
    fn strategy_rejects_dimension_mismatch() {
        let r = Strategy::unitary(State::plus(3), vec![gates::identity2()], vec![gates::identity2()], Measurement::x());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn classical_erase_strategy() {
        let s = ClassicalStrategy::new(
            0,
            vec![StochasticMap::identity(2), StochasticMap::not()],
            vec![StochasticMap::constant(2, 0).unwrap(), StochasticMap::identity(2)],
            vec![0, 1],
        )
        .unwrap();
        let r = evaluate_classical(&GameSpec::chsh(), &s).unwrap();
        assert_eq!(r.average, 1.0);
        let ledger = r.erasure_ledger.unwrap();
        let erased: Vec<_> = ledger.iter().filter(|e| e.bits > 0.0).map(|e| (e.a, e.b)).collect();
        assert_eq!(erased, vec![(1, 0)]);
    }

    #[test]
    fn classical_trit_strategy_is_perfect() {
        let x = StochasticMap::shift(3);
        let id = StochasticMap::identity(3);
        let s = ClassicalStrategy::new(0, vec![id.clone(), x.clone()], vec![id, x], vec![0, 0, 1]).unwrap();
        let r = evaluate_classical(&GameSpec::chsh(), &s).unwrap();
        assert_eq!(r.average, 1.0);
        assert!(s.is_reversible());
    }

    #[test]
    fn classical_identity_strategy() {
        let id = || vec![StochasticMap::identity(2), StochasticMap::identity(2)];
        let s = ClassicalStrategy::new(0, id(), id(), vec![0, 1]).unwrap();
        let r = evaluate_classical(&GameSpec::chsh(), &s).unwrap();
        assert_eq!(r.average, 0.75);
        for (a, b) in GameSpec::chsh().inputs() {
            let p = r.probability(a, b).unwrap();
            assert!(p == 0.0 || p == 1.0);
        }
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(StochasticMap::new(2, vec![0.5, 0.0, 0.6, 1.0]).is_err());
        assert!(StochasticMap::new(2, vec![-0.1, 0.0, 1.1, 1.0]).is_err());
        assert!(StochasticMap::from_function(&[0, 2]).is_err());
        assert!(StochasticMap::partial_erase(1.5).is_err());
    }

    #[test]
    fn reversibility() {
        assert!(StochasticMap::not().is_reversible());
        assert!(!StochasticMap::constant(2, 1).unwrap().is_reversible());
        assert!(!StochasticMap::partial_erase(0.3).unwrap().is_reversible());
        assert!(StochasticMap::partial_erase(0.0).unwrap().is_reversible());
    }

    #[test]
    fn partial_erase_matches_channel() {
        let p = 0.37;
        let m = StochasticMap::partial_erase(p).unwrap();
        let out = m.to_channel().apply(&State::one()).unwrap();
        let direct = Channel::partial_erase(p).unwrap().apply(&State::one()).unwrap();
        assert!(out.density().approx_eq(direct.density(), 1e-15));
    }

    #[test]
    fn classical_rejects_bad_readout() {
        let id = || vec![StochasticMap::identity(3); 2];
        let s = ClassicalStrategy::new(0, id(), id(), vec![0, 1, 2]).unwrap();
        assert!(matches!(evaluate_classical(&GameSpec::chsh(), &s), Err(Error::LabelOutOfRange { .. })));
        assert!(ClassicalStrategy::new(3, id(), id(), vec![0, 1, 2]).is_err());
    }
}
