use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qcore::gates;
use crate::qcore::matrix::{Complex, ComplexMatrix};
use crate::qcore::state::State;
use crate::qcore::COMPLETENESS_TOL;

/// Projective measurement whose raw outcomes are mapped to answer labels.
/// Several raw outcomes may share a label.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    projectors: Vec<ComplexMatrix>,
    labels: Vec<usize>,
}

impl Measurement {
    pub fn new(projectors: Vec<ComplexMatrix>, labels: Vec<usize>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidMeasurement("no projectors".into()));
        }
        if projectors.len() != labels.len() {
            return Err(Error::InvalidMeasurement(format!(
                "{} projectors but {} labels",
                projectors.len(),
                labels.len()
            )));
        }
        let d = projectors[0].rows();
        let id = ComplexMatrix::identity(d);
        let mut sum = ComplexMatrix::zeros(d, d);
        for (i, p) in projectors.iter().enumerate() {
            if p.rows() != d || p.cols() != d {
                return Err(Error::DimensionMismatch { expected: id.shape(), found: p.shape() });
            }
            if !p.is_hermitian(COMPLETENESS_TOL) {
                return Err(Error::InvalidMeasurement(format!("projector {i} is not Hermitian")));
            }
            if !p.matmul(p)?.approx_eq(p, COMPLETENESS_TOL) {
                return Err(Error::InvalidMeasurement(format!("projector {i} is not idempotent")));
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                if p.matmul(q)?.max_abs_diff(&ComplexMatrix::zeros(d, d)) > COMPLETENESS_TOL {
                    return Err(Error::InvalidMeasurement(format!("projectors {i} and {j} overlap")));
                }
            }
            sum = sum.add(p)?;
        }
        if !sum.approx_eq(&id, COMPLETENESS_TOL) {
            return Err(Error::InvalidMeasurement("projectors do not sum to identity".into()));
        }
        Ok(Self { projectors, labels })
    }

    /// Rank-1 projectors onto the given orthonormal vectors.
    pub fn from_basis(vectors: &[Vec<Complex>], labels: Vec<usize>) -> Result<Self> {
        let projectors = vectors.iter().map(|v| ComplexMatrix::outer(v, v)).collect();
        Self::new(projectors, labels)
    }

    /// Computational-basis measurement with outcome i labeled `labels[i]`.
    pub fn computational(labels: Vec<usize>) -> Result<Self> {
        let d = labels.len();
        let projectors = (0..d).map(|i| ComplexMatrix::basis_op(d, i, i)).collect();
        Self::new(projectors, labels)
    }

    /// Qubit Z measurement, |0⟩ ↦ 0 and |1⟩ ↦ 1.
    pub fn z() -> Self {
        Self::computational(vec![0, 1]).expect("valid")
    }

    /// Qubit X measurement, |+⟩ ↦ 0 and |−⟩ ↦ 1.
    pub fn x() -> Self {
        Self::fourier(2)
    }

    /// Two-outcome measurement along a Pauli axis. `flipped` swaps the labels
    /// so that the −1 eigenstate reports 0.
    pub fn pauli(axis: PauliAxis, flipped: bool) -> Self {
        let plus = axis.eigenstate(true);
        let minus = axis.eigenstate(false);
        let labels = if flipped { vec![1, 0] } else { vec![0, 1] };
        Self::from_basis(&[plus, minus], labels).expect("Pauli eigenbasis is orthonormal")
    }

    /// Qubit measurement along the Bloch direction (θ, φ): the projector onto
    /// the state with that Bloch vector is labeled 0, its complement 1.
    pub fn bloch_axis(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let up = vec![Complex::new(c, 0.0), Complex::from_polar(s, phi)];
        let down = vec![-Complex::from_polar(s, -phi), Complex::new(c, 0.0)];
        Self::from_basis(&[up, down], vec![0, 1]).expect("orthonormal by construction")
    }

    /// Fourier basis measurement in dimension d, outcome k labeled k.
    pub fn fourier(d: usize) -> Self {
        let vectors: Vec<Vec<Complex>> = (0..d).map(|k| gates::fourier_vector(d, k)).collect();
        Self::from_basis(&vectors, (0..d).collect()).expect("Fourier basis is orthonormal")
    }

    /// Trivial measurement {I, 0}: always reports `label`.
    pub fn trivial(d: usize, label: usize, other: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(d), ComplexMatrix::zeros(d, d)], vec![label, other])
            .expect("identity and zero form a PVM")
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn max_label(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Tr(Pᵢ ρ) for every raw outcome.
    pub fn raw_probabilities(&self, s: &State) -> Result<Vec<f64>> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("state of dimension {}", self.dim()),
                found: format!("dimension {}", s.dim()),
            });
        }
        let rho = s.density();
        let d = self.dim();
        Ok(self
            .projectors
            .iter()
            .map(|p| {
                let mut acc = Complex::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        acc += p.get(i, j) * rho.get(j, i);
                    }
                }
                acc.re
            })
            .collect())
    }

    /// Probability that the reported label equals `label`.
    pub fn probability_of(&self, s: &State, label: usize) -> Result<f64> {
        let raw = self.raw_probabilities(s)?;
        Ok(raw.iter().zip(&self.labels).filter(|(_, &l)| l == label).map(|(p, _)| p).sum())
    }

    /// Label distribution, sorted by label.
    pub fn outcome_distribution(&self, s: &State) -> Result<Vec<(usize, f64)>> {
        let raw = self.raw_probabilities(s)?;
        let mut agg = BTreeMap::new();
        for (p, &l) in raw.iter().zip(&self.labels) {
            *agg.entry(l).or_insert(0.0) += p;
        }
        Ok(agg.into_iter().collect())
    }

    /// U P U† for each projector. Measuring U ρ U† with the result gives the
    /// same statistics as measuring ρ with `self`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Measurement> {
        let projectors =
            self.projectors.iter().map(|p| u.matmul(p)?.matmul(&u.dagger())).collect::<Result<Vec<_>>>()?;
        Measurement::new(projectors, self.labels.clone())
    }
}

/// Convenience wrapper around [`Measurement::outcome_distribution`].
pub fn outcome_distribution(m: &Measurement, s: &State) -> Result<Vec<(usize, f64)>> {
    m.outcome_distribution(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// Normalized +1 (`positive`) or −1 eigenvector.
    pub fn eigenstate(self, positive: bool) -> Vec<Complex> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if positive { 1.0 } else { -1.0 };
        match self {
            PauliAxis::Z if positive => vec![Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)],
            PauliAxis::Z => vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)],
            PauliAxis::X => vec![Complex::new(h, 0.0), Complex::new(sign * h, 0.0)],
            PauliAxis::Y => vec![Complex::new(h, 0.0), Complex::new(0.0, sign * h)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PauliAxis::X => "X",
            PauliAxis::Y => "Y",
            PauliAxis::Z => "Z",
        }
    }
}
