use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::matrix::{Complex, ComplexMatrix, ONE, ZERO};
use crate::qcore::{HERMITIAN_TOL, PSD_TOL, TRACE_TOL};

/// Density matrix of a single system.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    density: ComplexMatrix,
}

impl State {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn from_density(density: ComplexMatrix) -> Result<Self> {
        if !density.is_square() {
            return Err(Error::InvalidState(format!("density must be square, got {}", density.shape())));
        }
        if !density.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidState("density is not Hermitian".into()));
        }
        let tr = density.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_eig = min_eigenvalue(&density);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { density })
    }

    /// Rank-1 density from amplitudes; the vector is normalized first.
    pub fn pure(amplitudes: &[Complex]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if amplitudes.is_empty() || norm < 1e-12 || !norm.is_finite() {
            return Err(Error::InvalidState("state vector has zero or non-finite norm".into()));
        }
        let v: Vec<Complex> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(Self { density: ComplexMatrix::outer(&v, &v) })
    }

    /// Computational basis state |i⟩ in dimension d.
    pub fn basis(d: usize, i: usize) -> Self {
        assert!(i < d, "basis index {i} out of range for dimension {d}");
        Self { density: ComplexMatrix::basis_op(d, i, i) }
    }

    /// Diagonal (classical) mixture over basis states.
    pub fn diagonal(probabilities: &[f64]) -> Result<Self> {
        let diag: Vec<Complex> = probabilities.iter().map(|&p| Complex::new(p, 0.0)).collect();
        Self::from_density(ComplexMatrix::diagonal(&diag))
    }

    /// Uniform superposition (|0⟩ + … + |d−1⟩)/√d.
    pub fn plus(d: usize) -> Self {
        Self::pure(&crate::qcore::gates::plus_vector(d)).expect("normalizable")
    }

    pub fn zero() -> Self {
        Self::basis(2, 0)
    }

    pub fn one() -> Self {
        Self::basis(2, 1)
    }

    pub fn minus() -> Self {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        Self::pure(&[h, -h]).expect("normalizable")
    }

    pub fn plus_i() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::pure(&[Complex::new(h, 0.0), Complex::new(0.0, h)]).expect("normalizable")
    }

    pub fn minus_i() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::pure(&[Complex::new(h, 0.0), Complex::new(0.0, -h)]).expect("normalizable")
    }

    /// The six single-qubit Pauli eigenstates, in the order
    /// |0⟩, |1⟩, |+⟩, |−⟩, |+i⟩, |−i⟩.
    pub fn pauli_eigenstates() -> Vec<(&'static str, State)> {
        vec![
            ("|0>", Self::zero()),
            ("|1>", Self::one()),
            ("|+>", Self::plus(2)),
            ("|->", Self::minus()),
            ("|+i>", Self::plus_i()),
            ("|-i>", Self::minus_i()),
        ]
    }

    /// Conjugates the density by a unitary: U ρ U†.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<State> {
        let out = u.matmul(&self.density)?.matmul(&u.dagger())?;
        Ok(Self { density: out })
    }

    pub fn dim(&self) -> usize {
        self.density.rows()
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    /// ⟨ψ|ρ|ψ⟩ for a (normalized) vector ψ.
    pub fn fidelity_with_pure(&self, psi: &[Complex]) -> f64 {
        let mut acc = ZERO;
        for (i, a) in psi.iter().enumerate() {
            for (j, b) in psi.iter().enumerate() {
                acc += a.conj() * self.density.get(i, j) * b;
            }
        }
        acc.re
    }

    /// Checks the density-matrix invariants; used by tests and debug paths.
    pub fn check_invariants(&self) -> Result<()> {
        Self::from_density(self.density.clone()).map(|_| ())
    }

    /// Internal constructor for densities that are valid by construction
    /// (channel outputs). Skips the eigenvalue check.
    pub(crate) fn from_density_unchecked(density: ComplexMatrix) -> Self {
        Self { density }
    }
}

pub(crate) fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let dm = DMatrix::from_row_slice(n, n, m.entries());
    // symmetrize so tiny anti-Hermitian noise does not leak into the solver
    let herm = (&dm + dm.adjoint()) * Complex::new(0.5, 0.0);
    herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}
