use crate::error::{Error, Result};
use crate::qcore::matrix::{Complex, ComplexMatrix};
use crate::qcore::state::State;
use crate::qcore::COMPLETENESS_TOL;

/// Trace-preserving map given by Kraus operators, ρ ↦ Σᵢ Kᵢ ρ Kᵢ†.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
}

impl Channel {
    /// Rejects empty, ragged or non-trace-preserving Kraus sets.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let d = first.rows();
        if !first.is_square() {
            return Err(Error::InvalidChannel(format!("Kraus operators must be square, got {}", first.shape())));
        }
        if let Some(bad) = kraus.iter().find(|k| k.rows() != d || k.cols() != d) {
            return Err(Error::DimensionMismatch { expected: first.shape(), found: bad.shape() });
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &kraus {
            sum = sum.add(&k.dagger().matmul(k)?)?;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(Self { kraus })
    }

    /// Single-Kraus channel; fails if `u` is not unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(d)] }
    }

    /// Qubit ERASE: every state goes to |0⟩. Kraus set {|0⟩⟨0|, |0⟩⟨1|}.
    pub fn erase() -> Self {
        Self { kraus: vec![ComplexMatrix::basis_op(2, 0, 0), ComplexMatrix::basis_op(2, 0, 1)] }
    }

    /// ERASE with probability p, identity otherwise.
    pub fn partial_erase(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { value: p, range: "[0, 1]" });
        }
        let sp = p.sqrt();
        Self::new(vec![
            ComplexMatrix::basis_op(2, 0, 0).scale_real(sp),
            ComplexMatrix::basis_op(2, 0, 1).scale_real(sp),
            ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        ])
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// The unitary if this is a single-Kraus unitary channel.
    pub fn as_unitary(&self) -> Option<&ComplexMatrix> {
        match self.kraus.as_slice() {
            [u] if u.is_unitary(COMPLETENESS_TOL) => Some(u),
            _ => None,
        }
    }

    pub fn apply(&self, state: &State) -> Result<State> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("state of dimension {}", self.dim()),
                found: format!("dimension {}", state.dim()),
            });
        }
        let rho = state.density();
        let d = self.dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            out = out.add(&k.matmul(rho)?.matmul(&k.dagger())?)?;
        }
        // restore exact Hermiticity lost to rounding
        let herm = out.add(&out.dagger())?.scale(Complex::new(0.5, 0.0));
        Ok(State::from_density_unchecked(herm))
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        if self.dim() != next.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("channel of dimension {}", self.dim()),
                found: format!("dimension {}", next.dim()),
            });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for b in &next.kraus {
            for a in &self.kraus {
                kraus.push(b.matmul(a)?);
            }
        }
        Ok(Channel { kraus })
    }

    /// True when both channels have the same Kraus list up to a global phase
    /// on each operator; used only for naming.
    pub(crate) fn same_kraus(&self, other: &Channel, tol: f64) -> bool {
        self.kraus.len() == other.kraus.len() && self.kraus.iter().zip(&other.kraus).all(|(a, b)| a.phase_eq(b, tol))
    }
}

/// Applies a channel to a state.
pub fn apply_channel(ch: &Channel, s: &State) -> Result<State> {
    ch.apply(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;

    #[test]
    fn unitary_x_flips_zero() {
        let out = Channel::unitary(gates::pauli_x()).unwrap().apply(&State::zero()).unwrap();
        assert!(out.density().approx_eq(State::one().density(), 1e-15));
    }

    #[test]
    fn erase_sends_plus_to_zero() {
        let out = Channel::erase().apply(&State::plus(2)).unwrap();
        assert!(out.density().approx_eq(State::zero().density(), 1e-15));
    }

    #[test]
    fn half_erasure_of_one_is_maximally_mixed() {
        let out = Channel::partial_erase(0.5).unwrap().apply(&State::one()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.5]]);
        assert!(out.density().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let k = ComplexMatrix::basis_op(2, 0, 0);
        assert!(matches!(Channel::new(vec![k]), Err(Error::NotTracePreserving { .. })));
        assert!(Channel::unitary(ComplexMatrix::identity(2).scale_real(2.0)).is_err());
    }

    #[test]
    fn rejects_mixed_dimensions_and_empty() {
        assert!(Channel::new(vec![]).is_err());
        let r = Channel::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn apply_checks_dimension() {
        assert!(Channel::identity(3).apply(&State::zero()).is_err());
    }

    #[test]
    fn partial_erase_range() {
        assert!(Channel::partial_erase(1.1).is_err());
        assert!(Channel::partial_erase(-0.1).is_err());
        assert!(Channel::partial_erase(1.0).is_ok());
    }

    #[test]
    fn composition_order() {
        // X then ERASE gives |0⟩; ERASE then X gives |1⟩
        let x = Channel::unitary(gates::pauli_x()).unwrap();
        let a = x.then(&Channel::erase()).unwrap().apply(&State::zero()).unwrap();
        let b = Channel::erase().then(&x).unwrap().apply(&State::zero()).unwrap();
        assert!(a.density().approx_eq(State::zero().density(), 1e-15));
        assert!(b.density().approx_eq(State::one().density(), 1e-15));
    }

    #[test]
    fn unitary_detection() {
        assert!(Channel::unitary(gates::t()).unwrap().as_unitary().is_some());
        assert!(Channel::erase().as_unitary().is_none());
    }
}
