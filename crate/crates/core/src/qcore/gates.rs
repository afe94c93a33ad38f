//! Named gates for qubits and small qudits.
//!
//! Rotations follow the usual Bloch-sphere convention
//! `R_z(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, while `S` and `T` are the phase-gate
//! forms `diag(1, i)` and `diag(1, e^{iπ/4})`. The two agree up to a global
//! phase, which never affects a measurement probability.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::qcore::matrix::{Complex, ComplexMatrix, I, ONE, ZERO};
use crate::qcore::measurement::Measurement;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, -ONE])
}

pub fn hadamard() -> ComplexMatrix {
    let h = c(FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::from_rows(&[[h, h], [h, -h]])
}

pub fn s() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, I])
}

pub fn t() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, Complex::from_polar(1.0, FRAC_PI_4)])
}

pub fn rz(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex::from_polar(1.0, -theta / 2.0), Complex::from_polar(1.0, theta / 2.0)])
}

pub fn ry(theta: f64) -> ComplexMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    ComplexMatrix::from_real_rows(&[[co, -s], [s, co]])
}

/// `R_z(alpha) R_y(beta) R_z(gamma)`; covers SU(2), so every qubit unitary up
/// to global phase.
pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix {
    // closed form of the product, avoids two matmuls in the optimizer loop
    let (sb, cb) = (beta / 2.0).sin_cos();
    let p = (alpha + gamma) / 2.0;
    let m = (alpha - gamma) / 2.0;
    ComplexMatrix::from_rows(&[
        [Complex::from_polar(cb, -p), -Complex::from_polar(sb, -m)],
        [Complex::from_polar(sb, m), Complex::from_polar(cb, p)],
    ])
}

/// Generalized shift: `X|i⟩ = |i+1 mod d⟩`.
pub fn shift(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[((i + 1) % d, i)] = ONE;
    }
    m
}

/// `w = exp(2πi/3)`.
pub fn omega3() -> Complex {
    Complex::from_polar(1.0, 2.0 * PI / 3.0)
}

/// `T₃ = diag(1, w^{-1/3}, w^{-2/3})`.
pub fn t3() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[
        ONE,
        Complex::from_polar(1.0, -2.0 * PI / 9.0),
        Complex::from_polar(1.0, -4.0 * PI / 9.0),
    ])
}

pub fn qutrit_v() -> ComplexMatrix {
    let w = omega3();
    ComplexMatrix::diagonal(&[ONE, w, w])
}

pub fn qutrit_w() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[ONE, ONE, omega3()])
}

/// Fourier basis vector `|f_k⟩ = Σ_j e^{2πi jk/d} |j⟩ / √d`.
pub fn fourier_vector(d: usize, k: usize) -> Vec<Complex> {
    let norm = 1.0 / (d as f64).sqrt();
    (0..d).map(|j| Complex::from_polar(norm, 2.0 * PI * ((j * k) % d) as f64 / d as f64)).collect()
}

/// Uniform superposition `|+⟩` in dimension d.
pub fn plus_vector(d: usize) -> Vec<Complex> {
    fourier_vector(d, 0)
}

/// Gate set available for a single qudit of dimension d.
#[derive(Debug, Clone)]
pub struct QuditGates {
    pub dim: usize,
    pub identity: ComplexMatrix,
    /// Cyclic increment.
    pub shift: ComplexMatrix,
    /// Only for d = 3.
    pub t3: Option<ComplexMatrix>,
    pub v: Option<ComplexMatrix>,
    pub w: Option<ComplexMatrix>,
    /// Fourier ("X") basis measurement, outcome k labeled k.
    pub fourier_measurement: Measurement,
}

pub fn qudit_gates(d: usize) -> Result<QuditGates> {
    if !(2..=9).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let qutrit = d == 3;
    Ok(QuditGates {
        dim: d,
        identity: ComplexMatrix::identity(d),
        shift: shift(d),
        t3: qutrit.then(t3),
        v: qutrit.then(qutrit_v),
        w: qutrit.then(qutrit_w),
        fourier_measurement: Measurement::fourier(d),
    })
}

/// Names a gate if it equals (up to global phase) one of the gates above.
pub fn recognize(m: &ComplexMatrix) -> Option<&'static str> {
    const TOL: f64 = 1e-9;
    let candidates: Vec<(&'static str, ComplexMatrix)> = match m.rows() {
        2 => vec![
            ("I", identity2()),
            ("X", pauli_x()),
            ("Y", pauli_y()),
            ("Z", pauli_z()),
            ("H", hadamard()),
            ("S", s()),
            ("S†", s().dagger()),
            ("T", t()),
            ("T†", t().dagger()),
        ],
        3 => vec![
            ("I", ComplexMatrix::identity(3)),
            ("X", shift(3)),
            ("X²", shift(3).matmul(&shift(3)).ok()?),
            ("T₃", t3()),
            ("V", qutrit_v()),
            ("W", qutrit_w()),
        ],
        d if m.is_square() => vec![("I", ComplexMatrix::identity(d)), ("X", shift(d))],
        _ => return None,
    };
    candidates.into_iter().find(|(_, g)| g.phase_eq(m, TOL)).map(|(name, _)| name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_shift_is_pauli_x() {
        let g = qudit_gates(2).unwrap();
        assert_eq!(g.shift, pauli_x());
        assert!(g.t3.is_none());
    }

    #[test]
    fn qutrit_shift_wraps_around() {
        let x = qudit_gates(3).unwrap().shift;
        let out = crate::qcore::matrix::apply(&x, &[ZERO, ZERO, ONE]).unwrap();
        assert_eq!(out, vec![ONE, ZERO, ZERO]);
    }

    #[test]
    fn v_times_w_is_clock_like() {
        let g = qudit_gates(3).unwrap();
        let vw = g.v.unwrap().matmul(&g.w.unwrap()).unwrap();
        let w = omega3();
        assert!(vw.approx_eq(&ComplexMatrix::diagonal(&[ONE, w, w * w]), 1e-15));
    }

    #[test]
    fn t3_cubed_is_clock_inverse_up_to_phase() {
        // T₃³ = diag(1, w^{-1}, w^{-2})
        let t = t3();
        let cube = t.matmul(&t).unwrap().matmul(&t).unwrap();
        let w = omega3();
        let expected = ComplexMatrix::diagonal(&[ONE, w.conj(), (w * w).conj()]);
        assert!(cube.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(qudit_gates(1).unwrap_err(), Error::UnsupportedDimension(1));
        assert!(qudit_gates(10).is_err());
    }

    #[test]
    fn rz_and_phase_gates_agree_up_to_phase() {
        assert!(rz(std::f64::consts::FRAC_PI_2).phase_eq(&s(), 1e-12));
        assert!(rz(FRAC_PI_4).phase_eq(&t(), 1e-12));
        assert!(euler_zyz(0.3, 0.0, 0.4).phase_eq(&rz(0.7), 1e-12));
    }

    #[test]
    fn euler_matches_product() {
        let (a, b, g) = (0.4, 1.1, -2.3);
        let prod = rz(a).matmul(&ry(b)).unwrap().matmul(&rz(g)).unwrap();
        assert!(euler_zyz(a, b, g).approx_eq(&prod, 1e-14));
    }

    #[test]
    fn recognizes_named_gates() {
        assert_eq!(recognize(&t().dagger()), Some("T†"));
        assert_eq!(recognize(&rz(std::f64::consts::FRAC_PI_2)), Some("S"));
        assert_eq!(recognize(&qutrit_v()), Some("V"));
        assert_eq!(recognize(&rz(0.123)), None);
    }
}
