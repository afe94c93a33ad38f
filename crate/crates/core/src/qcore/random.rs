//! Seeded random unitaries and states for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::qcore::matrix::{inner, Complex, ComplexMatrix};
use crate::qcore::state::State;

fn gaussian_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex> {
    (0..d).map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut columns: Vec<Vec<Complex>> = Vec::with_capacity(d);
    while columns.len() < d {
        let mut v = gaussian_vector(d, rng);
        for u in &columns {
            let overlap = inner(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= overlap * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for (c, col) in columns.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            m[(r, c)] = *z;
        }
    }
    m
}

/// Uniformly random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> State {
    State::pure(&gaussian_vector(d, rng)).expect("gaussian vector is nonzero almost surely")
}

/// Random mixed state: normalized G G† for a Ginibre matrix G.
pub fn random_mixed_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> State {
    let mut g = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for (c, z) in gaussian_vector(d, rng).into_iter().enumerate() {
            g[(r, c)] = z;
        }
    }
    let rho = g.matmul(&g.dagger()).expect("square");
    let tr = rho.trace().re;
    State::from_density(rho.scale_real(1.0 / tr)).expect("G G† is positive")
}
