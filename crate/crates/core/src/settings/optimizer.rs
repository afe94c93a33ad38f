//! Derivative-free local search (Nelder–Mead simplex) with seeded restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default seed for every randomized routine in the crate.
pub const DEFAULT_SEED: u64 = 0x00C4_5A5E;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    /// Number of random starting points; at least 32.
    pub restarts: usize,
    /// Iteration cap per local search.
    pub max_iterations: usize,
    /// Stop when the spread of objective values over the simplex falls
    /// below this.
    pub tolerance: f64,
    pub seed: u64,
    /// Optional extra starting point, tried before the random restarts.
    pub initial_guess: Option<Vec<f64>>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iterations: 4000, tolerance: 1e-13, seed: DEFAULT_SEED, initial_guess: None }
    }
}

pub const MIN_RESTARTS: usize = 32;

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < MIN_RESTARTS {
            return Err(Error::InvalidConfig(format!("restarts must be >= {MIN_RESTARTS}, got {}", self.restarts)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Standard Nelder–Mead with reflection 1, expansion 2, contraction ½ and
/// shrink ½.
#[derive(Debug, Clone)]
pub struct NelderMead {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_step: f64,
}

impl NelderMead {
    pub fn new(max_iterations: usize, tolerance: f64) -> Self {
        Self { max_iterations, tolerance, initial_step: 0.5 }
    }

    pub fn minimize<F: Fn(&[f64]) -> f64>(&self, f: F, start: &[f64]) -> Minimum {
        let n = start.len();
        let mut evaluations = 0;
        let mut eval = |x: &[f64]| {
            evaluations += 1;
            f(x)
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((start.to_vec(), eval(start)));
        for i in 0..n {
            let mut x = start.to_vec();
            x[i] += self.initial_step;
            let fx = eval(&x);
            simplex.push((x, fx));
        }

        let mut iterations = 0;
        while iterations < self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if simplex[n].1 - simplex[0].1 < self.tolerance {
                break;
            }
            iterations += 1;

            let centroid: Vec<f64> =
                (0..n).map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
            let along =
                |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect() };

            let reflected = along(-1.0);
            let fr = eval(&reflected);
            if fr < simplex[0].1 {
                let expanded = along(-2.0);
                let fe = eval(&expanded);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
            } else {
                let (contracted, fc) = if fr < simplex[n].1 {
                    let x = along(-0.5);
                    let fx = eval(&x);
                    (x, fx)
                } else {
                    let x = along(0.5);
                    let fx = eval(&x);
                    (x, fx)
                };
                if fc < fr.min(simplex[n].1) {
                    simplex[n] = (contracted, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for (x, fx) in simplex.iter_mut().skip(1) {
                        for (xi, bi) in x.iter_mut().zip(&best) {
                            *xi = bi + 0.5 * (*xi - bi);
                        }
                        *fx = eval(x);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (point, value) = simplex.swap_remove(0);
        Minimum { point, value, iterations, evaluations }
    }

    /// Runs the search twice, the second time from the first result, to
    /// escape a collapsed simplex.
    pub fn minimize_polished<F: Fn(&[f64]) -> f64>(&self, f: F, start: &[f64]) -> Minimum {
        let first = self.minimize(&f, start);
        let second = self.minimize(&f, &first.point);
        let best = if second.value <= first.value { second.point } else { first.point };
        let value = f(&best);
        Minimum {
            point: best,
            value,
            iterations: first.iterations + second.iterations,
            evaluations: first.evaluations + second.evaluations + 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub best: Minimum,
    /// Best value from each start, in start order.
    pub per_start: Vec<f64>,
    pub evaluations: usize,
}

/// Maximizes `objective` from the configured starting points. Start k draws
/// its point from a ChaCha stream seeded by `(seed, k)`, so the result does
/// not depend on how rayon schedules the restarts. Ties go to the lowest
/// start index.
pub fn maximize_with_restarts<F, S>(objective: F, sample_start: S, config: &OptimizerConfig) -> Result<RestartOutcome>
where
    F: Fn(&[f64]) -> f64 + Sync,
    S: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    config.validate()?;
    let nm = NelderMead::new(config.max_iterations, config.tolerance);
    let mut starts: Vec<Option<Vec<f64>>> = Vec::new();
    if let Some(g) = &config.initial_guess {
        starts.push(Some(g.clone()));
    }
    starts.extend((0..config.restarts).map(|_| None));

    let results: Vec<Minimum> = starts
        .par_iter()
        .enumerate()
        .map(|(k, start)| {
            let x0 = match start {
                Some(x) => x.clone(),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream(k as u64);
                    sample_start(&mut rng)
                }
            };
            nm.minimize_polished(|x| -objective(x), &x0)
        })
        .collect();

    let evaluations = results.iter().map(|m| m.evaluations).sum();
    let per_start = results.iter().map(|m| -m.value).collect();
    let best = results
        .into_iter()
        .reduce(|acc, m| if m.value < acc.value - 1e-15 { m } else { acc })
        .expect("at least one start");
    Ok(RestartOutcome { best: Minimum { value: -best.value, ..best }, per_start, evaluations })
}

/// Uniform angles in [0, 2π).
pub fn random_angles(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = NelderMead::new(10_000, 1e-20).minimize_polished(rosen, &[-1.2, 1.0]);
        assert!((m.point[0] - 1.0).abs() < 1e-5, "{m:?}");
        assert!((m.point[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn minimizes_quadratic_in_many_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.5).powi(2)).sum::<f64>();
        let m = NelderMead::new(20_000, 1e-22).minimize_polished(f, &[0.0; 12]);
        assert!(m.value < 1e-9, "{}", m.value);
    }

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig { restarts: 31, ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let bad = OptimizerConfig { tolerance: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig { max_iterations: 0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn restarts_are_deterministic() {
        let f = |x: &[f64]| (x[0].sin() * x[1].cos()).abs();
        let cfg = OptimizerConfig::default();
        let a = maximize_with_restarts(f, |r| random_angles(r, 2), &cfg).unwrap();
        let b = maximize_with_restarts(f, |r| random_angles(r, 2), &cfg).unwrap();
        assert_eq!(a.best.point, b.best.point);
        assert_eq!(a.per_start, b.per_start);
        assert!((a.best.value - 1.0).abs() < 1e-9);
    }
}
