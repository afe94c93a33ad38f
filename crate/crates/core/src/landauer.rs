//! Erasure accounting for the classical partial-erasure strategy.
//!
//! The strategy starts in 0, flips on `a = 1`, and on `b = 0` erases the bit
//! with probability `p`. Only input `(1, 0)` ever erases anything, so the
//! success probability is `(3 + p)/4` and the mean erasure cost is `p/4`
//! bits. Entropy is reported in units of `kT·log₂2` per erased bit; `k` and
//! `T` are never given numbers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{evaluate_classical, ClassicalStrategy, GameSpec, InputErasure, StochasticMap};

/// Unit attached to every entropy figure.
pub const ENTROPY_UNIT: &str = "kT*log2(2)";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErasureStrategy {
    pub erase_probability: f64,
    pub base: ClassicalStrategy,
}

impl ErasureStrategy {
    pub fn new(p: f64) -> Result<Self> {
        check_probability(p)?;
        let base = ClassicalStrategy::new(
            0,
            vec![StochasticMap::identity(2), StochasticMap::not()],
            vec![StochasticMap::partial_erase(p)?, StochasticMap::identity(2)],
            vec![0, 1],
        )?;
        Ok(Self { erase_probability: p, base })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub erase_probability: f64,
    pub per_input_bits_erased: Vec<InputErasure>,
    pub average_bits: f64,
    /// Same number as `average_bits`, in units of [`ENTROPY_UNIT`].
    pub average_entropy: f64,
    pub unit: &'static str,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { value: p, range: "[0, 1]" });
    }
    Ok(())
}

/// Success probability of the partial-erasure strategy.
pub fn erasure_value(p: f64) -> Result<f64> {
    let s = ErasureStrategy::new(p)?;
    Ok(evaluate_classical(&GameSpec::chsh(), &s.base)?.average)
}

/// Inverse of [`erasure_value`] on `[3/4, 1]`.
pub fn solve_erasure_probability(target: f64) -> Result<f64> {
    if !(0.75..=1.0).contains(&target) {
        return Err(Error::OutOfRange { value: target, range: "[0.75, 1]" });
    }
    // (3 + p)/4 = target; clamp rounding at the interval ends
    Ok((4.0 * target - 3.0).clamp(0.0, 1.0))
}

pub fn entropy_ledger(p: f64) -> Result<EntropyReport> {
    let s = ErasureStrategy::new(p)?;
    let report = evaluate_classical(&GameSpec::chsh(), &s.base)?;
    let per_input = report.erasure_ledger.expect("classical evaluation records erasures");
    let average_bits = per_input.iter().map(|e| e.bits).sum::<f64>() / per_input.len() as f64;
    Ok(EntropyReport {
        erase_probability: p,
        per_input_bits_erased: per_input,
        average_bits,
        average_entropy: average_bits,
        unit: ENTROPY_UNIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn endpoints() {
        assert_eq!(erasure_value(1.0).unwrap(), 1.0);
        assert_eq!(erasure_value(0.0).unwrap(), 0.75);
    }

    #[test]
    fn partial_erasure_reaches_quantum_value() {
        let c2 = (PI / 8.0).cos().powi(2);
        assert!((erasure_value(SQRT_2 - 1.0).unwrap() - c2).abs() < 1e-12);
        assert!((solve_erasure_probability(c2).unwrap() - (SQRT_2 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn solve_bounds() {
        assert_eq!(solve_erasure_probability(1.0).unwrap(), 1.0);
        assert_eq!(solve_erasure_probability(0.75).unwrap(), 0.0);
        assert!(solve_erasure_probability(0.7).is_err());
        assert!(solve_erasure_probability(1.01).is_err());
        assert!(erasure_value(-0.1).is_err());
        assert!(entropy_ledger(2.0).is_err());
    }

    #[test]
    fn ledger_only_charges_input_one_zero() {
        let r = entropy_ledger(1.0).unwrap();
        assert_eq!(r.average_bits, 0.25);
        assert_eq!(r.average_entropy, r.average_bits);
        for e in &r.per_input_bits_erased {
            let expected = if (e.a, e.b) == (1, 0) { 1.0 } else { 0.0 };
            assert_eq!(e.bits, expected);
        }
        assert_eq!(entropy_ledger(0.0).unwrap().average_bits, 0.0);
    }

    #[test]
    fn ledger_at_tsirelson_probability() {
        let r = entropy_ledger(SQRT_2 - 1.0).unwrap();
        assert!((r.average_bits - 0.25 * (SQRT_2 - 1.0)).abs() < 1e-15);
        assert!((r.average_bits - 0.1036).abs() < 1e-4);
    }
}
