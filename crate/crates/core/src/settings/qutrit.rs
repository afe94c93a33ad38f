use crate::error::Result;
use crate::game::{evaluate, GameSpec, Strategy};
use crate::qcore::{gates, Measurement, State};
use crate::settings::{Method, SettingKind, SettingSpec, ValueResult, Witness};

/// Exact average of [`qutrit_q3_strategy`], frozen to 12 digits.
pub const QUTRIT_Q3_VALUE: f64 = 0.712386014201;

/// `T₃|+⟩`, A₀ = B₀ = I, A₁ = B₂ = V, A₂ = B₁ = W, Fourier measurement with
/// outcome k reported as k.
pub fn qutrit_q3_strategy() -> Result<Strategy> {
    let id = crate::qcore::ComplexMatrix::identity(3);
    let (v, w) = (gates::qutrit_v(), gates::qutrit_w());
    Strategy::unitary(
        State::plus(3).evolve(&gates::t3())?,
        vec![id.clone(), v.clone(), w.clone()],
        vec![id, w, v],
        Measurement::fourier(3),
    )
}

pub fn value_qutrit_q3_fixed() -> Result<ValueResult> {
    let setting = SettingSpec::new(SettingKind::QutritUnitaryFixed, 3)?;
    let witness = qutrit_q3_strategy()?;
    let value = evaluate(&GameSpec::new(3)?, &witness)?.average;
    Ok(ValueResult {
        setting,
        value,
        witness: Witness::Quantum(witness),
        method: Method::Fixed,
        strategies_examined: 1,
        value_histogram: Vec::new(),
    })
}
