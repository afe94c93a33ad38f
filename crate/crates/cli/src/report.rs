//! Report payloads and their text, JSON and CSV renderings.
//!
//! JSON payloads never contain timings so repeated runs are byte-identical;
//! wall time is shown in text output only.

use std::fmt::Write as _;

use chshstar_core::settings::{describe_witness, Witness};
use chshstar_core::{ComplexMatrix, SweepPoint};
use serde::Serialize;

use crate::symbolic::{decimal, name, pretty};

/// One component of a witness: a name where recognized, raw matrices otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<ComplexMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

impl Component {
    fn named(name: String) -> Self {
        Self { name: Some(name), matrices: None, labels: None }
    }

    fn or_matrices(name: Option<String>, matrices: impl FnOnce() -> Vec<ComplexMatrix>) -> Self {
        match name {
            Some(n) => Self::named(n),
            None => Self { name: None, matrices: Some(matrices()), labels: None },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessOut {
    pub system: &'static str,
    pub initial: Component,
    pub a_gates: Vec<Component>,
    pub b_gates: Vec<Component>,
    pub measurement: Component,
}

impl WitnessOut {
    pub fn new(w: &Witness) -> Self {
        let d = describe_witness(w);
        match w {
            Witness::Quantum(s) => {
                let gates = |names: Vec<Option<String>>, chs: &[chshstar_core::Channel]| {
                    names
                        .into_iter()
                        .zip(chs)
                        .map(|(n, ch)| Component::or_matrices(n, || ch.kraus().to_vec()))
                        .collect()
                };
                let measurement = match d.measurement {
                    Some(n) => Component::named(n),
                    None => Component {
                        name: None,
                        matrices: Some(s.measurement.projectors().to_vec()),
                        labels: Some(s.measurement.labels().to_vec()),
                    },
                };
                Self {
                    system: d.system,
                    initial: Component::or_matrices(d.initial, || vec![s.initial.density().clone()]),
                    a_gates: gates(d.a_gates, &s.a_gates),
                    b_gates: gates(d.b_gates, &s.b_gates),
                    measurement,
                }
            }
            Witness::Classical(_) => {
                let named =
                    |v: Vec<Option<String>>| v.into_iter().map(|n| Component::named(n.unwrap_or_default())).collect();
                Self {
                    system: d.system,
                    initial: Component::named(d.initial.unwrap_or_default()),
                    a_gates: named(d.a_gates),
                    b_gates: named(d.b_gates),
                    measurement: Component::named(d.measurement.unwrap_or_default()),
                }
            }
        }
    }

    fn render(&self, out: &mut String) {
        let line = |out: &mut String, label: &str, c: &Component| match &c.name {
            Some(n) => writeln!(out, "  {label:<12} {n}").unwrap(),
            None => {
                writeln!(out, "  {label:<12} (unrecognized)").unwrap();
                for m in c.matrices.iter().flatten() {
                    for r in 0..m.rows() {
                        let row: Vec<String> = (0..m.cols())
                            .map(|col| {
                                let z = m.get(r, col);
                                format!("{:+.6}{:+.6}i", z.re, z.im)
                            })
                            .collect();
                        writeln!(out, "  {:<12}   [{}]", "", row.join(", ")).unwrap();
                    }
                }
                if let Some(l) = &c.labels {
                    writeln!(out, "  {:<12}   labels {l:?}", "").unwrap();
                }
            }
        };
        writeln!(out, "witness ({}):", self.system).unwrap();
        line(out, "initial", &self.initial);
        for (i, g) in self.a_gates.iter().enumerate() {
            line(out, &format!("A_{i}"), g);
        }
        for (i, g) in self.b_gates.iter().enumerate() {
            line(out, &format!("B_{i}"), g);
        }
        line(out, "measurement", &self.measurement);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramBin {
    pub value: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    pub setting: String,
    pub description: String,
    pub dimension: usize,
    pub modulus: usize,
    pub value: f64,
    pub symbolic: Option<&'static str>,
    pub method: chshstar_core::Method,
    pub strategies_examined: u64,
    pub consistent: bool,
    pub witness: WitnessOut,
    pub value_histogram: Vec<HistogramBin>,
    #[serde(skip)]
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub n_random: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub optimal_deviation: f64,
    pub max_deviation: f64,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub steps: usize,
    pub max_abs_difference: f64,
    pub all_above_three_quarters: bool,
    pub best_epsilon: f64,
    pub best_p_formula: f64,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputBits {
    pub a: usize,
    pub b: usize,
    pub bits_erased: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LandauerReport {
    pub erase_probability: f64,
    pub erase_probability_symbolic: Option<&'static str>,
    pub value: f64,
    pub value_symbolic: Option<&'static str>,
    pub per_input: Vec<InputBits>,
    pub average_bits: f64,
    pub average_entropy: f64,
    pub entropy_symbolic: Option<&'static str>,
    pub unit: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Q3Report {
    pub classical_value: f64,
    pub classical_symbolic: Option<&'static str>,
    pub classical_strategies_examined: u64,
    pub classical_witness: WitnessOut,
    pub permutation_value: f64,
    pub permutation_symbolic: Option<&'static str>,
    pub permutation_strategies_examined: u64,
    pub quantum_value: f64,
    pub quantum_rounded: String,
    pub frozen_value: f64,
    pub matches_frozen: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub setting: String,
    pub value: f64,
    pub symbolic: Option<&'static str>,
    pub expected: f64,
    pub expected_symbolic: Option<&'static str>,
    pub method: String,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub rows: Vec<SummaryRow>,
    pub all_match: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Value(ValueReport),
    #[serde(rename = "verify-lemma1")]
    VerifyEquivalence(EquivalenceReport),
    SweepEpsilon(SweepReport),
    Landauer(LandauerReport),
    Q3(Q3Report),
    ReproduceAll(SummaryReport),
}

impl Report {
    /// False when a computed quantity fails its own consistency check.
    pub fn ok(&self) -> bool {
        match self {
            Report::Value(r) => r.consistent,
            Report::VerifyEquivalence(r) => r.passed,
            Report::SweepEpsilon(r) => r.all_above_three_quarters && r.max_abs_difference < 1e-12,
            Report::Landauer(r) => (r.value - 0.75 - r.average_bits).abs() < 1e-12,
            Report::Q3(r) => r.matches_frozen && r.margin > 0.0,
            Report::ReproduceAll(r) => r.all_match,
        }
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let o = &mut out;
        match self {
            Report::Value(r) => {
                writeln!(o, "setting:     {}", r.description).unwrap();
                writeln!(o, "value:       {}", pretty(r.value)).unwrap();
                writeln!(o, "method:      {}", json_name(&r.method)).unwrap();
                writeln!(o, "examined:    {} strategies", r.strategies_examined).unwrap();
                writeln!(o, "consistent:  {}", r.consistent).unwrap();
                writeln!(o, "wall time:   {:.3} s", r.wall_seconds).unwrap();
                r.witness.render(o);
                if !r.value_histogram.is_empty() {
                    writeln!(o, "value histogram:").unwrap();
                    for b in &r.value_histogram {
                        writeln!(o, "  {}  {}", pretty(b.value), b.count).unwrap();
                    }
                }
            }
            Report::VerifyEquivalence(r) => {
                writeln!(o, "strategies checked: 1 optimal + {} random (seed {})", r.n_random, r.seed).unwrap();
                writeln!(o, "tolerance:          {:e}", r.tolerance).unwrap();
                writeln!(o, "optimal deviation:  {:e}", r.optimal_deviation).unwrap();
                writeln!(o, "max deviation:      {:e}", r.max_deviation).unwrap();
                writeln!(o, "failures:           {}", r.failures).unwrap();
                writeln!(o, "result:             {}", if r.passed { "PASS" } else { "FAIL" }).unwrap();
            }
            Report::SweepEpsilon(r) => {
                writeln!(o, "{:>16} {:>16} {:>16}", "epsilon", "p_formula", "p_circuit").unwrap();
                for p in &r.points {
                    writeln!(o, "{:>16} {:>16} {:>16}", decimal(p.epsilon), decimal(p.p_formula), decimal(p.p_circuit))
                        .unwrap();
                }
                writeln!(o, "max at epsilon = {} with p = {}", pretty(r.best_epsilon), pretty(r.best_p_formula))
                    .unwrap();
                writeln!(
                    o,
                    "all above 3/4: {}; max |p_formula - p_circuit| = {:e}",
                    r.all_above_three_quarters, r.max_abs_difference
                )
                .unwrap();
            }
            Report::Landauer(r) => {
                writeln!(o, "erase probability: {}", pretty(r.erase_probability)).unwrap();
                writeln!(o, "game value:        {}", pretty(r.value)).unwrap();
                writeln!(o, "bits erased per input:").unwrap();
                for e in &r.per_input {
                    writeln!(o, "  (a={}, b={})  {}", e.a, e.b, decimal(e.bits_erased)).unwrap();
                }
                writeln!(o, "average entropy:   {} {}", pretty(r.average_entropy), r.unit).unwrap();
            }
            Report::Q3(r) => {
                writeln!(o, "classical trit, shift gates:       {}", pretty(r.classical_value)).unwrap();
                writeln!(o, "classical trit, all permutations:  {}", pretty(r.permutation_value)).unwrap();
                writeln!(o, "qutrit fixed strategy:             {} (~{})", decimal(r.quantum_value), r.quantum_rounded)
                    .unwrap();
                writeln!(o, "quantum - classical margin:        {}", decimal(r.margin)).unwrap();
                writeln!(o, "matches frozen constant:           {}", r.matches_frozen).unwrap();
                r.classical_witness.render(o);
            }
            Report::ReproduceAll(r) => {
                writeln!(o, "{:<30} {:<46} {:<46} {:<11} ok", "setting", "value", "expected", "method").unwrap();
                for row in &r.rows {
                    writeln!(
                        o,
                        "{:<30} {:<46} {:<46} {:<11} {}",
                        row.setting,
                        pretty(row.value),
                        pretty(row.expected),
                        row.method,
                        if row.matches { "yes" } else { "NO" }
                    )
                    .unwrap();
                }
            }
        }
        out
    }

    pub fn csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match self {
            Report::Value(r) => {
                w.write_record([
                    "setting",
                    "dimension",
                    "value",
                    "symbolic",
                    "method",
                    "strategies_examined",
                    "consistent",
                ])?;
                w.write_record([
                    r.setting.clone(),
                    r.dimension.to_string(),
                    decimal(r.value),
                    r.symbolic.unwrap_or("").into(),
                    json_name(&r.method),
                    r.strategies_examined.to_string(),
                    r.consistent.to_string(),
                ])?;
            }
            Report::VerifyEquivalence(r) => {
                w.write_record([
                    "n_random",
                    "seed",
                    "tolerance",
                    "optimal_deviation",
                    "max_deviation",
                    "failures",
                    "passed",
                ])?;
                w.write_record([
                    r.n_random.to_string(),
                    r.seed.to_string(),
                    format!("{:e}", r.tolerance),
                    format!("{:e}", r.optimal_deviation),
                    format!("{:e}", r.max_deviation),
                    r.failures.to_string(),
                    r.passed.to_string(),
                ])?;
            }
            Report::SweepEpsilon(r) => {
                w.write_record(["epsilon", "p_formula", "p_circuit"])?;
                for p in &r.points {
                    w.write_record([p.epsilon.to_string(), p.p_formula.to_string(), p.p_circuit.to_string()])?;
                }
            }
            Report::Landauer(r) => {
                w.write_record(["erase_probability", "value", "a", "b", "bits_erased"])?;
                for e in &r.per_input {
                    w.write_record([
                        r.erase_probability.to_string(),
                        r.value.to_string(),
                        e.a.to_string(),
                        e.b.to_string(),
                        e.bits_erased.to_string(),
                    ])?;
                }
            }
            Report::Q3(r) => {
                w.write_record(["quantity", "value", "symbolic"])?;
                for (q, v) in [
                    ("classical_shift", r.classical_value),
                    ("classical_permutation", r.permutation_value),
                    ("qutrit_fixed", r.quantum_value),
                    ("margin", r.margin),
                ] {
                    w.write_record([q, &decimal(v), name(v).unwrap_or("")])?;
                }
            }
            Report::ReproduceAll(r) => {
                w.write_record(["setting", "value", "symbolic", "expected", "method", "matches"])?;
                for row in &r.rows {
                    w.write_record([
                        row.setting.clone(),
                        decimal(row.value),
                        row.symbolic.unwrap_or("").into(),
                        decimal(row.expected),
                        row.method.clone(),
                        row.matches.to_string(),
                    ])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn json_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}
