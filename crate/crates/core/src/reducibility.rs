//! Reducibility certificates and the constructions built from them.
//!
//! A Turing reduction is a plain program mapping `n` to an oracle code; it
//! is checked pointwise by running that code against the target oracle and
//! comparing with the source oracle. The halting oracle and the jump are
//! not computable, so they are approximated by running programs with a
//! fixed fuel (or, for the halting oracle, read from a curated table). Every
//! report says which approximation it used.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dialogue::Transcript;
use crate::encode::{compact_list_encode, pair, unpair};
use crate::machine::{eval_fuel, Program, StepObservation};
use crate::oracle::{Cost, Observation, Oracle, OracleError};
use crate::programs;
use crate::relmachine::{eval_oracle, Budget, OracleEval};
use crate::Nat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringReduction {
    /// Plain program `n ↦ oracle code`.
    pub reducer: Nat,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WttReduction {
    /// Total program giving the number of target positions consulted.
    pub bound: Nat,
    /// Program run on the compact list `⟨n, χ(0), …, χ(bound(n) - 1)⟩`.
    pub evaluator: Nat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Fuel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub n: Nat,
    pub expected: Option<Nat>,
    pub got: Observation,
    pub verdict: Verdict,
    pub note: Option<String>,
    /// Queries made against the target, in order.
    pub transcript: Transcript,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub points: Vec<PointReport>,
    pub fuel: u64,
    pub fuel_used: u64,
    pub oracle_src: String,
    pub oracle_tgt: String,
}

/// Numbers that fit in 64 bits are emitted as JSON numbers, others as strings.
pub fn nat_json(n: &Nat) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.points.iter().all(|p| p.verdict == Verdict::Pass)
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.points.iter().filter(|p| p.verdict == v).count()
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let got = match &p.got {
                    Observation::Converged { value, cost } => json!({
                        "kind": "converged",
                        "value": nat_json(value),
                        "steps": cost.steps,
                        "queries": cost.queries,
                    }),
                    Observation::Diverged { fuel_spent } => json!({
                        "kind": "diverged",
                        "value": Value::Null,
                        "steps": fuel_spent,
                        "queries": p.transcript.len(),
                    }),
                };
                let mut entry = json!({
                    "n": nat_json(&p.n),
                    "expected": p.expected.as_ref().map_or(Value::Null, nat_json),
                    "got": got,
                    "verdict": p.verdict,
                });
                if let Some(note) = &p.note {
                    entry["note"] = json!(note);
                }
                entry
            })
            .collect();
        json!({
            "points": points,
            "fuel": self.fuel,
            "fuel_used": self.fuel_used,
            "oracle_src": self.oracle_src,
            "oracle_tgt": self.oracle_tgt,
        })
    }
}

fn verdict_for(expected: &Option<Nat>, got: &Observation) -> Verdict {
    match (expected, got) {
        (_, Observation::Diverged { .. }) => Verdict::Fuel,
        (Some(e), Observation::Converged { value, .. }) if e == value => Verdict::Pass,
        _ => Verdict::Fail,
    }
}

fn expected_of(chi_src: &Oracle, n: &Nat) -> (Option<Nat>, Option<String>) {
    match chi_src.answer(n) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(format!("source oracle: {e}"))),
    }
}

/// Runs the reducer on `n` and its oracle code against `chi` under one
/// shared step budget.
pub fn run_reduction_at(reducer: &Nat, chi: &Oracle, n: &Nat, fuel: u64) -> Result<OracleEval, OracleError> {
    match eval_fuel(reducer, n, fuel) {
        StepObservation::OutOfFuel { fuel } => Ok(OracleEval {
            observation: Observation::Diverged { fuel_spent: fuel },
            witness: Default::default(),
            transcript: Transcript::default(),
        }),
        StepObservation::Halted { value: code, steps } => {
            let budget = Budget { fuel: fuel - steps, max_queries: fuel };
            let mut r = eval_oracle(&code, chi, budget)?;
            r.observation = match r.observation {
                Observation::Converged { value, cost } => {
                    Observation::Converged { value, cost: Cost { steps: cost.steps + steps, ..cost } }
                }
                Observation::Diverged { fuel_spent } => Observation::Diverged { fuel_spent: fuel_spent + steps },
            };
            Ok(r)
        }
    }
}

fn spent(o: &Observation) -> u64 {
    match o {
        Observation::Converged { cost, .. } => cost.steps,
        Observation::Diverged { fuel_spent } => *fuel_spent,
    }
}

fn assemble(points: Vec<PointReport>, fuel: u64, src: &Oracle, tgt: &Oracle) -> VerificationReport {
    let fuel_used = points.iter().map(|p| spent(&p.got)).sum();
    VerificationReport {
        points,
        fuel,
        fuel_used,
        oracle_src: src.name().to_string(),
        oracle_tgt: tgt.name().to_string(),
    }
}

/// Checks `chi_src(n) = ψ^{chi_tgt}(φ_reducer(n))` at every point. Points
/// are evaluated in parallel; the report is in point order.
pub fn verify_turing(
    red: &TuringReduction,
    chi_src: &Oracle,
    chi_tgt: &Oracle,
    points: &[Nat],
    fuel: u64,
) -> VerificationReport {
    let reports = points
        .par_iter()
        .map(|n| {
            let (expected, mut note) = expected_of(chi_src, n);
            match run_reduction_at(&red.reducer, chi_tgt, n, fuel) {
                Ok(r) => {
                    let verdict = verdict_for(&expected, &r.observation);
                    PointReport { n: n.clone(), expected, got: r.observation, verdict, note, transcript: r.transcript }
                }
                Err(e) => {
                    note = Some(format!("target oracle: {e}"));
                    PointReport {
                        n: n.clone(),
                        expected,
                        got: Observation::Diverged { fuel_spent: 0 },
                        verdict: Verdict::Fail,
                        note,
                        transcript: Transcript::default(),
                    }
                }
            }
        })
        .collect();
    assemble(reports, fuel, chi_src, chi_tgt)
}

/// Checks `chi_src(n) = φ_{e₁}(⟨n, chi_tgt(0), …, chi_tgt(φ_{e₀}(n) - 1)⟩)`.
pub fn verify_wtt(
    red: &WttReduction,
    chi_src: &Oracle,
    chi_tgt: &Oracle,
    points: &[Nat],
    fuel: u64,
) -> VerificationReport {
    let reports = points
        .par_iter()
        .map(|n| {
            let (expected, note) = expected_of(chi_src, n);
            let mut report = PointReport {
                n: n.clone(),
                expected,
                got: Observation::Diverged { fuel_spent: fuel },
                verdict: Verdict::Fuel,
                note,
                transcript: Transcript::default(),
            };
            let (b, b_steps) = match eval_fuel(&red.bound, n, fuel) {
                StepObservation::Halted { value, steps } => (value, steps),
                StepObservation::OutOfFuel { .. } => {
                    report.note = Some("bound not total within fuel".into());
                    return report;
                }
            };
            let Some(b) = b.to_u64().filter(|b| *b <= fuel) else {
                report.note = Some(format!("bound {b} exceeds the query budget"));
                return report;
            };
            let mut items = vec![n.clone()];
            for i in 0..b {
                match chi_tgt.answer_u64(i) {
                    Ok(a) => {
                        report.transcript.0.push((Nat::from(i), a.clone()));
                        items.push(a);
                    }
                    Err(e) => {
                        report.verdict = Verdict::Fail;
                        report.note = Some(format!("target oracle: {e}"));
                        return report;
                    }
                }
            }
            match eval_fuel(&red.evaluator, &compact_list_encode(&items), fuel - b_steps) {
                StepObservation::Halted { value, steps } => {
                    report.got = Observation::Converged {
                        value,
                        cost: Cost { steps: steps + b_steps, queries: b },
                    };
                    report.verdict = verdict_for(&report.expected, &report.got);
                }
                StepObservation::OutOfFuel { .. } => {
                    report.note = Some("evaluator did not halt within fuel".into());
                }
            }
            report
        })
        .collect();
    assemble(reports, fuel, chi_src, chi_tgt)
}

/// The Turing reduction that asks exactly the positions below the bound.
pub fn wtt_to_turing(red: &WttReduction) -> TuringReduction {
    let (p, k) = programs::wtt_stepper(&red.bound, &red.evaluator);
    TuringReduction {
        reducer: programs::launcher(&p, k),
        source: "wtt-source".into(),
        target: "wtt-target".into(),
    }
}

/// `pair(a, b) ↦ [chi(a) = b]`.
pub fn graph_of(chi: &Oracle) -> Oracle {
    let inner = chi.clone();
    Oracle::fallible(format!("graph:{}", chi.name()), move |q| {
        let (a, b) = unpair(q);
        Ok(Nat::from((inner.answer(&a)? == b) as u32))
    })
    .with_range("boolean")
}

/// `(graph ≤ chi, chi ≤ graph)`.
pub fn graph_reductions(chi: &Oracle) -> (TuringReduction, TuringReduction) {
    let graph = format!("graph:{}", chi.name());
    let (p, k) = programs::graph_to_oracle_stepper();
    let to_chi = TuringReduction { reducer: programs::launcher(&p, k), source: graph.clone(), target: chi.name().into() };
    let (p, k) = programs::oracle_from_graph_stepper();
    let to_graph = TuringReduction { reducer: programs::launcher(&p, k), source: chi.name().into(), target: graph };
    (to_chi, to_graph)
}

/// A right inverse of `f`, computed relative to `f`: the least preimage.
pub fn section_of_surjection(f: &Oracle) -> TuringReduction {
    let (p, k) = programs::section_stepper();
    TuringReduction {
        reducer: programs::launcher(&p, k),
        source: format!("section:{}", f.name()),
        target: f.name().into(),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("not a decision procedure: candidate {index} evaluated to {value}")]
    NotADecision { index: Nat, value: Nat },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Found { side: Side, index: Nat, cost: Cost },
    Exhausted { fuel_spent: u64 },
}

/// Shared step and query accounting for host-level searches. Each candidate
/// costs at least one step, so searches over free candidates still end.
struct Meter<'a> {
    chi: &'a Oracle,
    fuel: u64,
    cost: Cost,
}

impl<'a> Meter<'a> {
    fn new(chi: &'a Oracle, fuel: u64) -> Self {
        Meter { chi, fuel, cost: Cost::default() }
    }

    fn tick(&mut self) -> bool {
        if self.cost.steps >= self.fuel {
            return false;
        }
        self.cost.steps += 1;
        true
    }

    /// `ψ^χ(φ_f(n))`, or `None` when the budget runs out.
    fn relative(&mut self, f: &Nat, n: &Nat) -> Result<Option<Nat>, OracleError> {
        let left = self.fuel - self.cost.steps;
        let r = run_reduction_at(f, self.chi, n, left)?;
        match r.observation {
            Observation::Converged { value, cost } => {
                self.cost.steps += cost.steps;
                self.cost.queries += cost.queries;
                Ok(Some(value))
            }
            Observation::Diverged { .. } => {
                self.cost.steps = self.fuel;
                Ok(None)
            }
        }
    }

    fn decide(&mut self, decider: &Nat, n: &Nat) -> Result<Option<bool>, SearchError> {
        if !self.tick() {
            return Ok(None);
        }
        match self.relative(decider, n)? {
            None => Ok(None),
            Some(v) if v.is_zero() => Ok(Some(false)),
            Some(v) if v.is_one() => Ok(Some(true)),
            Some(value) => Err(SearchError::NotADecision { index: n.clone(), value }),
        }
    }

    fn exhausted(&self) -> SearchResult {
        SearchResult::Exhausted { fuel_spent: self.cost.steps }
    }
}

/// Least `n` whose χ-relative decision is 1.
pub fn markov_search(decider: &Nat, chi: &Oracle, fuel: u64) -> Result<Observation, SearchError> {
    let mut m = Meter::new(chi, fuel);
    let mut n = Nat::zero();
    loop {
        match m.decide(decider, &n)? {
            None => return Ok(Observation::Diverged { fuel_spent: m.cost.steps }),
            Some(true) => return Ok(Observation::Converged { value: n, cost: m.cost }),
            Some(false) => n += 1u32,
        }
    }
}

/// Searches `P(0), Q(0), P(1), Q(1), …` and reports the first success.
pub fn parallel_search(p: &Nat, q: &Nat, chi: &Oracle, fuel: u64) -> Result<SearchResult, SearchError> {
    let mut m = Meter::new(chi, fuel);
    let mut n = Nat::zero();
    loop {
        for (side, d) in [(Side::Left, p), (Side::Right, q)] {
            match m.decide(d, &n)? {
                None => return Ok(m.exhausted()),
                Some(true) => return Ok(SearchResult::Found { side, index: n, cost: m.cost }),
                Some(false) => {}
            }
        }
        n += 1u32;
    }
}

/// Finds a point where `f ≠ g` (left) or `h ≠ k` (right), in the
/// interleaved order of [`parallel_search`].
pub fn distinguish(
    f: &Nat,
    g: &Nat,
    h: &Nat,
    k: &Nat,
    chi: &Oracle,
    fuel: u64,
) -> Result<SearchResult, OracleError> {
    let mut m = Meter::new(chi, fuel);
    let mut n = Nat::zero();
    loop {
        for (side, a, b) in [(Side::Left, f, g), (Side::Right, h, k)] {
            if !m.tick() {
                return Ok(m.exhausted());
            }
            let (Some(x), Some(y)) = (m.relative(a, &n)?, m.relative(b, &n)?) else {
                return Ok(m.exhausted());
            };
            if x != y {
                return Ok(SearchResult::Found { side, index: n, cost: m.cost });
            }
        }
        n += 1u32;
    }
}

pub enum HaltingMode {
    /// `κ(pair(e, n)) = 1` iff `φ_e(n)` halts within the fuel.
    Fuel(u64),
    /// Exact answers for a finite set of `pair(e, n)` codes.
    Table(BTreeMap<Nat, bool>),
}

pub fn halting_oracle(mode: HaltingMode) -> Oracle {
    match mode {
        HaltingMode::Fuel(fuel) => Oracle::new(format!("halting:fuel={fuel}"), move |q| {
            let (e, n) = unpair(q);
            Nat::from(eval_fuel(&e, &n, fuel).value().is_some() as u32)
        })
        .with_range("boolean, fuel-approximate"),
        HaltingMode::Table(table) => {
            let table: BTreeMap<Nat, Nat> =
                table.into_iter().map(|(k, v)| (k, Nat::from(v as u32))).collect();
            Oracle::table("halting:table", table).with_range("boolean")
        }
    }
}

/// `INC 1; JZ 2 0`: register 2 is never written, so the jump is always taken.
pub fn loop_code() -> Nat {
    crate::machine::assemble("INC 1\nJZ 2 0").unwrap().code()
}

/// Counts register 1 down from 5000 before halting: about 15000 steps.
pub fn slow_halter() -> Nat {
    crate::machine::assemble("SET 1 5000\nDEC 1\nJZ 1 4\nJZ 2 1").unwrap().code()
}

/// Programs with known halting behaviour on every input:
/// `(code, halts, reason)`.
pub fn curated_programs() -> Vec<(Nat, bool, &'static str)> {
    vec![
        (Nat::zero(), true, "empty program"),
        (Program::new(vec![crate::machine::ins::inc(0)]).code(), true, "single INC"),
        (crate::machine::assemble("INC 0\nINC 0").unwrap().code(), true, "straight line"),
        (slow_halter(), true, "bounded countdown"),
        (loop_code(), false, "jump on a register nothing writes"),
        (crate::machine::assemble("JZ 5 0").unwrap().code(), false, "self-jump on a zero register"),
    ]
}

/// Exact halting table over the curated programs and inputs `0..inputs`.
pub fn curated_halting_table(inputs: u64) -> BTreeMap<Nat, bool> {
    let mut t = BTreeMap::new();
    for (e, halts, _) in curated_programs() {
        for n in 0..inputs {
            t.insert(pair(&e, &Nat::from(n)), halts);
        }
    }
    t
}

/// Fuel-approximate jump: `n ↦ 1` iff `φ_n(n)` halts with `v` and `ψ^χ(v)`
/// converges to 0.
pub fn jump(chi: &Oracle, fuel: u64) -> Oracle {
    let inner = chi.clone();
    Oracle::fallible(format!("jump:{}:fuel={fuel}", chi.name()), move |n| {
        let Some(v) = eval_fuel(n, n, fuel).value().cloned() else {
            return Ok(Nat::zero());
        };
        let r = eval_oracle(&v, &inner, fuel)?;
        Ok(Nat::from(r.value().is_some_and(Zero::is_zero) as u32))
    })
    .with_range("boolean, fuel-approximate")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JumpRefutation {
    /// At its own index the candidate claims `claimed`, the jump is `jump_value`.
    Mismatch { index: Nat, claimed: Nat, jump_value: Nat },
    /// The candidate does not converge at its own index within the fuel.
    Divergence { index: Nat, stage: &'static str, fuel: u64 },
}

/// Evaluates a claimed reduction of the jump of `chi` to `chi` at the
/// diagonal point, its own reducer code.
pub fn refute_jump_reduction(
    candidate: &TuringReduction,
    chi: &Oracle,
    fuel: u64,
) -> Result<JumpRefutation, OracleError> {
    let e = &candidate.reducer;
    let Some(code) = eval_fuel(e, e, fuel).value().cloned() else {
        return Ok(JumpRefutation::Divergence { index: e.clone(), stage: "reducer", fuel });
    };
    let Some(claimed) = eval_oracle(&code, chi, fuel)?.value().cloned() else {
        return Ok(JumpRefutation::Divergence { index: e.clone(), stage: "oracle code", fuel });
    };
    let jump_value = jump(chi, fuel).answer(e)?;
    Ok(JumpRefutation::Mismatch { index: e.clone(), claimed, jump_value })
}

/// `ζ(pair(e₀, e₁)) = 0` iff `φ_{e₀}` halts on the point with bound `B` and
/// `φ_{e₁}(⟨point, κ(0), …, κ(B-1)⟩) = 1`, with κ fuel-approximated.
pub fn diagonal_oracle(fuel: u64) -> Oracle {
    let kappa = halting_oracle(HaltingMode::Fuel(fuel));
    Oracle::fallible(format!("diagonal:fuel={fuel}"), move |m| {
        Ok(Nat::from(match wtt_pair_output(m, m, &kappa, fuel)? {
            PairOutput::Value(v) if v.is_one() => 0u32,
            _ => 1u32,
        }))
    })
    .with_range("boolean")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutput {
    Value(Nat),
    BoundDiverges,
    EvaluatorDiverges,
}

/// `φ_{e₁}(⟨n, κ(0), …, κ(φ_{e₀}(n) - 1)⟩)` for `pair_code = pair(e₀, e₁)`.
pub fn wtt_pair_output(pair_code: &Nat, n: &Nat, kappa: &Oracle, fuel: u64) -> Result<PairOutput, OracleError> {
    let (e0, e1) = unpair(pair_code);
    let Some(b) = eval_fuel(&e0, n, fuel).value().cloned() else {
        return Ok(PairOutput::BoundDiverges);
    };
    let b = b.to_u64().expect("a bound computed within the fuel fits in u64");
    let mut items = vec![n.clone()];
    for i in 0..b {
        items.push(kappa.answer_u64(i)?);
    }
    Ok(match eval_fuel(&e1, &compact_list_encode(&items), fuel).value() {
        Some(v) => PairOutput::Value(v.clone()),
        None => PairOutput::EvaluatorDiverges,
    })
}

#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub reduction: TuringReduction,
    pub verification: VerificationReport,
    pub diagonal_point: Nat,
    pub zeta_at_diagonal: Nat,
    pub pair_output: PairOutput,
    /// The pair disagrees with ζ at the diagonal point or diverges there.
    pub refuted: bool,
}

/// Builds ζ and κ, verifies the reduction of ζ to κ on `points`, and
/// evaluates the candidate wtt pair `(e0, e1)` at its own index.
pub fn wtt_separation_demo(e0: &Nat, e1: &Nat, fuel: u64, points: &[Nat]) -> Result<SeparationReport, OracleError> {
    let kappa = halting_oracle(HaltingMode::Fuel(fuel));
    let zeta = diagonal_oracle(fuel);
    let (p, k) = programs::diagonal_stepper();
    let reduction = TuringReduction {
        reducer: programs::launcher(&p, k),
        source: zeta.name().into(),
        target: kappa.name().into(),
    };
    // the reducer reruns both programs under the verification budget
    let verification = verify_turing(&reduction, &zeta, &kappa, points, 2 * fuel + 1_000_000);
    let d = pair(e0, e1);
    let zeta_at_diagonal = zeta.answer(&d)?;
    let pair_output = wtt_pair_output(&d, &d, &kappa, fuel)?;
    let refuted = match &pair_output {
        PairOutput::Value(v) => *v != zeta_at_diagonal,
        _ => true,
    };
    Ok(SeparationReport { reduction, verification, diagonal_point: d, zeta_at_diagonal, pair_output, refuted })
}

/// Convenience: the points `0..n`.
pub fn range(n: u64) -> Vec<Nat> {
    (0..n).map(Nat::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::pair_u64;
    use crate::machine::assemble;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    fn identity_red(name: &str) -> TuringReduction {
        TuringReduction { reducer: programs::identity_reducer(), source: name.into(), target: name.into() }
    }

    #[test]
    fn identity_and_off_by_one() {
        let chi = Oracle::successor();
        let r = verify_turing(&identity_red("succ"), &chi, &chi, &range(20), 10_000);
        assert!(r.all_pass());
        let bad = TuringReduction { reducer: programs::off_by_one_reducer(), ..identity_red("succ") };
        let r = verify_turing(&bad, &chi, &chi, &range(20), 10_000);
        assert_eq!(r.count(Verdict::Fail), 20);
    }

    #[test]
    fn low_fuel_gives_fuel_verdicts() {
        let chi = Oracle::identity();
        let (red, _) = graph_reductions(&chi);
        let r = verify_turing(&red, &graph_of(&chi), &chi, &range(5), 10);
        assert_eq!(r.count(Verdict::Fuel), 5);
    }

    fn second_element() -> Nat {
        // ⟨n, a⟩ ↦ a
        assemble("DEC 0\nCUNPAIR 1 0 0\nDEC 0\nCUNPAIR 0 1 0").unwrap().code()
    }

    #[test]
    fn wtt_examples() {
        let chi = Oracle::new("sq", |x| x * x);
        let red = WttReduction { bound: assemble("SET 0 1").unwrap().code(), evaluator: second_element() };
        let src = Oracle::constant(0u32);
        assert!(verify_wtt(&red, &src, &chi, &[n(0)], 1000).all_pass());
        let zero = WttReduction { bound: assemble("SET 0 0").unwrap().code(), evaluator: assemble("SET 0 0").unwrap().code() };
        assert!(verify_wtt(&zero, &src, &chi, &range(10), 1000).all_pass());
        let looping = WttReduction { bound: zero.bound.clone(), evaluator: loop_code() };
        assert_eq!(verify_wtt(&looping, &src, &chi, &[n(3)], 1000).points[0].verdict, Verdict::Fuel);
    }

    #[test]
    fn wtt_compiles_to_turing() {
        let chi = Oracle::new("sq", |x| x * x);
        let red = WttReduction { bound: assemble("SET 0 1").unwrap().code(), evaluator: second_element() };
        let src = Oracle::constant(0u32);
        let t = wtt_to_turing(&red);
        let r = verify_turing(&t, &src, &chi, &range(5), 1_000_000);
        assert!(r.all_pass());
        assert!(r.points.iter().all(|p| p.transcript.0 == vec![(n(0), n(0))]));
        let zero = WttReduction { bound: assemble("SET 0 0").unwrap().code(), evaluator: assemble("SET 0 0").unwrap().code() };
        let r = verify_turing(&wtt_to_turing(&zero), &src, &chi, &range(5), 1_000_000);
        assert!(r.all_pass() && r.points.iter().all(|p| p.transcript.is_empty()));
    }

    #[test]
    fn graph_examples() {
        let succ = Oracle::successor();
        let g = graph_of(&succ);
        assert_eq!(g.answer(&pair_u64(2, 3)).unwrap(), n(1));
        assert_eq!(g.answer(&pair_u64(2, 4)).unwrap(), n(0));
        let c0 = Oracle::constant(0u32);
        let (_, to_graph) = graph_reductions(&c0);
        let r = verify_turing(&to_graph, &c0, &graph_of(&c0), &[n(7)], 1_000_000);
        assert_eq!(r.points[0].transcript.0, vec![(pair_u64(7, 0), n(1))]);
        let id = Oracle::identity();
        let (_, to_graph) = graph_reductions(&id);
        let r = verify_turing(&to_graph, &id, &graph_of(&id), &[n(3)], 1_000_000);
        let qs: Vec<Nat> = r.points[0].transcript.queries().cloned().collect();
        assert_eq!(qs, (0..4).map(|m| pair_u64(3, m)).collect::<Vec<_>>());
    }

    #[test]
    fn sections() {
        let succ = Oracle::successor();
        let sec = section_of_surjection(&succ);
        let pred = Oracle::new("pred", |x: &Nat| if x.is_zero() { Nat::zero() } else { x - 1u32 });
        assert!(verify_turing(&sec, &pred, &succ, &range(21)[1..], 1_000_000).all_pass());
        let id = Oracle::identity();
        assert!(verify_turing(&section_of_surjection(&id), &id, &id, &range(21), 1_000_000).all_pass());
        let c0 = Oracle::constant(0u32);
        let r = verify_turing(&section_of_surjection(&c0), &id, &c0, &[n(1)], 100_000);
        assert_eq!(r.points[0].verdict, Verdict::Fuel);
    }

    /// Decider `n ↦ Step(n, e)` where `e` maps the answer `a` to `Pure([a = 0])`.
    fn zero_decider() -> Nat {
        let is_zero = assemble("JZ 0 3\nSET 0 0\nJZ 1 4\nSET 0 2").unwrap().code();
        let mut a = crate::machine::builder::Asm::new();
        a.set(1, is_zero).pair(0, 0, 1).add(0, 0).inc(0);
        a.finish().code()
    }

    #[test]
    fn markov_examples() {
        let chi = Oracle::new("shifted", |x: &Nat| if *x < n(4) { n(1) } else { x % 2u32 });
        let r = markov_search(&zero_decider(), &chi, 100_000).unwrap();
        assert_eq!(r.value(), Some(&n(4)));
        let r = markov_search(&programs::constant_reducer(&n(1)), &chi, 100).unwrap();
        assert_eq!(r.value(), Some(&n(0)));
        let r = markov_search(&programs::constant_reducer(&n(0)), &chi, 500).unwrap();
        assert_eq!(r, Observation::Diverged { fuel_spent: 500 });
        let r = markov_search(&programs::constant_reducer(&n(7)), &chi, 500);
        assert!(matches!(r, Err(SearchError::NotADecision { .. })));
    }

    #[test]
    fn parallel_examples() {
        let p_chi = Oracle::new("pq", |x: &Nat| {
            // query 2m decides P(m), query 2m+1 decides Q(m)
            let (m, side) = (x >> 1u32, x.bit(0));
            let hit = if side { m == n(2) } else { m == n(4) };
            n(!hit as u64)
        });
        let p = assemble_decider(false);
        let q = assemble_decider(true);
        let r = parallel_search(&p, &q, &p_chi, 1_000_000).unwrap();
        assert!(matches!(r, SearchResult::Found { side: Side::Right, ref index, .. } if *index == n(2)));
        let both = Oracle::new("both", |x: &Nat| n(((x >> 1u32) != n(3)) as u64));
        let r = parallel_search(&p, &q, &both, 1_000_000).unwrap();
        assert!(matches!(r, SearchResult::Found { side: Side::Left, ref index, .. } if *index == n(3)));
        let never = Oracle::constant(1u32);
        assert!(matches!(parallel_search(&p, &q, &never, 10_000).unwrap(), SearchResult::Exhausted { .. }));
    }

    /// `m ↦ decide [χ(2m + side) = 0]`.
    fn assemble_decider(right: bool) -> Nat {
        let is_zero = assemble("JZ 0 3\nSET 0 0\nJZ 1 4\nSET 0 2").unwrap().code();
        let mut a = crate::machine::builder::Asm::new();
        a.add(0, 0);
        if right {
            a.inc(0);
        }
        a.set(1, is_zero).pair(0, 0, 1).add(0, 0).inc(0);
        a.finish().code()
    }

    #[test]
    fn distinguish_examples() {
        let chi = Oracle::identity();
        let idr = programs::identity_reducer();
        // h: n ↦ χ(n), k: n ↦ χ(n) except 5 ↦ 0
        let k = chi_except_five();
        let r = distinguish(&idr, &idr, &idr, &k, &chi, 1_000_000).unwrap();
        assert!(matches!(r, SearchResult::Found { side: Side::Right, ref index, .. } if *index == n(5)));
        let r = distinguish(&idr, &programs::off_by_one_reducer(), &idr, &idr, &chi, 1_000_000).unwrap();
        assert!(matches!(r, SearchResult::Found { side: Side::Left, ref index, .. } if index.is_zero()));
        let r = distinguish(&idr, &idr, &idr, &idr, &chi, 20_000).unwrap();
        assert!(matches!(r, SearchResult::Exhausted { .. }));
    }

    fn chi_except_five() -> Nat {
        let mut a = crate::machine::builder::Asm::new();
        let five = a.label();
        a.jeq_const(0, 5u32, five).set(1, programs::wrap().clone()).pair(0, 0, 1).add(0, 0).inc(0).halt();
        a.bind(five);
        a.set(0, 0u32);
        a.finish().code()
    }

    #[test]
    fn halting_examples() {
        let table = halting_oracle(HaltingMode::Table(curated_halting_table(5)));
        let by_fuel = halting_oracle(HaltingMode::Fuel(100_000));
        for i in 0..5 {
            assert_eq!(by_fuel.answer(&pair(&n(0), &n(i))).unwrap(), n(1));
        }
        assert_eq!(table.answer(&pair(&loop_code(), &n(0))).unwrap(), n(0));
        assert!(table.answer(&pair(&n(12345), &n(0))).is_err());
        for (e, _, _) in curated_programs() {
            let q = pair(&e, &n(2));
            assert_eq!(by_fuel.answer(&q).unwrap(), table.answer(&q).unwrap());
        }
        let tiny = halting_oracle(HaltingMode::Fuel(100));
        assert_eq!(tiny.answer(&pair(&slow_halter(), &n(0))).unwrap(), n(0));
    }

    #[test]
    fn jump_examples() {
        let chi = Oracle::identity();
        let j = jump(&chi, 100_000);
        assert_eq!(j.answer(&loop_code()).unwrap(), n(0));
        let ret0 = programs::constant_reducer(&n(0));
        let ret1 = programs::constant_reducer(&n(1));
        assert_eq!(j.answer(&ret0).unwrap(), n(1));
        assert_eq!(j.answer(&ret1).unwrap(), n(0));
    }

    #[test]
    fn jump_refutations() {
        let chi = Oracle::identity();
        let cand = |reducer| TuringReduction { reducer, source: "jump".into(), target: "id".into() };
        let r = refute_jump_reduction(&cand(programs::constant_reducer(&n(0))), &chi, 100_000).unwrap();
        assert!(matches!(r, JumpRefutation::Mismatch { ref claimed, ref jump_value, .. } if claimed.is_zero() && jump_value.is_one()));
        let r = refute_jump_reduction(&cand(programs::constant_reducer(&n(1))), &chi, 100_000).unwrap();
        assert!(matches!(r, JumpRefutation::Mismatch { ref claimed, ref jump_value, .. } if claimed.is_one() && jump_value.is_zero()));
        let r = refute_jump_reduction(&cand(loop_code()), &chi, 100_000).unwrap();
        assert!(matches!(r, JumpRefutation::Divergence { stage: "reducer", .. }));
    }

    #[test]
    fn report_json_shape() {
        let chi = Oracle::successor();
        let r = verify_turing(&identity_red("succ"), &chi, &chi, &range(2), 1000);
        let j = r.to_json();
        assert_eq!(j["points"][1]["got"]["kind"], "converged");
        assert_eq!(j["points"][1]["got"]["value"], 2);
        assert_eq!(j["points"][1]["verdict"], "pass");
        assert_eq!(j["oracle_src"], "succ");
        assert_eq!(j["fuel"], 1000);
    }
}
