//! Oracle machines on top of the plain machine.
//!
//! An oracle code `e` unfolds through θ: `Pure(n)` answers `n`; `Step(q, e')`
//! asks the oracle about `q` and runs the plain program `e'` on the answer
//! to get the next oracle code. A convergent run is certified by its
//! witness list, the exact step count of every stage.

use serde::Serialize;
use thiserror::Error;

use crate::dialogue::Transcript;
use crate::encode::{list_encode, pair, theta, TaggedCode};
use crate::machine::{eval_exact, eval_fuel, StepObservation};
use crate::oracle::{Cost, Observation, Oracle, OracleError};
use crate::Nat;

/// `[k₁, …, k_m]` where `k_m` is the step count of the first stage.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct WitnessList(pub Vec<u64>);

impl WitnessList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Stage step counts in execution order.
    pub fn stages(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().rev().copied()
    }

    pub fn code(&self) -> Nat {
        let items: Vec<Nat> = self.0.iter().map(|&k| Nat::from(k)).collect();
        list_encode(&items)
    }
}

/// Step and query limits shared by all stages of one evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub fuel: u64,
    pub max_queries: u64,
}

impl Budget {
    pub fn new(fuel: u64) -> Self {
        Budget { fuel, max_queries: fuel }
    }
}

impl From<u64> for Budget {
    fn from(fuel: u64) -> Self {
        Budget::new(fuel)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleRunResult {
    pub value: Nat,
    pub witness: WitnessList,
    pub transcript: Transcript,
    pub machine_steps_total: u64,
}

/// Everything one evaluation observed, including the partial witness and
/// transcript of a run that ran out of budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleEval {
    pub observation: Observation,
    pub witness: WitnessList,
    pub transcript: Transcript,
}

impl OracleEval {
    pub fn result(&self) -> Option<OracleRunResult> {
        match &self.observation {
            Observation::Converged { value, cost } => Some(OracleRunResult {
                value: value.clone(),
                witness: self.witness.clone(),
                transcript: self.transcript.clone(),
                machine_steps_total: cost.steps,
            }),
            Observation::Diverged { .. } => None,
        }
    }

    pub fn value(&self) -> Option<&Nat> {
        self.observation.value()
    }

    /// Distinct queried indices in increasing order.
    pub fn use_list(&self) -> Vec<Nat> {
        let mut l: Vec<Nat> = self.transcript.queries().cloned().collect();
        l.sort();
        l.dedup();
        l
    }
}

/// `ψ^χ_{k⃗}(e)`: `Ok(None)` is ⊥.
pub fn run_with_witness(e: &Nat, kvec: &WitnessList, chi: &Oracle) -> Result<Option<Nat>, OracleError> {
    let mut code = e.clone();
    let mut remaining = kvec.0.as_slice();
    loop {
        match (theta(&code), remaining.split_last()) {
            (TaggedCode::Pure(n), None) => return Ok(Some(n)),
            (TaggedCode::Pure(_), Some(_)) | (TaggedCode::Step { .. }, None) => return Ok(None),
            (TaggedCode::Step { query, next }, Some((k, rest))) => {
                let answer = chi.answer(&query)?;
                match eval_exact(&next, *k, &answer) {
                    Some(c) => code = c,
                    None => return Ok(None),
                }
                remaining = rest;
            }
        }
    }
}

/// Direct simulation of `ψ^χ(e)`.
pub fn eval_oracle(e: &Nat, chi: &Oracle, budget: impl Into<Budget>) -> Result<OracleEval, OracleError> {
    let budget = budget.into();
    let mut code = e.clone();
    let mut stages = Vec::new();
    let mut transcript = Transcript::default();
    let mut steps = 0u64;
    let finish = |observation, mut stages: Vec<u64>, transcript| {
        stages.reverse();
        Ok(OracleEval { observation, witness: WitnessList(stages), transcript })
    };
    loop {
        match theta(&code) {
            TaggedCode::Pure(value) => {
                let cost = Cost { steps, queries: transcript.len() as u64 };
                return finish(Observation::Converged { value, cost }, stages, transcript);
            }
            TaggedCode::Step { query, next } => {
                if transcript.len() as u64 == budget.max_queries {
                    return finish(Observation::Diverged { fuel_spent: steps }, stages, transcript);
                }
                let answer = chi.answer(&query)?;
                transcript.0.push((query, answer.clone()));
                match eval_fuel(&next, &answer, budget.fuel - steps) {
                    StepObservation::Halted { value, steps: k } => {
                        steps += k;
                        stages.push(k);
                        code = value;
                    }
                    StepObservation::OutOfFuel { .. } => {
                        return finish(Observation::Diverged { fuel_spent: budget.fuel }, stages, transcript);
                    }
                }
            }
        }
    }
}

/// `θ⁻¹(Pure(n))`.
pub fn compile_return(n: &Nat) -> Nat {
    n << 1u32
}

/// `θ⁻¹(Step(n, e))`.
pub fn compile_query(n: &Nat, cont: &Nat) -> Nat {
    (pair(n, cont) << 1u32) + 1u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UseVerdict {
    /// The alternative oracle agrees on the use list and the result is unchanged.
    Stable,
    /// The alternative oracle differs on a used index; nothing is claimed.
    DivergentInputs,
    /// Agreement on the use list but a different outcome. Never expected.
    Violation,
}

#[derive(Clone, Debug)]
pub struct UseReport {
    pub use_list: Vec<Nat>,
    pub base: OracleRunResult,
    pub alt: OracleEval,
    pub verdict: UseVerdict,
}

#[derive(Debug, Error)]
pub enum UseError {
    #[error("base run diverged")]
    BaseDiverged,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Runs `e` against `chi`, then against `chi_alt`, and checks that agreement
/// on the queried indices forces the same value and witness.
pub fn use_and_verify(
    e: &Nat,
    chi: &Oracle,
    chi_alt: &Oracle,
    budget: impl Into<Budget>,
) -> Result<UseReport, UseError> {
    let budget = budget.into();
    let base_eval = eval_oracle(e, chi, budget)?;
    let base = base_eval.result().ok_or(UseError::BaseDiverged)?;
    let use_list = base_eval.use_list();
    let mut agrees = true;
    for q in &use_list {
        if chi.answer(q)? != chi_alt.answer(q)? {
            agrees = false;
            break;
        }
    }
    let alt = eval_oracle(e, chi_alt, budget)?;
    let verdict = if !agrees {
        UseVerdict::DivergentInputs
    } else if alt.value() == Some(&base.value) && alt.witness == base.witness {
        UseVerdict::Stable
    } else {
        UseVerdict::Violation
    };
    Ok(UseReport { use_list, base, alt, verdict })
}
