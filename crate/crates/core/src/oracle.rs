//! Oracles and the observations made by fuel-bounded computations.
//!
//! An oracle is a black box `ℕ → ℕ`. Machines can ask it questions but can
//! not look inside it, and an answer costs no machine steps. Oracles are
//! expected to be deterministic; several built-in oracles (tables,
//! fuel-approximated halting sets) may refuse a query, which surfaces as an
//! [`OracleError`] instead of a made-up answer.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::Nat;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle `{oracle}` has no answer for query {query}")]
    Undefined { oracle: String, query: Nat },
    #[error("oracle `{oracle}` failed on query {query}: {message}")]
    Failed { oracle: String, query: Nat, message: String },
}

type AnswerFn = dyn Fn(&Nat) -> Result<Nat, OracleError> + Send + Sync;

#[derive(Clone)]
pub struct Oracle {
    name: String,
    answer: Arc<AnswerFn>,
    range: Option<String>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle").field("name", &self.name).field("range", &self.range).finish()
    }
}

impl Oracle {
    /// A total oracle.
    pub fn new(name: impl Into<String>, f: impl Fn(&Nat) -> Nat + Send + Sync + 'static) -> Self {
        Oracle { name: name.into(), answer: Arc::new(move |n| Ok(f(n))), range: None }
    }

    /// An oracle that may refuse queries.
    pub fn fallible(
        name: impl Into<String>,
        f: impl Fn(&Nat) -> Result<Nat, OracleError> + Send + Sync + 'static,
    ) -> Self {
        Oracle { name: name.into(), answer: Arc::new(f), range: None }
    }

    pub fn with_range(mut self, note: impl Into<String>) -> Self {
        self.range = Some(note.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared_range(&self) -> Option<&str> {
        self.range.as_deref()
    }

    pub fn answer(&self, n: &Nat) -> Result<Nat, OracleError> {
        (self.answer)(n)
    }

    pub fn answer_u64(&self, n: u64) -> Result<Nat, OracleError> {
        self.answer(&Nat::from(n))
    }

    pub fn identity() -> Self {
        Oracle::new("id", |n| n.clone())
    }

    pub fn successor() -> Self {
        Oracle::new("succ", |n| n + 1u32)
    }

    pub fn constant(v: impl Into<Nat>) -> Self {
        let v: Nat = v.into();
        Oracle::new(format!("const:{v}"), move |_| v.clone())
    }

    /// Answers from a finite table; other queries are refused.
    pub fn table(name: impl Into<String>, table: BTreeMap<Nat, Nat>) -> Self {
        let name = name.into();
        let label = name.clone();
        Oracle::fallible(name, move |n| {
            table
                .get(n)
                .cloned()
                .ok_or_else(|| OracleError::Undefined { oracle: label.clone(), query: n.clone() })
        })
    }

    /// The same oracle with every answer computed by `f` from the original.
    pub fn map(&self, name: impl Into<String>, f: impl Fn(&Nat, Nat) -> Nat + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Oracle::fallible(name, move |n| inner.answer(n).map(|a| f(n, a)))
    }

    /// Agrees with `self` except at `at`, where it answers `value`.
    pub fn patched(&self, at: Nat, value: Nat) -> Self {
        let inner = self.clone();
        Oracle::fallible(format!("{}[{at}:={value}]", self.name), move |n| {
            if *n == at {
                Ok(value.clone())
            } else {
                inner.answer(n)
            }
        })
    }
}

/// `n ↦ if pred(n) { if_true(n) } else { if_false(n) }`.
pub fn oracle_by_cases(
    name: impl Into<String>,
    pred: impl Fn(&Nat) -> bool + Send + Sync + 'static,
    if_true: impl Fn(&Nat) -> Nat + Send + Sync + 'static,
    if_false: impl Fn(&Nat) -> Nat + Send + Sync + 'static,
) -> Oracle {
    Oracle::new(name, move |n| if pred(n) { if_true(n) } else { if_false(n) })
}

/// The characteristic function of a subset.
pub fn boolean_oracle_from_subset(
    name: impl Into<String>,
    member: impl Fn(&Nat) -> bool + Send + Sync + 'static,
) -> Oracle {
    oracle_by_cases(name, member, |_| Nat::one(), |_| Nat::zero()).with_range("boolean")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Cost {
    pub steps: u64,
    pub queries: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observation {
    Converged { value: Nat, cost: Cost },
    Diverged { fuel_spent: u64 },
}

impl Observation {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            Observation::Converged { value, .. } => Some(value),
            Observation::Diverged { .. } => None,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, Observation::Converged { .. })
    }
}

/// A value whose provenance has been forgotten. Only equality and report
/// output can see inside.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Erased(Nat);

impl Erased {
    pub fn for_report(&self) -> &Nat {
        &self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot erase a diverged observation (spent {fuel_spent})")]
pub struct EraseError {
    pub fuel_spent: u64,
}

pub fn erase(obs: &Observation) -> Result<Erased, EraseError> {
    match obs {
        Observation::Converged { value, .. } => Ok(Erased(value.clone())),
        Observation::Diverged { fuel_spent } => Err(EraseError { fuel_spent: *fuel_spent }),
    }
}
