//! Dialogue trees: computations that either return a number or ask the
//! oracle a question and continue with the answer.

use std::fmt;
use std::rc::Rc;

use crate::oracle::{Cost, Observation, Oracle, OracleError};
use crate::Nat;

pub type Continuation = Rc<dyn Fn(Nat) -> Tree>;

#[derive(Clone)]
pub enum Tree {
    Return(Nat),
    Query(Nat, Continuation),
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Return(v) => write!(f, "Return({v})"),
            Tree::Query(q, _) => write!(f, "Query({q}, <continuation>)"),
        }
    }
}

impl Tree {
    pub fn pure(x: impl Into<Nat>) -> Tree {
        Tree::Return(x.into())
    }

    pub fn query(q: impl Into<Nat>, k: impl Fn(Nat) -> Tree + 'static) -> Tree {
        Tree::Query(q.into(), Rc::new(k))
    }

    /// Grafts `f` onto every `Return` leaf.
    pub fn bind(self, f: impl Fn(Nat) -> Tree + 'static) -> Tree {
        bind_rc(self, Rc::new(f))
    }
}

fn bind_rc(t: Tree, f: Continuation) -> Tree {
    match t {
        Tree::Return(v) => f(v),
        Tree::Query(q, k) => Tree::Query(q, Rc::new(move |a| bind_rc(k(a), f.clone()))),
    }
}

/// The `(query, answer)` pairs of one run, in the order asked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript(pub Vec<(Nat, Nat)>);

impl Transcript {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn queries(&self) -> impl Iterator<Item = &Nat> {
        self.0.iter().map(|(q, _)| q)
    }
}

/// Walks `t`, answering queries from `chi`. Asking more than `max_queries`
/// questions counts as divergence.
pub fn run(t: &Tree, chi: &Oracle, max_queries: u64) -> Result<(Observation, Transcript), OracleError> {
    let mut transcript = Transcript::default();
    let mut cur = t.clone();
    loop {
        match cur {
            Tree::Return(value) => {
                let cost = Cost { steps: 0, queries: transcript.len() as u64 };
                return Ok((Observation::Converged { value, cost }, transcript));
            }
            Tree::Query(q, k) => {
                if transcript.len() as u64 == max_queries {
                    return Ok((Observation::Diverged { fuel_spent: max_queries }, transcript));
                }
                let a = chi.answer(&q)?;
                transcript.0.push((q, a.clone()));
                cur = k(a);
            }
        }
    }
}
