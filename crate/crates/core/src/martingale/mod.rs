//! Martingales: capital functions on words with `2·d(w) = d(w0) + d(w1)`.
//!
//! A [`Martingale`] is evaluated under a step [`Budget`]; running out of
//! budget is how partiality shows up. The trait is also used for capital
//! functions that are *not* fair (for example the finite-run value of a
//! non-monotonic strategy), which is what [`check_fairness`] is for.

mod basic;
mod fairness;
mod saving;
mod weighted;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::{Budget, OutOfBudget};
use crate::capital::Capital;
use crate::word::Word;

pub use basic::{
    ConstantMartingale, FractionBettor, PartialMartingale, PatternBettor, RandomFairMartingale, TableMartingale,
    ZeroMartingale,
};
pub use fairness::{check_fairness, conservation_holds, FairnessReport, Violation, ViolationKind};
pub use saving::{saving_transform, SavingMartingale, SavingState};
pub use weighted::{weighted_sum, WeightedSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("step budget exhausted")]
    OutOfBudget,
    #[error("{unknown} unknown visited positions exceed the averaging cap of {cap}")]
    HorizonTooLarge { unknown: usize, cap: usize },
    #[error("no bound on the moves visiting positions below {0}")]
    NoBound(usize),
    #[error("neither race event occurred within budget at {0:?}")]
    RaceTimeout(Word),
    #[error("scan rule is not injective: moves {0} and {1} visit the same position")]
    NotInjective(usize, usize),
    #[error("operation unsupported for this scan rule")]
    UnsupportedRule,
}

impl From<OutOfBudget> for EvalError {
    fn from(_: OutOfBudget) -> Self {
        EvalError::OutOfBudget
    }
}

pub trait Martingale: Send + Sync + fmt::Debug {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError>;

    /// Values at every prefix of `w`, shortest first (`w.len() + 1` entries).
    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        (0..=w.len()).map(|n| self.eval(&w.prefix(n), budget)).collect()
    }

    /// Whether the evaluator claims to be defined everywhere.
    fn declared_total(&self) -> bool {
        true
    }

    fn describe(&self) -> String;
}

pub type MartingaleRef = Arc<dyn Martingale>;

/// `d(ε)` with an unlimited budget.
pub fn initial_capital(m: &dyn Martingale) -> Result<Capital, EvalError> {
    m.eval(&Word::empty(), &mut Budget::unlimited())
}

/// Evaluate with an unlimited budget; convenient for total martingales.
pub fn value(m: &dyn Martingale, w: &Word) -> Result<Capital, EvalError> {
    m.eval(w, &mut Budget::unlimited())
}
