use super::{EvalError, Martingale};
use crate::budget::Budget;
use crate::capital::Capital;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `2·d(w) ≠ d(w0) + d(w1)`.
    Unbalanced { parent: Capital, left: Capital, right: Capital },
    /// Exactly one child is defined.
    OneChildDefined { defined: bool },
    /// Both children are defined but the parent is not.
    ParentUndefined,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub word: Word,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FairnessReport {
    pub violations: Vec<Violation>,
    /// Words whose evaluation ran out of budget. Not a violation by itself.
    pub exhausted: Vec<Word>,
    pub words_checked: usize,
}

impl FairnessReport {
    pub fn is_fair(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation_words(&self) -> Vec<Word> {
        self.violations.iter().map(|v| v.word.clone()).collect()
    }
}

fn eval_once(m: &dyn Martingale, w: &Word, budget: u64) -> Result<Capital, EvalError> {
    m.eval(w, &mut Budget::new(budget))
}

/// Check `2·d(w) = d(w0) + d(w1)` exactly for every `|w| < depth`, each
/// evaluation getting a fresh budget of `budget` steps.
pub fn check_fairness(m: &dyn Martingale, depth: usize, budget: u64) -> FairnessReport {
    let mut report = FairnessReport::default();
    for n in 0..depth {
        for w in Word::all_of_length(n) {
            report.words_checked += 1;
            let parent = eval_once(m, &w, budget);
            let left = eval_once(m, &w.child(false), budget);
            let right = eval_once(m, &w.child(true), budget);
            if parent.is_err() {
                report.exhausted.push(w.clone());
            }
            let kind = match (parent, left, right) {
                (Ok(p), Ok(l), Ok(r)) => {
                    if p.mul_pow2(1) != &l + &r {
                        Some(ViolationKind::Unbalanced { parent: p, left: l, right: r })
                    } else {
                        None
                    }
                }
                (Err(_), Ok(_), Ok(_)) => Some(ViolationKind::ParentUndefined),
                (_, Ok(_), Err(_)) => Some(ViolationKind::OneChildDefined { defined: false }),
                (_, Err(_), Ok(_)) => Some(ViolationKind::OneChildDefined { defined: true }),
                (_, Err(_), Err(_)) => None,
            };
            if let Some(kind) = kind {
                report.violations.push(Violation { word: w, kind });
            }
        }
    }
    report
}

/// `Σ_{|w|=n} d(w) = 2^n·d(ε)` for every `n ≤ max_len`.
pub fn conservation_holds(m: &dyn Martingale, max_len: usize) -> Result<bool, EvalError> {
    let root = m.eval(&Word::empty(), &mut Budget::unlimited())?;
    for n in 0..=max_len {
        let mut total = Capital::zero();
        for w in Word::all_of_length(n) {
            total += &m.eval(&w, &mut Budget::unlimited())?;
        }
        if total != root.mul_pow2(n) {
            return Ok(false);
        }
    }
    Ok(true)
}
