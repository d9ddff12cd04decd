//! Betting strategies: a martingale over visited-bit histories paired with a
//! scan rule, and their runs on finite words and on sequences.

mod scan;

use std::collections::HashMap;

use crate::budget::Budget;
use crate::capital::Capital;
use crate::martingale::{EvalError, Martingale, MartingaleRef};
use crate::source::SequenceSource;
use crate::word::Word;

pub use scan::{
    check_injectivity, next_position, visited_below, AdaptiveRule, Affine, BlockShuffle, EnumeratedHint, Identity,
    JumpOnOne, Listed, NoHint, Revisit, ScanError, ScanMap, ScanMapRef, ScanRule, SwapPairs, VisitedSet,
};

#[derive(Debug, Clone)]
pub struct Strategy {
    pub d: MartingaleRef,
    pub rule: ScanRule,
}

impl Strategy {
    pub fn new(d: MartingaleRef, rule: ScanRule) -> Self {
        Strategy { d, rule }
    }

    pub fn monotonic(d: MartingaleRef) -> Self {
        Strategy { d, rule: ScanRule::Monotonic }
    }

    pub fn describe(&self) -> String {
        format!("({}, {})", self.d.describe(), self.rule.describe())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    /// `max_moves` moves were played.
    Completed,
    /// A finite run requested a position outside the word.
    PositionOutsideWord,
    BudgetExhausted {
        at_move: usize,
    },
    RepeatedPosition {
        at_move: usize,
        position: usize,
    },
}

impl Halt {
    pub fn label(&self) -> &'static str {
        match self {
            Halt::Completed => "completed",
            Halt::PositionOutsideWord => "outside",
            Halt::BudgetExhausted { .. } => "budget",
            Halt::RepeatedPosition { .. } => "repeated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub positions: Vec<usize>,
    pub history: Word,
    /// `capitals[k] = d(history↾k)`; one more entry than moves, unless the
    /// martingale itself ran out of budget part way.
    pub capitals: Vec<Capital>,
    pub halt: Halt,
}

impl RunTrace {
    pub fn moves(&self) -> usize {
        self.positions.len()
    }

    pub fn final_capital(&self) -> Option<&Capital> {
        self.capitals.last()
    }
}

/// `b̂(w)`: play until the first requested position lies outside `w`.
pub fn run_on_word(b: &Strategy, w: &Word, budget: &mut Budget) -> Result<(Capital, RunTrace), EvalError> {
    if b.rule.is_adaptive() {
        return Err(EvalError::UnsupportedRule);
    }
    let mut positions = Vec::new();
    let mut history = Word::empty();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    loop {
        let k = positions.len();
        budget.tick(1)?;
        let p = b.rule.position(k).unwrap();
        if p >= w.len() {
            break;
        }
        if let Some(&first) = seen.get(&p) {
            return Err(EvalError::NotInjective(first, k));
        }
        seen.insert(p, k);
        positions.push(p);
        history.push(w.bit(p).unwrap());
    }
    let capitals = b.d.eval_chain(&history, budget)?;
    let value = capitals.last().unwrap().clone();
    Ok((value, RunTrace { positions, history, capitals, halt: Halt::PositionOutsideWord }))
}

/// Play up to `max_moves` moves against `s`. Budget exhaustion and repeated
/// positions end the trace early and are recorded in `halt`.
pub fn run_on_sequence(b: &Strategy, s: &SequenceSource, max_moves: usize, budget: &mut Budget) -> RunTrace {
    let mut positions = Vec::new();
    let mut history = Word::empty();
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut halt = Halt::Completed;
    for k in 0..max_moves {
        let p = match next_position(&b.rule, &history, budget) {
            Ok(p) => p,
            Err(_) => {
                halt = Halt::BudgetExhausted { at_move: k };
                break;
            }
        };
        if seen.contains_key(&p) {
            halt = Halt::RepeatedPosition { at_move: k, position: p };
            break;
        }
        seen.insert(p, k);
        positions.push(p);
        history.push(s.bit(p));
    }
    let snapshot = budget.clone();
    let capitals = match b.d.eval_chain(&history, budget) {
        Ok(c) => c,
        Err(_) => {
            *budget = snapshot;
            let mut out = Vec::new();
            for n in 0..=history.len() {
                match b.d.eval(&history.prefix(n), budget) {
                    Ok(v) => out.push(v),
                    Err(_) => break,
                }
            }
            let moves = out.len().saturating_sub(1);
            halt = Halt::BudgetExhausted { at_move: moves };
            positions.truncate(moves);
            history.truncate(moves);
            out
        }
    };
    RunTrace { positions, history, capitals, halt }
}

/// `b̂` as a capital function on words. Not a martingale in general.
#[derive(Debug, Clone)]
pub struct FiniteRun(pub Strategy);

impl Martingale for FiniteRun {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        Ok(run_on_word(&self.0, w, budget)?.0)
    }

    fn declared_total(&self) -> bool {
        self.0.d.declared_total()
    }

    fn describe(&self) -> String {
        format!("finite_run{}", self.0.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::{check_fairness, value, PartialMartingale, PatternBettor, TableMartingale};
    use crate::word::w;
    use std::sync::Arc;

    fn table_d() -> MartingaleRef {
        Arc::new(TableMartingale::from_pairs(&[
            ("", cap("1")),
            ("0", cap("2")),
            ("1", cap("0")),
            ("00", cap("4")),
            ("01", cap("0")),
            ("10", cap("0")),
            ("11", cap("0")),
        ]))
    }

    fn listed(v: Vec<usize>) -> ScanRule {
        let l = Listed::new(v);
        if l.is_permutation() {
            ScanRule::Permutation(Arc::new(l))
        } else {
            ScanRule::Injection(Arc::new(l))
        }
    }

    #[test]
    fn finite_run_examples() {
        let b = Strategy::new(table_d(), listed(vec![1, 5]));
        let mut budget = Budget::unlimited();
        assert_eq!(run_on_word(&b, &w("0"), &mut budget).unwrap().0, cap("1"));
        assert_eq!(run_on_word(&b, &w("00"), &mut budget).unwrap().0, cap("2"));
        assert_eq!(run_on_word(&b, &w("01"), &mut budget).unwrap().0, cap("0"));
        let (_, trace) = run_on_word(&b, &w("01"), &mut budget).unwrap();
        assert_eq!(trace.positions, vec![1]);
        assert_eq!(trace.halt, Halt::PositionOutsideWord);
    }

    #[test]
    fn monotonic_run_is_direct_evaluation() {
        let d: MartingaleRef = Arc::new(PatternBettor::new(w("011")));
        let b = Strategy::monotonic(d.clone());
        for n in 0..8 {
            for word in Word::all_of_length(n) {
                let (v, _) = run_on_word(&b, &word, &mut Budget::unlimited()).unwrap();
                assert_eq!(v, value(d.as_ref(), &word).unwrap());
            }
        }
    }

    #[test]
    fn out_of_order_run_is_not_fair() {
        let b = Strategy::new(table_d(), listed(vec![1, 0]));
        let r = check_fairness(&FiniteRun(b), 2, 1000);
        assert!(r.violation_words().contains(&w("0")));
    }

    #[test]
    fn adaptive_finite_run_unsupported() {
        let b = Strategy::new(table_d(), ScanRule::Adaptive(Arc::new(JumpOnOne)));
        assert_eq!(run_on_word(&b, &w("00"), &mut Budget::unlimited()).unwrap_err(), EvalError::UnsupportedRule);
    }

    #[test]
    fn sequence_run_examples() {
        let doubler: MartingaleRef = Arc::new(PatternBettor::doubler(false));
        let b = Strategy::monotonic(doubler.clone());
        let t = run_on_sequence(&b, &SequenceSource::all_zeros(), 5, &mut Budget::unlimited());
        let expect: Vec<Capital> = [1u64, 2, 4, 8, 16, 32].iter().map(|&v| Capital::from_integer(v)).collect();
        assert_eq!(t.capitals, expect);
        assert_eq!(t.halt, Halt::Completed);

        let t = run_on_sequence(&b, &SequenceSource::all_ones(), 3, &mut Budget::unlimited());
        assert_eq!(t.capitals, vec![cap("1"), cap("0"), cap("0"), cap("0")]);

        let even = Strategy::new(doubler, ScanRule::Injection(Arc::new(Affine::new(2, 0))));
        let t = run_on_sequence(&even, &SequenceSource::alternating(), 4, &mut Budget::unlimited());
        assert_eq!(t.positions, vec![0, 2, 4, 6]);
        assert_eq!(t.capitals.last().unwrap(), &cap("16"));
    }

    #[test]
    fn repeated_position_halts() {
        let b =
            Strategy::new(Arc::new(PatternBettor::doubler(false)), ScanRule::Adaptive(Arc::new(Revisit { after: 2 })));
        let t = run_on_sequence(&b, &SequenceSource::all_zeros(), 10, &mut Budget::unlimited());
        assert_eq!(t.halt, Halt::RepeatedPosition { at_move: 2, position: 0 });
        assert_eq!(t.positions, vec![0, 1]);
        assert_eq!(t.capitals.len(), 3);
    }

    #[test]
    fn martingale_divergence_truncates_trace() {
        let d: MartingaleRef = Arc::new(PartialMartingale::to_depth(Arc::new(PatternBettor::doubler(false)), 2));
        let b = Strategy::monotonic(d);
        let t = run_on_sequence(&b, &SequenceSource::all_zeros(), 5, &mut Budget::new(1000));
        assert_eq!(t.halt, Halt::BudgetExhausted { at_move: 2 });
        assert_eq!(t.capitals, vec![cap("1"), cap("2"), cap("4")]);
        assert_eq!(t.positions.len(), 2);
    }
}
