//! `C = [w] ∩ {X : D(X↾n) < 2 for all n}` for a prefix `w` and adversary
//! `D`, as an effectively closed class. Stage 0 enumerates the cylinders
//! incompatible with `w`; stage `t` adds every `[u]` with `|u| ≤ t` and
//! `D(u) ≥ 2`.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::budget::Budget;
use crate::capital::Capital;
use crate::martingale::MartingaleRef;
use crate::transforms::{ClosedClass, Pattern};
use crate::word::Word;

/// Search nodes one cover query may visit before giving up; a query that
/// gives up reports "not covered at this stage".
pub const COVER_SEARCH_NODES: usize = 2048;

#[derive(Debug)]
pub struct DiagonalClass {
    prefix: Word,
    terms: Vec<(Capital, MartingaleRef)>,
    eval_budget: u64,
    values: Mutex<HashMap<Word, Option<Capital>>>,
    witness: Mutex<Word>,
}

enum Search {
    Found(Word),
    Exhausted,
    GaveUp,
}

impl DiagonalClass {
    /// `D(u) < 2` must hold on every prefix `u` of `prefix`; it is not
    /// re-evaluated there.
    pub fn new(prefix: Word, terms: Vec<(Capital, MartingaleRef)>, eval_budget: u64) -> Self {
        DiagonalClass {
            witness: Mutex::new(prefix.clone()),
            prefix,
            terms,
            eval_budget,
            values: Mutex::new(HashMap::new()),
        }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    /// `D(u)`, or `None` when some term fails to evaluate.
    pub fn adversary(&self, u: &Word) -> Option<Capital> {
        if let Some(v) = self.values.lock().unwrap().get(u) {
            return v.clone();
        }
        let mut total = Capital::zero();
        let mut ok = true;
        for (alpha, m) in &self.terms {
            match m.eval(u, &mut Budget::new(self.eval_budget)) {
                Ok(v) => total += &(alpha * &v),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        let v = ok.then_some(total);
        self.values.lock().unwrap().insert(u.clone(), v.clone());
        v
    }

    fn enumerated_at(&self, u: &Word, stage: usize) -> bool {
        u.len() <= stage
            && u.len() > self.prefix.len()
            && self.adversary(u).is_some_and(|v| v >= Capital::from_integer(2))
    }

    /// Depth-first search for a word of length `depth` extending `from`,
    /// consistent with `p` and avoiding every cylinder enumerated by
    /// `stage`. Children are tried forced bit first, then the one with
    /// the smaller adversary value.
    fn search(&self, from: &Word, p: &Pattern, depth: usize, stage: usize, nodes: &mut usize) -> Search {
        if *nodes == 0 {
            return Search::GaveUp;
        }
        *nodes -= 1;
        if self.enumerated_at(from, stage) {
            return Search::Exhausted;
        }
        if from.len() >= depth {
            return Search::Found(from.clone());
        }
        let children: Vec<bool> = match p.get(from.len()) {
            Some(b) => vec![b],
            None => {
                let v0 = self.adversary(&from.child(false));
                let v1 = self.adversary(&from.child(true));
                match (v0, v1) {
                    (Some(a), Some(b)) if b < a => vec![true, false],
                    _ => vec![false, true],
                }
            }
        };
        let mut gave_up = false;
        for b in children {
            match self.search(&from.child(b), p, depth, stage, nodes) {
                Search::Found(w) => return Search::Found(w),
                Search::GaveUp => gave_up = true,
                Search::Exhausted => {}
            }
            if *nodes == 0 {
                return Search::GaveUp;
            }
        }
        if gave_up {
            Search::GaveUp
        } else {
            Search::Exhausted
        }
    }
}

impl ClosedClass for DiagonalClass {
    fn covers(&self, p: &Pattern, stage: usize) -> bool {
        if p.iter().any(|(i, b)| self.prefix.bit(i).is_some_and(|x| x != b)) {
            return true;
        }
        let depth = stage.max(self.prefix.len());
        if depth == self.prefix.len() {
            return false;
        }
        // Fast path: reuse the last witness up to its first conflict with p.
        let witness = self.witness.lock().unwrap().clone();
        let agree = (self.prefix.len()..witness.len())
            .find(|&i| p.get(i).is_some_and(|b| witness.bit(i) != Some(b)))
            .unwrap_or(witness.len());
        let valid_to = (self.prefix.len() + 1..=agree.min(depth))
            .find(|&n| self.enumerated_at(&witness.prefix(n), stage))
            .map_or(agree.min(depth), |n| n - 1);
        if valid_to >= depth {
            return false;
        }
        let mut nodes = COVER_SEARCH_NODES;
        let start = witness.prefix(valid_to);
        if let Search::Found(w) = self.search(&start, p, depth, stage, &mut nodes) {
            *self.witness.lock().unwrap() = w;
            return false;
        }
        let mut nodes = COVER_SEARCH_NODES;
        match self.search(&self.prefix, p, depth, stage, &mut nodes) {
            Search::Found(w) => {
                *self.witness.lock().unwrap() = w;
                false
            }
            Search::GaveUp => false,
            Search::Exhausted => true,
        }
    }

    fn describe(&self) -> String {
        format!("diagonal({}, {} terms)", self.prefix, self.terms.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::PatternBettor;
    use crate::word::w;
    use std::sync::Arc;

    fn doubler_class(prefix: &str) -> DiagonalClass {
        DiagonalClass::new(w(prefix), vec![(cap("1"), Arc::new(PatternBettor::doubler(false)))], 10_000)
    }

    #[test]
    fn incompatible_patterns_are_covered_at_stage_zero() {
        let c = doubler_class("1");
        assert!(c.covers(&Pattern::from_word(&w("0")), 0));
        assert!(!c.covers(&Pattern::from_word(&w("1")), 0));
        assert!(!c.covers(&Pattern::from_word(&w("1")), 10));
    }

    #[test]
    fn high_capital_cylinders_appear_with_their_length() {
        // D = doubler on 0, prefix ε: D(0) = 2, so [0] is enumerated at stage 1.
        let c = doubler_class("");
        let p = Pattern::from_word(&w("0"));
        assert!(!c.covers(&p, 0));
        assert!(c.covers(&p, 1));
        assert_eq!(c.cover_stage(&p, 50), Some(1));
        assert_eq!(c.cover_stage(&Pattern::from_word(&w("1")), 50), None);
        // pattern fixing only position 3 to 0: X = 1110… survives
        let sparse = Pattern::default().with(3, false);
        assert!(!c.covers(&sparse, 8));
    }

    #[test]
    fn every_continuation_covered() {
        // Doubler on 1 scaled by 1/2 from prefix "1": D(1) = 1, D(11) = 2,
        // D(10) = 0. Forcing position 1 to 1 is covered at stage 2.
        let c = DiagonalClass::new(w("1"), vec![(cap("1/2"), Arc::new(PatternBettor::doubler(true)))], 10_000);
        let p = Pattern::from_word(&w("11"));
        assert_eq!(c.cover_stage(&p, 20), Some(2));
        assert!(!c.covers(&Pattern::from_word(&w("10")), 20));
    }
}
