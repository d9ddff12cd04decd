//! Totalization of a partial martingale against an effectively closed class.
//!
//! `d'` is built top-down. At an active word `w` two events race, one tick
//! at a time: (a) the computations of `d(w0)` and `d(w1)` both finish, or
//! (b) `[w]` is covered by the enumeration of the complement `U`. A tick
//! runs one step of each child computation and then one enumeration stage,
//! so (a) happens at tick `max(c₀, c₁)` for step costs `cᵢ`, (b) at tick
//! `s + 1` for the covering stage `s`, and (a) wins ties. On (a) the
//! children copy `d`; on (b) they become inactive and keep `d'(w)` forever.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use crate::budget::Budget;
use crate::capital::Capital;
use crate::martingale::{EvalError, Martingale, MartingaleRef};
use crate::strategy::{ScanRule, Strategy};
use crate::word::Word;

use super::class::{ClassRef, ConjugatedClass, Pattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaceEvent {
    Defined { tick: u64 },
    Covered { tick: u64 },
}

#[derive(Debug, Clone)]
struct Node {
    value: Capital,
    inactive: bool,
    children: Option<[usize; 2]>,
}

#[derive(Debug)]
pub struct TotalizedMartingale {
    d: MartingaleRef,
    class: ClassRef,
    race_budget: u64,
    // trie of resolved words; index 0 is ε once created
    trie: Mutex<Vec<Node>>,
    covered_parents: Mutex<BTreeSet<Word>>,
}

/// Words strictly below a covered parent; closed under extension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InactiveMarking {
    covered_parents: BTreeSet<Word>,
}

impl InactiveMarking {
    pub fn is_inactive(&self, w: &Word) -> bool {
        (0..w.len()).any(|n| self.covered_parents.contains(&w.prefix(n)))
    }

    /// Words whose children were marked inactive by event (b).
    pub fn covered_parents(&self) -> impl Iterator<Item = &Word> {
        self.covered_parents.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.covered_parents.is_empty()
    }
}

fn steps_to_eval(d: &dyn Martingale, w: &Word, limit: u64) -> Option<(u64, Capital)> {
    let mut b = Budget::new(limit);
    let v = d.eval(w, &mut b).ok()?;
    Some((limit - b.remaining(), v))
}

impl TotalizedMartingale {
    /// A lazily evaluated `d'`; each race runs for at most `race_budget` ticks.
    pub fn new(d: MartingaleRef, class: ClassRef, race_budget: u64) -> Self {
        TotalizedMartingale {
            d,
            class,
            race_budget,
            trie: Mutex::new(Vec::new()),
            covered_parents: Mutex::new(BTreeSet::new()),
        }
    }

    /// Race at `w` (assumed active).
    pub fn race(&self, w: &Word) -> Result<RaceEvent, EvalError> {
        let c0 = steps_to_eval(self.d.as_ref(), &w.child(false), self.race_budget);
        let c1 = steps_to_eval(self.d.as_ref(), &w.child(true), self.race_budget);
        let defined_at = match (&c0, &c1) {
            (Some((a, _)), Some((b, _))) => Some((*a).max(*b).max(1)),
            _ => None,
        };
        // (b) must strictly precede (a) to win.
        let last_useful = defined_at.map_or(self.race_budget, |t| t - 1);
        let covered_at = if last_useful == 0 {
            None
        } else {
            self.class.cover_stage(&Pattern::from_word(w), (last_useful - 1) as usize).map(|s| s as u64 + 1)
        };
        match (defined_at, covered_at) {
            (_, Some(t)) => Ok(RaceEvent::Covered { tick: t }),
            (Some(t), None) => Ok(RaceEvent::Defined { tick: t }),
            (None, None) => Err(EvalError::RaceTimeout(w.clone())),
        }
    }

    fn resolve_children(&self, parent: &Word, node: &Node) -> Result<[Node; 2], EvalError> {
        let leaf = |value: Capital, inactive: bool| Node { value, inactive, children: None };
        if node.inactive {
            return Ok([leaf(node.value.clone(), true), leaf(node.value.clone(), true)]);
        }
        Ok(match self.race(parent)? {
            RaceEvent::Covered { .. } => {
                self.covered_parents.lock().unwrap().insert(parent.clone());
                [leaf(node.value.clone(), true), leaf(node.value.clone(), true)]
            }
            RaceEvent::Defined { .. } => {
                let v0 = self.d.eval(&parent.child(false), &mut Budget::new(self.race_budget))?;
                let v1 = self.d.eval(&parent.child(true), &mut Budget::new(self.race_budget))?;
                [leaf(v0, false), leaf(v1, false)]
            }
        })
    }

    /// Resolved nodes along `w`, shortest prefix first.
    fn path(&self, w: &Word) -> Result<Vec<(Capital, bool)>, EvalError> {
        let mut out = Vec::with_capacity(w.len() + 1);
        if self.trie.lock().unwrap().is_empty() {
            let (_, v) = steps_to_eval(self.d.as_ref(), &Word::empty(), self.race_budget)
                .ok_or(EvalError::RaceTimeout(Word::empty()))?;
            let mut trie = self.trie.lock().unwrap();
            if trie.is_empty() {
                trie.push(Node { value: v, inactive: false, children: None });
            }
        }
        let mut idx = 0;
        for n in 0..=w.len() {
            let node = self.trie.lock().unwrap()[idx].clone();
            out.push((node.value.clone(), node.inactive));
            if n == w.len() {
                break;
            }
            let bit = usize::from(w.bit(n).unwrap());
            let children = match node.children {
                Some(c) => c,
                None => {
                    // Resolution is a pure function of the parent, so a
                    // concurrent duplicate computes the same nodes.
                    let new = self.resolve_children(&w.prefix(n), &node)?;
                    let mut trie = self.trie.lock().unwrap();
                    match trie[idx].children {
                        Some(c) => c,
                        None => {
                            let base = trie.len();
                            trie.extend(new);
                            trie[idx].children = Some([base, base + 1]);
                            [base, base + 1]
                        }
                    }
                }
            };
            idx = children[bit];
        }
        Ok(out)
    }

    pub fn is_inactive(&self, w: &Word) -> Result<bool, EvalError> {
        Ok(self.path(w)?.pop().unwrap().1)
    }

    /// The covered parents found so far by lazy evaluation.
    pub fn marking(&self) -> InactiveMarking {
        InactiveMarking { covered_parents: self.covered_parents.lock().unwrap().clone() }
    }
}

impl Martingale for TotalizedMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        budget.tick(w.len() as u64 + 1)?;
        Ok(self.path(w)?.pop().unwrap().0)
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        budget.tick(w.len() as u64 + 1)?;
        Ok(self.path(w)?.into_iter().map(|(v, _)| v).collect())
    }

    fn describe(&self) -> String {
        format!("totalized({}, {})", self.d.describe(), self.class.describe())
    }
}

/// Build `d'` on every word of length `≤ depth`, failing with the first
/// `RaceTimeout` in length-lexicographic order.
pub fn totalize_martingale(
    d: MartingaleRef,
    class: ClassRef,
    depth: usize,
    race_budget: u64,
) -> Result<(Arc<TotalizedMartingale>, InactiveMarking), EvalError> {
    let t = Arc::new(TotalizedMartingale::new(d, class, race_budget));
    for w in Word::all_of_length(depth) {
        t.path(&w)?;
    }
    let marking = t.marking();
    Ok((t, marking))
}

/// Totalize the history martingale of `b` against the image of `class`
/// under the map the scan rule induces on sequences.
pub fn totalize_strategy_lazy(b: &Strategy, class: ClassRef, race_budget: u64) -> Result<Strategy, EvalError> {
    let image: ClassRef = match &b.rule {
        ScanRule::Monotonic => class,
        ScanRule::Permutation(pi) => Arc::new(ConjugatedClass::new(pi.clone(), class)),
        _ => return Err(EvalError::UnsupportedRule),
    };
    let t = TotalizedMartingale::new(b.d.clone(), image, race_budget);
    Ok(Strategy::new(Arc::new(t), b.rule.clone()))
}

pub fn totalize_strategy(
    b: &Strategy,
    class: ClassRef,
    depth: usize,
    race_budget: u64,
) -> Result<(Strategy, InactiveMarking), EvalError> {
    let image: ClassRef = match &b.rule {
        ScanRule::Monotonic => class,
        ScanRule::Permutation(pi) => Arc::new(ConjugatedClass::new(pi.clone(), class)),
        _ => return Err(EvalError::UnsupportedRule),
    };
    let (t, marking) = totalize_martingale(b.d.clone(), image, depth, race_budget)?;
    Ok((Strategy::new(t, b.rule.clone()), marking))
}
