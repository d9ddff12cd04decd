//! The staged greedy construction and its replay.
//!
//! The adversary is `D = Σ αᵢ·dᵢ` over the inserted entries. Between
//! insertions the prefix grows one bit at a time toward a child on which
//! `D` does not increase, so `D(u) < 2` holds along the whole prefix.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use super::certificate::{Certificate, EntryRecord, Outcome, ReplayBudgets, Variant};
use super::class::DiagonalClass;
use super::roster::{builtin_entry, EntryKind, RosterEntry, UnknownRosterId};
use super::schedule::Schedule;
use crate::budget::Budget;
use crate::capital::Capital;
use crate::martingale::{EvalError, Martingale, MartingaleRef};
use crate::strategy::{check_injectivity, run_on_word, EnumeratedHint, ScanRule, Strategy};
use crate::transforms::{monotonize, totalize_strategy_lazy};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionBudgets {
    /// Steps per evaluation of one term on one word.
    pub eval: u64,
    /// Ticks per totalization race.
    pub race: u64,
    /// Steps per probing run of a strategy.
    pub probe: u64,
    /// Extra length explored by the divergence probe.
    pub probe_depth: usize,
    /// Nodes visited by one divergence probe.
    pub probe_nodes: usize,
    /// Moves enumerated when looking for the last move below the target.
    pub enumeration: u64,
}

impl Default for ConstructionBudgets {
    fn default() -> Self {
        let r = ReplayBudgets::default();
        ConstructionBudgets {
            eval: r.eval,
            race: r.race,
            probe: 20_000,
            probe_depth: 16,
            probe_nodes: 4096,
            enumeration: 1 << 16,
        }
    }
}

impl ConstructionBudgets {
    pub fn replay(&self) -> ReplayBudgets {
        ReplayBudgets { eval: self.eval, race: self.race }
    }

    fn from_replay(r: ReplayBudgets) -> Self {
        ConstructionBudgets { eval: r.eval, race: r.race, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("both children raise the adversary at length {at}")]
    FairnessViolation { at: usize },
    #[error(transparent)]
    UnknownRosterId(#[from] UnknownRosterId),
    #[error("entry {id} failed at length {at}, which the certificate does not record")]
    UnexpectedDivergence { id: u32, at: usize },
    #[error("enumeration pair of entry {id} does not match its scan map")]
    PairMismatch { id: u32 },
    #[error("adversary evaluation failed at length {at}")]
    AdversaryUndefined { at: usize },
}

/// An inserted entry, as seen by the adversary.
#[derive(Debug, Clone)]
pub struct Term {
    pub id: u32,
    pub alpha: Capital,
    pub effective: MartingaleRef,
    pub inserted_at: usize,
    /// Length from which the term contributes nothing.
    pub removed_at: Option<usize>,
    current: Capital,
    record: usize,
}

impl Term {
    pub fn is_live(&self) -> bool {
        self.removed_at.is_none()
    }

    /// Whether the term counts toward `D(u)` for words of length `n`.
    pub fn counts_at(&self, n: usize) -> bool {
        self.removed_at.is_none_or(|r| n < r)
    }
}

/// Which bit `greedy_step` picks given `D(w)`, `D(w0)`, `D(w1)` and the
/// last bit of `w`. When both children qualify the previous bit repeats.
pub fn choose_bit(dw: &Capital, d0: &Capital, d1: &Capital, prev: bool) -> Option<bool> {
    match (d0 <= dw, d1 <= dw) {
        (true, true) => Some(prev),
        (true, false) => Some(false),
        (false, true) => Some(true),
        (false, false) => None,
    }
}

/// The next bit against a single adversary.
pub fn greedy_step(d: &dyn Martingale, w: &Word, budget: &mut Budget) -> Result<bool, DiagonalError> {
    let undefined = |_| DiagonalError::AdversaryUndefined { at: w.len() };
    let dw = d.eval(w, budget).map_err(undefined)?;
    let d0 = d.eval(&w.child(false), budget).map_err(undefined)?;
    let d1 = d.eval(&w.child(true), budget).map_err(undefined)?;
    let prev = w.len().checked_sub(1).and_then(|i| w.bit(i)).unwrap_or(false);
    choose_bit(&dw, &d0, &d1, prev).ok_or(DiagonalError::FairnessViolation { at: w.len() })
}

fn admits(variant: Variant, entry: &RosterEntry) -> bool {
    match variant {
        Variant::Tmr => entry.kind == EntryKind::TotalMartingale,
        Variant::Tir => entry.kind.is_total() && !entry.strategy.rule.is_adaptive(),
        Variant::Pmr => matches!(entry.kind, EntryKind::TotalMartingale | EntryKind::PartialMartingale),
        Variant::Ppr => true,
    }
}

#[derive(Debug, Clone)]
pub struct DiagonalState {
    variant: Variant,
    budgets: ConstructionBudgets,
    target: usize,
    replaying: bool,
    prefix: Word,
    dchain: Vec<Capital>,
    terms: Vec<Term>,
    records: Vec<EntryRecord>,
}

impl DiagonalState {
    pub fn new(variant: Variant, budgets: ConstructionBudgets, target: usize) -> Self {
        DiagonalState {
            variant,
            budgets,
            target,
            replaying: false,
            prefix: Word::empty(),
            dchain: vec![Capital::zero()],
            terms: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    /// `D` at each prefix, as computed when the prefix was reached and
    /// raised by later insertions.
    pub fn adversary_chain(&self) -> &[Capital] {
        &self.dchain
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn records(&self) -> &[EntryRecord] {
        &self.records
    }

    /// `(αᵢ, dᵢ)` for the terms still in play.
    pub fn live_terms(&self) -> Vec<(Capital, MartingaleRef)> {
        self.terms.iter().filter(|t| t.is_live()).map(|t| (t.alpha.clone(), t.effective.clone())).collect()
    }

    fn eval(&self, m: &dyn Martingale, u: &Word) -> Result<Capital, EvalError> {
        m.eval(u, &mut Budget::new(self.budgets.eval))
    }

    /// `D(u)` over the live terms; `None` if any of them fails.
    pub fn adversary(&self, u: &Word) -> Option<Capital> {
        let mut total = Capital::zero();
        for t in self.terms.iter().filter(|t| t.is_live()) {
            total += &(&t.alpha * &self.eval(t.effective.as_ref(), u).ok()?);
        }
        Some(total)
    }

    fn remove(&mut self, i: usize, at: usize) -> Result<(), DiagonalError> {
        let t = &mut self.terms[i];
        let rec = &mut self.records[t.record];
        if self.replaying {
            if rec.outcome != (Outcome::Diverged { at }) {
                return Err(DiagonalError::UnexpectedDivergence { id: t.id, at });
            }
        } else {
            rec.outcome = Outcome::Diverged { at };
        }
        t.removed_at = Some(at);
        Ok(())
    }

    fn scheduled_removal(&self, i: usize, at: usize) -> bool {
        self.replaying && self.records[self.terms[i].record].outcome == (Outcome::Diverged { at })
    }

    /// Append `bits`, evaluating the live terms on each new prefix.
    fn append(&mut self, bits: &Word) -> Result<(), DiagonalError> {
        for b in bits.iter() {
            let u = self.prefix.child(b);
            let at = u.len();
            let mut total = Capital::zero();
            for i in 0..self.terms.len() {
                if !self.terms[i].is_live() {
                    continue;
                }
                if self.scheduled_removal(i, at) {
                    self.remove(i, at)?;
                    continue;
                }
                match self.eval(self.terms[i].effective.as_ref(), &u) {
                    Ok(v) => {
                        total += &(&self.terms[i].alpha * &v);
                        self.terms[i].current = v;
                    }
                    Err(_) => self.remove(i, at)?,
                }
            }
            self.prefix = u;
            self.dchain.push(total);
        }
        Ok(())
    }

    /// One greedy bit. Terms failing on either child are removed first.
    pub fn step(&mut self) -> Result<bool, DiagonalError> {
        let n = self.len();
        let (w0, w1) = (self.prefix.child(false), self.prefix.child(true));
        let mut values = Vec::new();
        for i in 0..self.terms.len() {
            if !self.terms[i].is_live() {
                continue;
            }
            if self.scheduled_removal(i, n + 1) {
                self.remove(i, n + 1)?;
                continue;
            }
            let m = self.terms[i].effective.clone();
            match (self.eval(m.as_ref(), &w0), self.eval(m.as_ref(), &w1)) {
                (Ok(a), Ok(b)) => values.push((i, a, b)),
                _ => self.remove(i, n + 1)?,
            }
        }
        let (mut dw, mut d0, mut d1) = (Capital::zero(), Capital::zero(), Capital::zero());
        for (i, a, b) in &values {
            let t = &self.terms[*i];
            dw += &(&t.alpha * &t.current);
            d0 += &(&t.alpha * a);
            d1 += &(&t.alpha * b);
        }
        let prev = n.checked_sub(1).and_then(|i| self.prefix.bit(i)).unwrap_or(false);
        let bit = choose_bit(&dw, &d0, &d1, prev).ok_or(DiagonalError::FairnessViolation { at: n })?;
        for (i, a, b) in values {
            self.terms[i].current = if bit { b } else { a };
        }
        self.prefix.push(bit);
        self.dchain.push(if bit { d1 } else { d0 });
        Ok(bit)
    }

    pub fn extend_below_bound(&mut self, target_len: usize) -> Result<(), DiagonalError> {
        while self.len() < target_len {
            self.step()?;
        }
        Ok(())
    }

    /// Insert `entry` at the current length and return its record.
    pub fn insert_entry(&mut self, entry: &RosterEntry) -> Result<EntryRecord, DiagonalError> {
        self.insert(entry, None)
    }

    fn insert(&mut self, entry: &RosterEntry, guide: Option<&EntryRecord>) -> Result<EntryRecord, DiagonalError> {
        let index = self.records.len();
        let mut record = EntryRecord { id: entry.id, outcome: Outcome::Active, pair: None };
        let len = self.len();
        if let Some(g) = guide {
            record.outcome = g.outcome.clone();
            record.pair = g.pair;
            match &g.outcome {
                Outcome::Excluded => {
                    self.records.push(record.clone());
                    return Ok(record);
                }
                Outcome::Diverged { at } if *at <= len => {
                    self.records.push(record.clone());
                    return Ok(record);
                }
                Outcome::Adopted { extension } => {
                    self.records.push(record.clone());
                    self.append(extension)?;
                    return Ok(record);
                }
                _ => {}
            }
        }
        self.records.push(record);
        let effective = match self.resolve(entry, index)? {
            Some(m) => m,
            None => return Ok(self.records[index].clone()),
        };
        let mut chain = Vec::with_capacity(len + 1);
        for j in 0..=len {
            match self.eval(effective.as_ref(), &self.prefix.prefix(j)) {
                Ok(v) => chain.push(v),
                Err(_) => {
                    if self.replaying {
                        if self.records[index].outcome != (Outcome::Diverged { at: j }) {
                            return Err(DiagonalError::UnexpectedDivergence { id: entry.id, at: j });
                        }
                    } else {
                        self.records[index].outcome = Outcome::Diverged { at: j };
                    }
                    return Ok(self.records[index].clone());
                }
            }
        }
        let two = Capital::from_integer(2);
        let alpha = self
            .dchain
            .iter()
            .zip(&chain)
            .map(|(d, e)| {
                let room = two.checked_sub(d).expect("adversary stays below 2");
                room.div(&(e.max(&Capital::one()) * &two))
            })
            .min()
            .expect("chain is never empty");
        for (d, e) in self.dchain.iter_mut().zip(&chain) {
            *d += &(&alpha * e);
        }
        self.terms.push(Term {
            id: entry.id,
            alpha,
            effective,
            inserted_at: len,
            removed_at: None,
            current: chain.pop().unwrap(),
            record: index,
        });
        Ok(self.records[index].clone())
    }

    fn exclude(&mut self, index: usize) -> Option<MartingaleRef> {
        self.records[index].outcome = Outcome::Excluded;
        None
    }

    /// The total martingale standing in for the entry, or `None` when the
    /// entry is settled without one (excluded, or adopted by the probe).
    fn resolve(&mut self, entry: &RosterEntry, index: usize) -> Result<Option<MartingaleRef>, DiagonalError> {
        if !self.replaying && !admits(self.variant, entry) {
            return Ok(self.exclude(index));
        }
        let b = &entry.strategy;
        match self.variant {
            Variant::Tmr | Variant::Pmr => Ok(Some(b.d.clone())),
            Variant::Tir => {
                if matches!(b.rule, ScanRule::Monotonic) {
                    return Ok(Some(b.d.clone()));
                }
                let b = if entry.is_hintless_injection() { self.hinted(entry, index)? } else { b.clone() };
                Ok(match monotonize(&b) {
                    Some(m) => Some(Arc::new(m)),
                    None => self.exclude(index),
                })
            }
            Variant::Ppr => {
                if !self.replaying {
                    let valid = matches!(b.rule, ScanRule::Monotonic | ScanRule::Permutation(_))
                        && check_injectivity(&b.rule, self.target, None, &mut Budget::new(self.budgets.enumeration))
                            .is_ok();
                    if !valid {
                        return Ok(self.exclude(index));
                    }
                    if let Some(found) = divergence_probe(b, self, self.budgets.probe_depth, self.budgets.probe) {
                        let mut extension = found.suffix_from(self.len());
                        extension.truncate(self.target.saturating_sub(self.len()));
                        self.records[index].outcome = Outcome::Adopted { extension: extension.clone() };
                        self.append(&extension)?;
                        return Ok(None);
                    }
                }
                let class = DiagonalClass::new(self.prefix.clone(), self.live_terms(), self.budgets.eval);
                let totalized = match totalize_strategy_lazy(b, Arc::new(class), self.budgets.race) {
                    Ok(s) => s,
                    Err(_) => return Ok(self.exclude(index)),
                };
                Ok(match monotonize(&totalized) {
                    Some(m) => Some(Arc::new(m)),
                    None => self.exclude(index),
                })
            }
        }
    }

    /// Give a hintless injection the enumeration of its moves visiting
    /// positions up to the target, determined by the last such move.
    fn hinted(&mut self, entry: &RosterEntry, index: usize) -> Result<Strategy, DiagonalError> {
        let map = entry.strategy.rule.map().expect("injection has a map").clone();
        let limit = self.target + 1;
        let pair = if self.replaying {
            let pair = self.records[index].pair;
            if let Some((i, l)) = pair {
                if map.position(l) != i {
                    return Err(DiagonalError::PairMismatch { id: entry.id });
                }
            }
            pair
        } else {
            let mut seen = 0usize;
            let mut last = None;
            for k in 0..self.budgets.enumeration as usize {
                let p = map.position(k);
                if p < limit {
                    seen += 1;
                    last = Some((p, k));
                    if seen == limit {
                        break;
                    }
                }
            }
            self.records[index].pair = last;
            last
        };
        let mut found = BTreeMap::new();
        if let Some((_, l)) = pair {
            for k in 0..=l {
                let p = map.position(k);
                if p < limit {
                    found.insert(p, k);
                }
            }
        }
        let hint = Arc::new(EnumeratedHint::new(map, found, limit));
        Ok(Strategy::new(entry.strategy.d.clone(), ScanRule::Injection(hint)))
    }
}

/// Length-lexicographic search over extensions of the state's prefix by
/// at most `depth` bits, along which `D < 2`, for a word on which the run
/// of `b` exhausts `budget`. `None` means no divergence was seen.
pub fn divergence_probe(b: &Strategy, state: &DiagonalState, depth: usize, budget: u64) -> Option<Word> {
    let start = state.prefix().clone();
    let limit = start.len() + depth;
    let two = Capital::from_integer(2);
    let mut nodes = state.budgets.probe_nodes;
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(u) = queue.pop_front() {
        if nodes == 0 {
            break;
        }
        nodes -= 1;
        if u.len() > start.len() && !state.adversary(&u).is_some_and(|d| d < two) {
            continue;
        }
        if let Err(EvalError::OutOfBudget) = run_on_word(b, &u, &mut Budget::new(budget)) {
            return Some(u);
        }
        if u.len() < limit {
            queue.push_back(u.child(false));
            queue.push_back(u.child(true));
        }
    }
    None
}

/// Result of a forward construction.
#[derive(Debug, Clone)]
pub struct Construction {
    pub prefix: Word,
    pub certificate: Certificate,
    pub state: DiagonalState,
}

pub fn run_construction(
    roster: &[RosterEntry],
    schedule: &Schedule,
    variant: Variant,
    budgets: ConstructionBudgets,
    target: usize,
) -> Result<Construction, DiagonalError> {
    let mut state = DiagonalState::new(variant, budgets, target);
    let mut k = 0;
    loop {
        while k < roster.len() && schedule.ready(k, state.len()) {
            state.insert_entry(&roster[k])?;
            k += 1;
        }
        if state.len() >= target {
            break;
        }
        state.step()?;
    }
    let mut prefix = state.prefix().clone();
    prefix.truncate(target);
    let certificate = Certificate {
        variant,
        schedule: schedule.clone().canonical(),
        budgets: budgets.replay(),
        entries: state.records().to_vec(),
        target,
    };
    Ok(Construction { prefix, certificate, state })
}

/// `A↾n` from the certificate and the builtin roster alone.
pub fn replay_certificate(cert: &Certificate, n: usize) -> Result<Word, DiagonalError> {
    let mut state = DiagonalState::new(cert.variant, ConstructionBudgets::from_replay(cert.budgets), n);
    state.replaying = true;
    let mut k = 0;
    loop {
        while k < cert.entries.len() && cert.schedule.ready(k, state.len()) && state.len() < n {
            let rec = &cert.entries[k];
            let entry = builtin_entry(rec.id)?;
            state.insert(&entry, Some(rec))?;
            k += 1;
        }
        if state.len() >= n {
            break;
        }
        state.step()?;
    }
    let mut prefix = state.prefix;
    prefix.truncate(n);
    Ok(prefix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::{value, ConstantMartingale, PartialMartingale, PatternBettor};
    use crate::word::w;

    fn entry(id: u32) -> RosterEntry {
        builtin_entry(id).unwrap()
    }

    fn custom(kind: EntryKind, d: MartingaleRef) -> RosterEntry {
        RosterEntry { id: 0, kind, strategy: Strategy::monotonic(d) }
    }

    #[test]
    fn choose_bit_examples() {
        assert_eq!(choose_bit(&cap("1"), &cap("4/5"), &cap("6/5"), false), Some(false));
        assert_eq!(choose_bit(&cap("1"), &cap("6/5"), &cap("4/5"), false), Some(true));
        assert_eq!(choose_bit(&cap("1"), &cap("1"), &cap("1"), false), Some(false));
        assert_eq!(choose_bit(&cap("1"), &cap("1"), &cap("1"), true), Some(true));
        assert_eq!(choose_bit(&cap("1"), &cap("3/2"), &cap("3/2"), false), None);
    }

    #[test]
    fn greedy_step_examples() {
        let doubler = PatternBettor::doubler(false);
        let mut word = Word::empty();
        for _ in 0..6 {
            let b = greedy_step(&doubler, &word, &mut Budget::unlimited()).unwrap();
            word.push(b);
        }
        assert_eq!(word, w("111111"));
        let constant = ConstantMartingale(cap("1"));
        assert!(!greedy_step(&constant, &Word::empty(), &mut Budget::unlimited()).unwrap());
    }

    #[test]
    fn extend_examples() {
        let mut s = DiagonalState::new(Variant::Tmr, ConstructionBudgets::default(), 8);
        s.extend_below_bound(8).unwrap();
        assert_eq!(s.prefix(), &w("00000000"));
        s.extend_below_bound(8).unwrap();
        assert_eq!(s.len(), 8);

        let mut s = DiagonalState::new(Variant::Tmr, ConstructionBudgets::default(), 5);
        s.insert_entry(&entry(1)).unwrap();
        s.extend_below_bound(5).unwrap();
        assert_eq!(s.prefix(), &w("11111"));
    }

    #[test]
    fn constant_entry_alpha() {
        let mut s = DiagonalState::new(Variant::Tmr, ConstructionBudgets::default(), 4);
        s.insert_entry(&custom(EntryKind::TotalMartingale, Arc::new(ConstantMartingale(cap("1"))))).unwrap();
        assert_eq!(s.terms()[0].alpha, cap("1"));
        s.extend_below_bound(4).unwrap();
        assert!(s.adversary_chain().iter().all(|d| *d == cap("1")));
    }

    #[test]
    fn alpha_keeps_every_prefix_below_two() {
        let mut s = DiagonalState::new(Variant::Tmr, ConstructionBudgets::default(), 16);
        s.insert_entry(&custom(EntryKind::TotalMartingale, Arc::new(ConstantMartingale(cap("3/2"))))).unwrap();
        s.extend_below_bound(6).unwrap();
        s.insert_entry(&entry(2)).unwrap();
        s.extend_below_bound(16).unwrap();
        let two = cap("2");
        assert!(s.adversary_chain().iter().all(|d| *d < two));
    }

    #[test]
    fn invalid_scan_rule_is_excluded() {
        let mut s = DiagonalState::new(Variant::Ppr, ConstructionBudgets::default(), 8);
        let rec = s.insert_entry(&entry(26)).unwrap();
        assert_eq!(rec.outcome, Outcome::Excluded);
        assert!(s.is_empty());
        assert!(s.terms().is_empty());
    }

    #[test]
    fn partial_martingale_diverges_past_its_depth() {
        let budgets = ConstructionBudgets { eval: 2000, ..ConstructionBudgets::default() };
        let c =
            run_construction(&[entry(16)], &Schedule::new(vec![0], None).unwrap(), Variant::Pmr, budgets, 10).unwrap();
        assert_eq!(c.certificate.entries[0].outcome, Outcome::Diverged { at: 4 });
        assert_eq!(c.state.terms()[0].removed_at, Some(4));
        // doubler on 0 while alive, then the tie rule repeats
        assert_eq!(c.prefix, w("1111111111"));
        assert_eq!(replay_certificate(&c.certificate, 10).unwrap(), c.prefix);
    }

    #[test]
    fn one_doubler_construction_and_replay() {
        let schedule = Schedule::new(vec![0, 8], None).unwrap();
        let c = run_construction(&[entry(1)], &schedule, Variant::Tmr, ConstructionBudgets::default(), 8).unwrap();
        assert_eq!(c.prefix, w("11111111"));
        assert_eq!(c.certificate.entries.len(), 1);
        assert_eq!(replay_certificate(&c.certificate, 8).unwrap(), w("11111111"));
        assert_eq!(replay_certificate(&c.certificate, 0).unwrap(), Word::empty());
        let d = &c.state.terms()[0];
        for n in 1..=8 {
            assert!(value(d.effective.as_ref(), &c.prefix.prefix(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_roster_and_two_doublers() {
        let schedule = Schedule::new(vec![0, 4], None).unwrap();
        let c = run_construction(&[], &schedule, Variant::Tmr, ConstructionBudgets::default(), 4).unwrap();
        assert_eq!(c.prefix, w("0000"));

        let schedule = Schedule::new(vec![0, 4, 8], None).unwrap();
        let c = run_construction(&[entry(1), entry(2)], &schedule, Variant::Tmr, ConstructionBudgets::default(), 8)
            .unwrap();
        assert_eq!(c.prefix.prefix(4), w("1111"));
        let two = cap("2");
        assert!(c.state.adversary_chain().iter().all(|d| *d < two));
        assert_eq!(replay_certificate(&c.certificate, 8).unwrap(), c.prefix);
    }

    #[test]
    fn probe_examples() {
        let mut s = DiagonalState::new(Variant::Ppr, ConstructionBudgets::default(), 16);
        s.insert_entry(&custom(EntryKind::TotalMartingale, Arc::new(ConstantMartingale(cap("1"))))).ok();
        let total = Strategy::monotonic(Arc::new(PatternBettor::doubler(false)));
        assert_eq!(divergence_probe(&total, &s, 6, 10_000), None);
        let partial = Strategy::monotonic(Arc::new(PartialMartingale::beyond(
            Arc::new(PatternBettor::doubler(false)),
            vec![w("1")],
        )));
        assert_eq!(divergence_probe(&partial, &s, 6, 10_000), Some(w("10")));
        assert_eq!(divergence_probe(&partial, &s, 0, 10_000), None);
    }

    #[test]
    fn adopted_extension_is_replayed() {
        let schedule = Schedule::new(vec![0, 3], None).unwrap();
        let c = run_construction(&[entry(1), entry(25)], &schedule, Variant::Ppr, ConstructionBudgets::default(), 12)
            .unwrap();
        assert!(matches!(c.certificate.entries[1].outcome, Outcome::Adopted { .. }));
        for n in 0..=12 {
            assert_eq!(replay_certificate(&c.certificate, n).unwrap(), c.prefix.prefix(n));
        }
    }
}
