use std::collections::BTreeMap;

use super::{EvalError, Martingale, MartingaleRef};
use crate::budget::Budget;
use crate::capital::Capital;
use crate::source::mix64;
use crate::word::Word;

fn charge(w: &Word, budget: &mut Budget) -> Result<(), EvalError> {
    budget.tick(w.len() as u64 + 1)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ConstantMartingale(pub Capital);

impl Martingale for ConstantMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        budget.tick(1)?;
        let _ = w;
        Ok(self.0.clone())
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        charge(w, budget)?;
        Ok(vec![self.0.clone(); w.len() + 1])
    }

    fn describe(&self) -> String {
        format!("const:{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ZeroMartingale;

impl Martingale for ZeroMartingale {
    fn eval(&self, _w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        budget.tick(1)?;
        Ok(Capital::zero())
    }

    fn describe(&self) -> String {
        "const:0".into()
    }
}

/// Bets the whole capital that bit `i` equals `pattern[i mod |pattern|]`.
/// Starts from 1, so `d(w) = 2^|w|` while the word follows the pattern and 0
/// after the first miss. `pattern = "0"` is the doubler on 0.
#[derive(Debug, Clone)]
pub struct PatternBettor {
    pattern: Word,
}

impl PatternBettor {
    pub fn new(pattern: Word) -> Self {
        assert!(!pattern.is_empty(), "pattern must be nonempty");
        PatternBettor { pattern }
    }

    pub fn doubler(bit: bool) -> Self {
        Self::new(Word::repeat(bit, 1))
    }

    fn expected(&self, i: usize) -> bool {
        self.pattern.bit(i % self.pattern.len()).unwrap()
    }
}

impl Martingale for PatternBettor {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        charge(w, budget)?;
        if w.iter().enumerate().all(|(i, b)| b == self.expected(i)) {
            Ok(Capital::pow2(w.len()))
        } else {
            Ok(Capital::zero())
        }
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        charge(w, budget)?;
        let mut out = Vec::with_capacity(w.len() + 1);
        let mut alive = true;
        out.push(Capital::one());
        for (i, b) in w.iter().enumerate() {
            alive &= b == self.expected(i);
            out.push(if alive { Capital::pow2(i + 1) } else { Capital::zero() });
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        if self.pattern.len() == 1 {
            format!("double_on:{}", self.pattern)
        } else {
            format!("pattern:{}", self.pattern)
        }
    }
}

/// Bets a fixed fraction `f` of the current capital on `bit` at every move.
#[derive(Debug, Clone)]
pub struct FractionBettor {
    bit: bool,
    up: Capital,
    down: Capital,
    fraction: Capital,
}

impl FractionBettor {
    /// `fraction` must lie in `[0, 1]`.
    pub fn new(bit: bool, fraction: Capital) -> Option<Self> {
        let down = Capital::one().checked_sub(&fraction)?;
        Some(FractionBettor { bit, up: &Capital::one() + &fraction, down, fraction })
    }
}

impl Martingale for FractionBettor {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        Ok(self.eval_chain(w, budget)?.pop().unwrap())
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        charge(w, budget)?;
        let mut out = Vec::with_capacity(w.len() + 1);
        let mut cur = Capital::one();
        out.push(cur.clone());
        for b in w.iter() {
            cur = if b == self.bit { &cur * &self.up } else { &cur * &self.down };
            out.push(cur.clone());
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("fraction:{}:{}", u8::from(self.bit), self.fraction)
    }
}

/// A fair martingale whose bet at each word is drawn from a keyed hash:
/// a fraction in `{0, 1/4, 1/2, 3/4, 1}` of the capital on a hashed side.
#[derive(Debug, Clone)]
pub struct RandomFairMartingale {
    seed: u64,
}

impl RandomFairMartingale {
    pub fn new(seed: u64) -> Self {
        RandomFairMartingale { seed }
    }
}

impl Martingale for RandomFairMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        Ok(self.eval_chain(w, budget)?.pop().unwrap())
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        charge(w, budget)?;
        let mut out = Vec::with_capacity(w.len() + 1);
        let mut cur = Capital::one();
        let mut h = mix64(self.seed);
        out.push(cur.clone());
        for b in w.iter() {
            let quarters = h % 5;
            let side = (h >> 8) & 1 == 1;
            let f = Capital::ratio(quarters, 4);
            let factor = if b == side { &Capital::one() + &f } else { Capital::one().checked_sub(&f).unwrap() };
            cur = &cur * &factor;
            out.push(cur.clone());
            h = mix64(h.wrapping_mul(3) ^ (u64::from(b) + 1));
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("random:{}", self.seed)
    }
}

/// Explicit finite table; a word takes the value of its longest tabulated
/// prefix, so the function is constant below the table's leaves. The table
/// must contain `ε`. Fairness is not enforced: tables are also used to build
/// deliberately unfair examples.
#[derive(Debug, Clone)]
pub struct TableMartingale {
    table: BTreeMap<Word, Capital>,
}

impl TableMartingale {
    pub fn new(table: BTreeMap<Word, Capital>) -> Option<Self> {
        table.contains_key(&Word::empty()).then_some(TableMartingale { table })
    }

    pub fn from_pairs(pairs: &[(&str, Capital)]) -> Self {
        let table = pairs.iter().map(|(k, v)| (k.parse::<Word>().expect("valid word"), v.clone())).collect();
        Self::new(table).expect("table must contain the empty word")
    }
}

impl Martingale for TableMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        charge(w, budget)?;
        for n in (0..=w.len()).rev() {
            if let Some(v) = self.table.get(&w.prefix(n)) {
                return Ok(v.clone());
            }
        }
        unreachable!("table contains ε")
    }

    fn describe(&self) -> String {
        let body: Vec<String> = self.table.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("table:{}", body.join(","))
    }
}

/// Wraps a martingale and makes it diverge (burn any budget) on every word
/// strictly extending one of `cutoffs`, and on every word longer than
/// `max_depth` when set.
#[derive(Debug, Clone)]
pub struct PartialMartingale {
    inner: MartingaleRef,
    cutoffs: Vec<Word>,
    max_depth: Option<usize>,
}

impl PartialMartingale {
    pub fn beyond(inner: MartingaleRef, cutoffs: Vec<Word>) -> Self {
        PartialMartingale { inner, cutoffs, max_depth: None }
    }

    pub fn to_depth(inner: MartingaleRef, max_depth: usize) -> Self {
        PartialMartingale { inner, cutoffs: Vec::new(), max_depth: Some(max_depth) }
    }

    fn diverges_at(&self, w: &Word) -> bool {
        self.max_depth.is_some_and(|d| w.len() > d)
            || self.cutoffs.iter().any(|c| c.len() < w.len() && c.is_prefix_of(w))
    }

    /// Length of the shortest prefix of `w` on which this diverges.
    fn first_divergence(&self, w: &Word) -> Option<usize> {
        (0..=w.len()).find(|&n| self.diverges_at(&w.prefix(n)))
    }
}

impl Martingale for PartialMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        if self.diverges_at(w) {
            return Err(budget.exhaust().into());
        }
        self.inner.eval(w, budget)
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        if self.first_divergence(w).is_some() {
            return Err(budget.exhaust().into());
        }
        self.inner.eval_chain(w, budget)
    }

    fn declared_total(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        match self.max_depth {
            Some(d) => format!("partial_depth:{d}:{}", self.inner.describe()),
            None => {
                let cuts: Vec<String> = self.cutoffs.iter().map(|c| c.to_string()).collect();
                format!("partial:{}:{}", cuts.join(","), self.inner.describe())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::value;
    use crate::word::w;
    use std::sync::Arc;

    #[test]
    fn doubler_values() {
        let d = PatternBettor::doubler(false);
        assert_eq!(value(&d, &w("000")).unwrap(), Capital::from_integer(8));
        assert_eq!(value(&d, &w("010")).unwrap(), Capital::zero());
        let chain = d.eval_chain(&w("001"), &mut Budget::unlimited()).unwrap();
        assert_eq!(chain, vec![cap("1"), cap("2"), cap("4"), cap("0")]);
    }

    #[test]
    fn fraction_bettor_values() {
        let f = FractionBettor::new(true, cap("1/2")).unwrap();
        assert_eq!(value(&f, &w("10")).unwrap(), cap("3/4"));
        assert!(FractionBettor::new(true, cap("3/2")).is_none());
    }

    #[test]
    fn table_uses_longest_prefix() {
        let t = TableMartingale::from_pairs(&[("", cap("1")), ("0", cap("2")), ("1", cap("0"))]);
        assert_eq!(value(&t, &w("011")).unwrap(), cap("2"));
        assert_eq!(value(&t, &w("")).unwrap(), cap("1"));
    }

    #[test]
    fn partial_diverges_strictly_beyond_cutoff() {
        let p = PartialMartingale::beyond(Arc::new(PatternBettor::doubler(false)), vec![w("1")]);
        let mut b = Budget::new(1000);
        assert!(p.eval(&w("1"), &mut b).is_ok());
        assert_eq!(p.eval(&w("10"), &mut b), Err(EvalError::OutOfBudget));
        assert_eq!(b.remaining(), 0);
        assert!(!p.declared_total());
        let depth = PartialMartingale::to_depth(Arc::new(ConstantMartingale(cap("1"))), 3);
        assert!(depth.eval(&w("000"), &mut Budget::new(10)).is_ok());
        assert!(depth.eval(&w("0000"), &mut Budget::new(10)).is_err());
    }

    #[test]
    fn eval_charges_steps() {
        let d = PatternBettor::doubler(false);
        assert_eq!(d.eval(&w("0000"), &mut Budget::new(4)), Err(EvalError::OutOfBudget));
        assert!(d.eval(&w("0000"), &mut Budget::new(5)).is_ok());
    }
}
