//! The saving transform.
//!
//! The saved martingale plays like the base `d` scaled by `2^-e`. Whenever
//! its active part reaches twice the starting capital `c₀`, half of the
//! active part moves to a bank that is never wagered again and `e` grows by
//! one; this cascades until the active part is back below `2·c₀`. Banking
//! moves money without changing the total, so fairness is inherited from `d`.

use super::{initial_capital, EvalError, Martingale, MartingaleRef};
use crate::budget::Budget;
use crate::capital::Capital;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SavingState {
    pub bank: Capital,
    pub active: Capital,
    pub scale_exponent: usize,
}

impl SavingState {
    pub fn total(&self) -> Capital {
        &self.bank + &self.active
    }
}

#[derive(Debug, Clone)]
pub struct SavingMartingale {
    base: MartingaleRef,
    initial: Capital,
    threshold: Capital,
}

/// Fails with `None` when the base has zero (or undefined) initial capital.
pub fn saving_transform(base: MartingaleRef) -> Option<SavingMartingale> {
    let initial = initial_capital(base.as_ref()).ok()?;
    if initial.is_zero() {
        return None;
    }
    Some(SavingMartingale { threshold: initial.mul_pow2(1), initial, base })
}

impl SavingMartingale {
    pub fn base(&self) -> &MartingaleRef {
        &self.base
    }

    pub fn initial(&self) -> &Capital {
        &self.initial
    }

    /// Bank/active split at every prefix of `w`, shortest first.
    pub fn state_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<SavingState>, EvalError> {
        let base = self.base.eval_chain(w, budget)?;
        let mut out = Vec::with_capacity(base.len());
        let mut bank = Capital::zero();
        let mut e = 0usize;
        for v in &base {
            let mut active = v.div_pow2(e);
            while active >= self.threshold {
                let half = active.half();
                bank += &half;
                active = half;
                e += 1;
            }
            out.push(SavingState { bank: bank.clone(), active, scale_exponent: e });
        }
        Ok(out)
    }

    pub fn state(&self, w: &Word, budget: &mut Budget) -> Result<SavingState, EvalError> {
        Ok(self.state_chain(w, budget)?.pop().unwrap())
    }
}

impl Martingale for SavingMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        Ok(self.state(w, budget)?.total())
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        Ok(self.state_chain(w, budget)?.iter().map(SavingState::total).collect())
    }

    fn declared_total(&self) -> bool {
        self.base.declared_total()
    }

    fn describe(&self) -> String {
        format!("saving({})", self.base.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::{value, ConstantMartingale, PatternBettor, TableMartingale};
    use crate::word::w;
    use std::sync::Arc;

    #[test]
    fn constant_never_banks() {
        let s = saving_transform(Arc::new(ConstantMartingale(cap("1")))).unwrap();
        for word in Word::all_of_length(4) {
            let st = s.state(&word, &mut Budget::unlimited()).unwrap();
            assert_eq!(st.bank, Capital::zero());
            assert_eq!(st.total(), cap("1"));
        }
    }

    #[test]
    fn doubler_banks_one_per_win() {
        // Hand iteration: active returns to 1 after every doubling, so the
        // bank gains exactly 1 per move.
        let s = saving_transform(Arc::new(PatternBettor::doubler(false))).unwrap();
        for n in 1..=5 {
            let st = s.state(&Word::repeat(false, n), &mut Budget::unlimited()).unwrap();
            assert_eq!(st.bank, Capital::from_integer(n as u64));
            assert_eq!(st.active, cap("1"));
            assert_eq!(st.scale_exponent, n);
            assert_eq!(value(&s, &Word::repeat(false, n)).unwrap(), Capital::from_integer(n as u64 + 1));
        }
    }

    #[test]
    fn first_trigger_at_exactly_two() {
        let t = TableMartingale::from_pairs(&[
            ("", cap("1")),
            ("0", cap("3/2")),
            ("1", cap("1/2")),
            ("00", cap("2")),
            ("01", cap("1")),
        ]);
        let s = saving_transform(Arc::new(t)).unwrap();
        let st = s.state(&w("00"), &mut Budget::unlimited()).unwrap();
        assert_eq!(st.bank, cap("1"));
        assert_eq!(st.active, cap("1"));
    }

    #[test]
    fn cascade_keeps_active_below_threshold() {
        // A jump from 1 to 8 banks 4, then 2, then 1.
        let t = TableMartingale::from_pairs(&[("", cap("1")), ("0", cap("8")), ("1", cap("0"))]);
        let s = saving_transform(Arc::new(t)).unwrap();
        let st = s.state(&w("0"), &mut Budget::unlimited()).unwrap();
        assert_eq!(st.bank, cap("7"));
        assert_eq!(st.active, cap("1"));
        assert_eq!(st.scale_exponent, 3);
    }

    #[test]
    fn zero_initial_rejected() {
        assert!(saving_transform(Arc::new(ConstantMartingale(Capital::zero()))).is_none());
    }
}
