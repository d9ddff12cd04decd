use super::{EvalError, Martingale, MartingaleRef};
use crate::budget::Budget;
use crate::capital::Capital;
use crate::word::Word;

/// `Σ αᵢ·dᵢ` with positive rational coefficients.
///
/// Terms are evaluated in list order; each gets an equal share of the
/// caller's remaining budget, and what it spends is charged back.
#[derive(Debug, Clone)]
pub struct WeightedSum {
    terms: Vec<(Capital, MartingaleRef)>,
}

impl WeightedSum {
    pub fn terms(&self) -> &[(Capital, MartingaleRef)] {
        &self.terms
    }
}

/// Panics if `terms` is empty or a coefficient is zero.
pub fn weighted_sum(terms: Vec<(Capital, MartingaleRef)>) -> WeightedSum {
    assert!(!terms.is_empty(), "weighted sum needs at least one term");
    assert!(terms.iter().all(|(a, _)| !a.is_zero()), "coefficients must be positive");
    WeightedSum { terms }
}

impl Martingale for WeightedSum {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        let mut total = Capital::zero();
        let per_term = budget.share(self.terms.len());
        for (alpha, m) in &self.terms {
            let mut sub = per_term.clone();
            let v = m.eval(w, &mut sub);
            budget.absorb(per_term.remaining(), &sub);
            total += &(alpha * &v?);
        }
        Ok(total)
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        let mut total = vec![Capital::zero(); w.len() + 1];
        let per_term = budget.share(self.terms.len());
        for (alpha, m) in &self.terms {
            let mut sub = per_term.clone();
            let chain = m.eval_chain(w, &mut sub);
            budget.absorb(per_term.remaining(), &sub);
            for (t, v) in total.iter_mut().zip(chain?) {
                *t += &(alpha * &v);
            }
        }
        Ok(total)
    }

    fn declared_total(&self) -> bool {
        self.terms.iter().all(|(_, m)| m.declared_total())
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(a, m)| format!("{a}*{}", m.describe())).collect();
        format!("sum({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::{value, ConstantMartingale, PatternBettor};
    use crate::word::w;
    use std::sync::Arc;

    #[test]
    fn constants_add() {
        let s = weighted_sum(vec![
            (cap("1"), Arc::new(ConstantMartingale(cap("1")))),
            (cap("1/2"), Arc::new(ConstantMartingale(cap("1")))),
        ]);
        for word in Word::all_of_length(3) {
            assert_eq!(value(&s, &word).unwrap(), cap("3/2"));
        }
    }

    #[test]
    fn single_term_is_identity() {
        let d: MartingaleRef = Arc::new(PatternBettor::new(w("01")));
        let s = weighted_sum(vec![(cap("1"), d.clone())]);
        for n in 0..5 {
            for word in Word::all_of_length(n) {
                assert_eq!(value(&s, &word).unwrap(), value(d.as_ref(), &word).unwrap());
            }
        }
    }

    #[test]
    fn opposite_doublers() {
        // Hand evaluation: each doubler is 2^|w| on its own constant word and
        // 0 elsewhere, so the sum is 2 at ε, 2 on words of length 1, then 4
        // on 00/11 and 0 on mixed words.
        let s = weighted_sum(vec![
            (cap("1"), Arc::new(PatternBettor::doubler(false))),
            (cap("1"), Arc::new(PatternBettor::doubler(true))),
        ]);
        assert_eq!(value(&s, &w("")).unwrap(), cap("2"));
        assert_eq!(value(&s, &w("0")).unwrap(), cap("2"));
        assert_eq!(value(&s, &w("1")).unwrap(), cap("2"));
        assert_eq!(value(&s, &w("00")).unwrap(), cap("4"));
        assert_eq!(value(&s, &w("01")).unwrap(), cap("0"));
        assert_eq!(value(&s, &w("111")).unwrap(), cap("8"));
        assert_eq!(value(&s, &w("110")).unwrap(), cap("0"));
    }

    #[test]
    fn out_of_budget_propagates() {
        let s = weighted_sum(vec![
            (cap("1"), Arc::new(PatternBettor::doubler(false))),
            (cap("1"), Arc::new(PatternBettor::doubler(true))),
        ]);
        // Each term needs 4 steps on a 3-bit word; 6 steps split in two is 3 each.
        assert_eq!(s.eval(&w("000"), &mut Budget::new(6)), Err(EvalError::OutOfBudget));
        assert!(s.eval(&w("000"), &mut Budget::new(8)).is_ok());
    }
}
