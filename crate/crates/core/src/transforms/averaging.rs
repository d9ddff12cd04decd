//! The averaging martingale `Av b` of a permutation or injection strategy,
//! and monotonization `Av(saving(b))`.

use crate::budget::Budget;
use crate::capital::Capital;
use crate::martingale::{saving_transform, EvalError, Martingale};
use crate::strategy::{ScanRule, Strategy};
use crate::word::Word;

pub const DEFAULT_AVERAGING_CAP: usize = 20;

/// The least `M ≥ n` such that every run on a word of length `M` plays all
/// moves visiting positions below `n`: with `J` the last such move,
/// `M = max(n, 1 + max π(0..=J))`.
pub fn averaging_horizon(rule: &ScanRule, n: usize) -> Result<usize, EvalError> {
    let moves = match rule {
        ScanRule::Adaptive(_) => return Err(EvalError::UnsupportedRule),
        ScanRule::Permutation(m) => match m.moves_covering(n) {
            Some(j) => j,
            None => (0..n)
                .map(|p| m.inverse(p).map(|k| k + 1).ok_or(EvalError::NoBound(n)))
                .try_fold(0, |acc, k| k.map(|k| acc.max(k)))?,
        },
        other => other.moves_covering(n).ok_or(EvalError::NoBound(n))?,
    };
    let reach = (0..moves).map(|k| rule.position(k).unwrap() + 1).max().unwrap_or(0);
    Ok(n.max(reach))
}

#[derive(Debug, Clone)]
pub struct AveragedMartingale {
    strategy: Strategy,
    cap: usize,
}

/// `Av b`. The rule must be a permutation or an injection with a bound;
/// violations surface at evaluation time.
pub fn average_martingale(b: Strategy) -> AveragedMartingale {
    AveragedMartingale { strategy: b, cap: DEFAULT_AVERAGING_CAP }
}

/// `Av(saving(d), π)`. `None` when `d` has zero or undefined initial capital.
pub fn monotonize(b: &Strategy) -> Option<AveragedMartingale> {
    let saved = saving_transform(b.d.clone())?;
    Some(average_martingale(Strategy::new(std::sync::Arc::new(saved), b.rule.clone())))
}

impl AveragedMartingale {
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    /// The mean of `b̂` over all extensions of `w` of length `m`. Equal to
    /// `eval(w)` for every `m ≥ averaging_horizon(rule, |w|)`.
    pub fn eval_at_horizon(&self, w: &Word, m: usize, budget: &mut Budget) -> Result<Capital, EvalError> {
        let rule = &self.strategy.rule;
        let mut positions = Vec::new();
        loop {
            let k = positions.len();
            budget.tick(1)?;
            let p = rule.position(k).ok_or(EvalError::UnsupportedRule)?;
            if p >= m {
                break;
            }
            if k >= m {
                // more moves than positions below m
                let first = (0..k).find(|&j| positions[j] == p).unwrap_or(0);
                return Err(EvalError::NotInjective(first, k));
            }
            positions.push(p);
        }
        let unknown: Vec<usize> = (0..positions.len()).filter(|&k| positions[k] >= w.len()).collect();
        if unknown.len() > self.cap {
            return Err(EvalError::HorizonTooLarge { unknown: unknown.len(), cap: self.cap });
        }
        let mut history: Vec<bool> = positions.iter().map(|&p| w.bit(p).unwrap_or(false)).collect();
        let mut total = Capital::zero();
        for fill in 0u64..(1u64 << unknown.len()) {
            for (j, &k) in unknown.iter().enumerate() {
                history[k] = (fill >> j) & 1 == 1;
            }
            total += &self.strategy.d.eval(&Word::from_bits(history.clone()), budget)?;
        }
        Ok(total.div_pow2(unknown.len()))
    }
}

impl Martingale for AveragedMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        let m = averaging_horizon(&self.strategy.rule, w.len())?;
        self.eval_at_horizon(w, m, budget)
    }

    fn declared_total(&self) -> bool {
        self.strategy.d.declared_total()
    }

    fn describe(&self) -> String {
        format!("av{}", self.strategy.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::martingale::{check_fairness, value, MartingaleRef, PatternBettor, TableMartingale};
    use crate::strategy::{run_on_word, Affine, Identity, Listed, NoHint, SwapPairs};
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

    #[test]
    fn horizon_examples() {
        assert_eq!(averaging_horizon(&ScanRule::Permutation(Arc::new(Identity)), 5), Ok(5));
        assert_eq!(averaging_horizon(&ScanRule::Permutation(Arc::new(SwapPairs)), 3), Ok(4));
        assert_eq!(averaging_horizon(&ScanRule::Injection(Arc::new(Listed::new(vec![1, 5]))), 2), Ok(2));
        let nohint = ScanRule::Injection(Arc::new(NoHint(Arc::new(Affine::new(2, 0)))));
        assert_eq!(averaging_horizon(&nohint, 3), Err(EvalError::NoBound(3)));
    }

    #[test]
    fn out_of_order_average_examples() {
        // Hand average: positions 1 and 5 carry the two visited bits.
        let av = average_martingale(Strategy::new(table_d(), ScanRule::Injection(Arc::new(Listed::new(vec![1, 5])))));
        assert_eq!(value(&av, &w("")).unwrap(), cap("1"));
        assert_eq!(value(&av, &w("0")).unwrap(), cap("1"));
        assert_eq!(value(&av, &w("00")).unwrap(), cap("2"));
        assert_eq!(value(&av, &w("01")).unwrap(), cap("0"));
    }

    #[test]
    fn monotonic_average_is_identity() {
        let d: MartingaleRef = Arc::new(PatternBettor::new(w("10")));
        let av = average_martingale(Strategy::monotonic(d.clone()));
        for n in 0..7 {
            for word in Word::all_of_length(n) {
                assert_eq!(value(&av, &word).unwrap(), value(d.as_ref(), &word).unwrap());
            }
        }
    }

    #[test]
    fn empty_average_is_finite_run() {
        let b = Strategy::new(Arc::new(PatternBettor::doubler(true)), ScanRule::Permutation(Arc::new(SwapPairs)));
        let av = average_martingale(b.clone());
        for word in Word::all_of_length(4) {
            let (bh, _) = run_on_word(&b, &word, &mut Budget::unlimited()).unwrap();
            assert_eq!(value(&av, &word).unwrap(), bh);
        }
    }

    #[test]
    fn average_is_fair() {
        let b = Strategy::new(table_d(), ScanRule::Permutation(Arc::new(Listed::new(vec![1, 0]))));
        assert!(check_fairness(&average_martingale(b), 6, 100_000).is_fair());
    }

    #[test]
    fn horizon_choice_is_irrelevant() {
        let b = Strategy::new(Arc::new(PatternBettor::new(w("011"))), ScanRule::Permutation(Arc::new(SwapPairs)));
        let av = average_martingale(b);
        for word in Word::all_of_length(5) {
            let m = averaging_horizon(&av.strategy().rule, 5).unwrap();
            let a = av.eval_at_horizon(&word, m, &mut Budget::unlimited()).unwrap();
            let c = av.eval_at_horizon(&word, m + 3, &mut Budget::unlimited()).unwrap();
            assert_eq!(a, c);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let b = Strategy::new(Arc::new(PatternBettor::doubler(false)), ScanRule::Permutation(Arc::new(SwapPairs)));
        let av = average_martingale(b).with_cap(0);
        assert_eq!(av.eval(&w("0"), &mut Budget::unlimited()), Err(EvalError::HorizonTooLarge { unknown: 1, cap: 0 }));
    }

    #[test]
    fn monotonize_of_monotonic_is_saving() {
        let d: MartingaleRef = Arc::new(PatternBettor::doubler(false));
        let out = monotonize(&Strategy::monotonic(d.clone())).unwrap();
        let saved = saving_transform(d).unwrap();
        for n in 0..6 {
            for word in Word::all_of_length(n) {
                assert_eq!(value(&out, &word).unwrap(), value(&saved, &word).unwrap());
            }
        }
    }

    #[test]
    fn swap_doubler_keeps_its_bank() {
        // Bank after the finite run on 0^8 (8 moves won) is 8 ≥ 3; every
        // longer prefix keeps at least that.
        let b = Strategy::new(Arc::new(PatternBettor::doubler(false)), ScanRule::Permutation(Arc::new(SwapPairs)));
        let out = monotonize(&b).unwrap();
        for n in 8..=16 {
            assert!(value(&out, &Word::repeat(false, n)).unwrap() >= cap("3"));
        }
    }
}
