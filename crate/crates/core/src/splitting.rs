//! The interval-splitting injective strategy.
//!
//! Each interval `I_k = [n_k, n_{k+1})` is cut into `s_k` consecutive
//! sub-intervals `J_k^e`. When the `e`-th low-complexity word of length
//! `|I_k|` is enumerated, a reserve of `1/((k+1)²·s_k)` is bet by doubling
//! on `A↾J_k^e` agreeing with that word. The visit order comes from the
//! enumeration alone and never depends on the sequence.

use std::ops::Range;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::budget::Budget;
use crate::capital::Capital;
use crate::checkpoints::Checkpoints;
use crate::complexity::enumerate_low;
use crate::martingale::{EvalError, Martingale};
use crate::strategy::{Listed, RunTrace, ScanRule, Strategy};
use crate::word::Word;

/// Added to `⌊log|I| − 2·log log|I|⌋`, absorbing the constant overhead of
/// the description system.
pub const THRESHOLD_SLACK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplittingError {
    #[error("interval {0} is shorter than 4")]
    IntervalTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPlan {
    pub interval: Range<usize>,
    pub s: usize,
    pub subs: Vec<Range<usize>>,
    pub stake: Capital,
    pub threshold: usize,
}

impl IntervalPlan {
    pub fn len(&self) -> usize {
        self.interval.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interval.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingPlan {
    pub checkpoints: Checkpoints,
    pub intervals: Vec<IntervalPlan>,
}

fn log2_floor(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// `⌊log₂ L − 2·log₂ log₂ L⌋ + THRESHOLD_SLACK`, clamped at the slack.
pub fn threshold_for(len: usize) -> usize {
    let l = (len as f64).log2();
    let raw = (l - 2.0 * l.log2()).floor();
    raw.max(0.0) as usize + THRESHOLD_SLACK
}

pub fn build_plan(cp: &Checkpoints) -> Result<SplittingPlan, SplittingError> {
    let mut intervals = Vec::with_capacity(cp.interval_count());
    for k in 0..cp.interval_count() {
        let interval = cp.interval(k);
        let len = interval.len();
        if len < 4 {
            return Err(SplittingError::IntervalTooSmall(k));
        }
        let lg = log2_floor(len);
        let s = (len / (lg * lg)).max(1);
        let width = len / s;
        let subs = (0..s)
            .map(|e| {
                let start = interval.start + e * width;
                let end = if e + 1 == s { interval.end } else { start + width };
                start..end
            })
            .collect();
        let stake = Capital::ratio(1, ((k as u64 + 1) * (k as u64 + 1)) * s as u64);
        intervals.push(IntervalPlan { interval, s, subs, stake, threshold: threshold_for(len) });
    }
    Ok(SplittingPlan { checkpoints: cp.clone(), intervals })
}

/// `stake_k · 2^{min |J_k^e|}`: the payout of one won sub-game.
pub fn expected_gain(plan: &SplittingPlan, k: usize) -> Capital {
    let ip = &plan.intervals[k];
    let shortest = ip.subs.iter().map(|j| j.len()).min().unwrap_or(0);
    ip.stake.mul_pow2(shortest)
}

/// One doubling sub-game: moves `first_move..first_move + pattern.len()`
/// visit `positions` in increasing order and bet on `pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub k: usize,
    pub e: usize,
    pub positions: Range<usize>,
    pub pattern: Word,
    pub stake: Capital,
    pub first_move: usize,
}

/// `2 + Σ (value of game − stake)` over the opened games.
#[derive(Debug, Clone)]
pub struct SplittingMartingale {
    games: Vec<Game>,
    /// Game index of each move.
    owner: Vec<usize>,
}

impl SplittingMartingale {
    pub fn new(games: Vec<Game>) -> Self {
        let mut owner = Vec::new();
        for (g, game) in games.iter().enumerate() {
            debug_assert_eq!(game.first_move, owner.len());
            owner.extend(std::iter::repeat_n(g, game.pattern.len()));
        }
        SplittingMartingale { games, owner }
    }
}

impl Martingale for SplittingMartingale {
    fn eval(&self, w: &Word, budget: &mut Budget) -> Result<Capital, EvalError> {
        Ok(self.eval_chain(w, budget)?.pop().unwrap())
    }

    fn eval_chain(&self, w: &Word, budget: &mut Budget) -> Result<Vec<Capital>, EvalError> {
        budget.tick(w.len() as u64 + 1)?;
        let mut alive = vec![true; self.games.len()];
        let mut capital = Capital::from_integer(2);
        let mut out = Vec::with_capacity(w.len() + 1);
        out.push(capital.clone());
        for (m, bit) in w.iter().enumerate() {
            // moves past the opened games are not bets
            if let Some(&g) = self.owner.get(m) {
                if alive[g] {
                    let game = &self.games[g];
                    let i = m - game.first_move;
                    let at_stake = game.stake.mul_pow2(i);
                    if game.pattern.bit(i) == Some(bit) {
                        capital += &at_stake;
                    } else {
                        capital = capital.checked_sub(&at_stake).expect("capital stays positive");
                        alive[g] = false;
                    }
                }
            }
            out.push(capital.clone());
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("splitting({} games)", self.games.len())
    }
}

#[derive(Debug, Clone)]
pub struct SplittingStrategy {
    pub plan: SplittingPlan,
    pub games: Vec<Game>,
    pub strategy: Strategy,
    /// Candidates enumerated beyond `s_k`, per interval; never bet on.
    pub overflow: Vec<usize>,
    /// Intervals whose enumeration ran out of budget.
    pub exhausted: Vec<usize>,
}

impl SplittingStrategy {
    /// Moves covering every opened sub-game.
    pub fn horizon_moves(&self) -> usize {
        self.games.iter().map(|g| g.pattern.len()).sum()
    }

    /// Sum of the stakes of all opened games: the most that can be lost.
    pub fn at_risk(&self) -> Capital {
        self.games.iter().map(|g| &g.stake).sum()
    }
}

/// Enumerate `S_k` for every interval with `budget` steps each, then open
/// sub-games round by round: round `e` opens `J_k^e` for every `k` whose
/// `e`-th candidate exists.
pub fn build_splitting_strategy(plan: &SplittingPlan, budget: u64) -> SplittingStrategy {
    let mut candidates = Vec::new();
    let mut overflow = Vec::new();
    let mut exhausted = Vec::new();
    for (k, ip) in plan.intervals.iter().enumerate() {
        let mut stream = enumerate_low(ip.len(), ip.len(), ip.threshold, Budget::new(budget));
        let words: Vec<Word> = stream.by_ref().collect();
        if stream.truncated() {
            exhausted.push(k);
        }
        overflow.push(words.len().saturating_sub(ip.s));
        candidates.push(words.into_iter().take(ip.s).collect::<Vec<_>>());
    }
    let rounds = candidates.iter().map(Vec::len).max().unwrap_or(0);
    let mut games = Vec::new();
    let mut order = Vec::new();
    for e in 0..rounds {
        for (k, ip) in plan.intervals.iter().enumerate() {
            let Some(w) = candidates[k].get(e) else { continue };
            let j = ip.subs[e].clone();
            let pattern: Word = j.clone().map(|p| w.bit(p - ip.interval.start).unwrap()).collect();
            games.push(Game { k, e, positions: j.clone(), pattern, stake: ip.stake.clone(), first_move: order.len() });
            order.extend(j);
        }
    }
    let d = Arc::new(SplittingMartingale::new(games.clone()));
    let strategy = Strategy::new(d, ScanRule::Injection(Arc::new(Listed::new(order))));
    SplittingStrategy { plan: plan.clone(), games, strategy, overflow, exhausted }
}

/// Capital change contributed by the moves inside each interval. Signed:
/// an interval can lose.
pub fn interval_gains(plan: &SplittingPlan, trace: &RunTrace) -> Vec<BigRational> {
    let mut gains = vec![BigRational::zero(); plan.intervals.len()];
    for (m, &p) in trace.positions.iter().enumerate() {
        let (Some(before), Some(after)) = (trace.capitals.get(m), trace.capitals.get(m + 1)) else {
            break;
        };
        if let Some(k) = plan.intervals.iter().position(|ip| ip.interval.contains(&p)) {
            gains[k] += after.as_rational() - before.as_rational();
        }
    }
    gains
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capital::cap;
    use crate::checkpoints::validate_checkpoints;
    use crate::martingale::check_fairness;
    use crate::source::SequenceSource;
    use crate::strategy::run_on_sequence;

    fn plan(v: &[usize]) -> SplittingPlan {
        build_plan(&validate_checkpoints(v).unwrap()).unwrap()
    }

    #[test]
    fn plan_examples() {
        let p = plan(&[0, 16, 32]);
        assert_eq!(p.intervals[0].s, 1);
        assert_eq!(p.intervals[0].subs, vec![0..16]);
        assert_eq!(p.intervals[0].stake, cap("1"));
        assert_eq!(expected_gain(&p, 0), cap("65536"));

        let p = plan(&[0, 256, 512]);
        assert_eq!(p.intervals[0].s, 4);
        assert_eq!(p.intervals[0].subs, vec![0..64, 64..128, 128..192, 192..256]);
        assert_eq!(p.intervals[0].stake, cap("1/4"));
        assert_eq!(expected_gain(&p, 0), Capital::pow2(62));

        let p = plan(&[0, 4]);
        assert_eq!(expected_gain(&p, 0), cap("16"));
        let bad = validate_checkpoints(&[0, 3]).unwrap();
        assert_eq!(build_plan(&bad), Err(SplittingError::IntervalTooSmall(0)));
    }

    #[test]
    fn remainder_goes_to_last_sub_interval() {
        let p = plan(&[0, 100, 300]);
        // |I_0| = 100, ⌊log₂⌋ = 6, s = ⌊100/36⌋ = 2
        assert_eq!(p.intervals[0].subs, vec![0..50, 50..100]);
        // |I_1| = 200, ⌊log₂⌋ = 7, s = ⌊200/49⌋ = 4, width 50
        assert_eq!(p.intervals[1].subs.last().unwrap(), &(250..300));
        for ip in &p.intervals {
            let total: usize = ip.subs.iter().map(|j| j.len()).sum();
            assert_eq!(total, ip.len());
        }
    }

    #[test]
    fn stakes_sum_below_two() {
        let p = plan(&[0, 16, 32, 64, 128, 256, 512, 1024]);
        let total: Capital = p.intervals.iter().map(|ip| ip.stake.clone() * Capital::from_integer(ip.s as u64)).sum();
        assert!(total < cap("2"));
    }

    #[test]
    fn all_zeros_wins_every_interval() {
        let p = plan(&[0, 16, 32, 64]);
        let s = build_splitting_strategy(&p, 1_000_000);
        assert!(s.exhausted.is_empty());
        let trace =
            run_on_sequence(&s.strategy, &SequenceSource::all_zeros(), s.horizon_moves(), &mut Budget::unlimited());
        let gains = interval_gains(&p, &trace);
        assert_eq!(gains.len(), p.intervals.len());
        for (k, g) in gains.iter().enumerate() {
            assert!(*g >= BigRational::from_integer(1.into()), "interval {k}");
        }
        assert!(s.at_risk() < cap("2"));
    }

    #[test]
    fn visit_order_ignores_the_sequence() {
        let p = plan(&[0, 16, 32]);
        let s = build_splitting_strategy(&p, 1_000_000);
        let n = s.horizon_moves();
        let a = run_on_sequence(&s.strategy, &SequenceSource::all_zeros(), n, &mut Budget::unlimited());
        let b = run_on_sequence(&s.strategy, &SequenceSource::pseudo_random(9), n, &mut Budget::unlimited());
        assert_eq!(a.positions, b.positions);
    }

    #[test]
    fn splitting_martingale_is_fair() {
        let p = plan(&[0, 4, 8]);
        let s = build_splitting_strategy(&p, 1_000_000);
        let report = check_fairness(s.strategy.d.as_ref(), 8, u64::MAX);
        assert!(report.violations.is_empty());
    }
}
