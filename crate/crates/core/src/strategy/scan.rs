//! Scan rules: which position a strategy visits at each move.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::budget::Budget;
use crate::martingale::EvalError;
use crate::source::mix64;
use crate::word::Word;

/// A non-adaptive scan map `π: ℕ → ℕ`, `π(k)` being the position visited at move `k`.
pub trait ScanMap: Send + Sync + fmt::Debug {
    fn position(&self, mv: usize) -> usize;

    /// The move visiting `pos`, if known. Permutations answer for every position.
    fn inverse(&self, _pos: usize) -> Option<usize> {
        None
    }

    /// A move count `J` such that every move visiting a position `< n` has
    /// index `< J`. `None` when no such bound is available.
    fn moves_covering(&self, _n: usize) -> Option<usize> {
        None
    }

    fn describe(&self) -> String;
}

pub type ScanMapRef = Arc<dyn ScanMap>;

/// A history-dependent scan rule `σ: 2^{<ω} → ℕ`.
pub trait AdaptiveRule: Send + Sync + fmt::Debug {
    fn next(&self, history: &Word, budget: &mut Budget) -> Result<usize, EvalError>;
    fn describe(&self) -> String;
}

#[derive(Clone)]
pub enum ScanRule {
    Monotonic,
    Permutation(ScanMapRef),
    Injection(ScanMapRef),
    Adaptive(Arc<dyn AdaptiveRule>),
}

impl ScanRule {
    /// `π(mv)` for non-adaptive rules.
    pub fn position(&self, mv: usize) -> Option<usize> {
        match self {
            ScanRule::Monotonic => Some(mv),
            ScanRule::Permutation(m) | ScanRule::Injection(m) => Some(m.position(mv)),
            ScanRule::Adaptive(_) => None,
        }
    }

    pub fn map(&self) -> Option<&ScanMapRef> {
        match self {
            ScanRule::Permutation(m) | ScanRule::Injection(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, ScanRule::Adaptive(_))
    }

    /// See [`ScanMap::moves_covering`].
    pub fn moves_covering(&self, n: usize) -> Option<usize> {
        match self {
            ScanRule::Monotonic => Some(n),
            ScanRule::Permutation(m) | ScanRule::Injection(m) => m.moves_covering(n),
            ScanRule::Adaptive(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ScanRule::Monotonic => "monotonic".into(),
            ScanRule::Permutation(m) => format!("permutation:{}", m.describe()),
            ScanRule::Injection(m) => format!("injection:{}", m.describe()),
            ScanRule::Adaptive(a) => format!("adaptive:{}", a.describe()),
        }
    }
}

impl fmt::Debug for ScanRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn covering_from_inverse(map: &dyn ScanMap, lo: usize, n: usize, floor: usize) -> usize {
    (lo..n).map(|p| map.inverse(p).expect("permutation has an inverse") + 1).max().unwrap_or(0).max(floor)
}

#[derive(Debug, Clone, Copy)]
pub struct Identity;

impl ScanMap for Identity {
    fn position(&self, mv: usize) -> usize {
        mv
    }
    fn inverse(&self, pos: usize) -> Option<usize> {
        Some(pos)
    }
    fn moves_covering(&self, n: usize) -> Option<usize> {
        Some(n)
    }
    fn describe(&self) -> String {
        "identity".into()
    }
}

/// `0↔1, 2↔3, …`
#[derive(Debug, Clone, Copy)]
pub struct SwapPairs;

impl ScanMap for SwapPairs {
    fn position(&self, mv: usize) -> usize {
        mv ^ 1
    }
    fn inverse(&self, pos: usize) -> Option<usize> {
        Some(pos ^ 1)
    }
    fn moves_covering(&self, n: usize) -> Option<usize> {
        Some(covering_from_inverse(self, n.saturating_sub(2), n, 0))
    }
    fn describe(&self) -> String {
        "swap_pairs".into()
    }
}

/// Permutes each block `[jB, (j+1)B)` by a keyed Fisher–Yates shuffle.
#[derive(Debug, Clone)]
pub struct BlockShuffle {
    block: usize,
    seed: u64,
}

impl BlockShuffle {
    pub fn new(block: usize, seed: u64) -> Self {
        assert!(block >= 1);
        BlockShuffle { block, seed }
    }

    fn block_perm(&self, j: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.block).collect();
        let mut h = mix64(self.seed ^ mix64(j as u64));
        for i in (1..self.block).rev() {
            h = mix64(h);
            let r = (h % (i as u64 + 1)) as usize;
            perm.swap(i, r);
        }
        perm
    }
}

impl ScanMap for BlockShuffle {
    fn position(&self, mv: usize) -> usize {
        let j = mv / self.block;
        j * self.block + self.block_perm(j)[mv % self.block]
    }
    fn inverse(&self, pos: usize) -> Option<usize> {
        let j = pos / self.block;
        let perm = self.block_perm(j);
        let r = perm.iter().position(|&x| x == pos % self.block).unwrap();
        Some(j * self.block + r)
    }
    fn moves_covering(&self, n: usize) -> Option<usize> {
        if n == 0 {
            return Some(0);
        }
        let last_block_start = (n - 1) / self.block * self.block;
        Some(covering_from_inverse(self, last_block_start, n, last_block_start))
    }
    fn describe(&self) -> String {
        format!("block_shuffle:{}:{}", self.block, self.seed)
    }
}

/// `π(k) = a·k + b` with `a ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    a: usize,
    b: usize,
}

impl Affine {
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a >= 1);
        Affine { a, b }
    }

    pub fn is_permutation(&self) -> bool {
        self.a == 1 && self.b == 0
    }
}

impl ScanMap for Affine {
    fn position(&self, mv: usize) -> usize {
        self.a * mv + self.b
    }
    fn inverse(&self, pos: usize) -> Option<usize> {
        (pos >= self.b && (pos - self.b).is_multiple_of(self.a)).then(|| (pos - self.b) / self.a)
    }
    fn moves_covering(&self, n: usize) -> Option<usize> {
        Some(if n <= self.b { 0 } else { (n - self.b).div_ceil(self.a) })
    }
    fn describe(&self) -> String {
        format!("affine:{}:{}", self.a, self.b)
    }
}

/// An explicit list of positions for the first moves, continued by the
/// increasing run of positions above the list. When the list is a
/// permutation of `[0, L)` the tail is the identity and the whole map is a
/// permutation. Lists with repeats are representable (and rejected by
/// [`check_injectivity`]).
#[derive(Debug, Clone)]
pub struct Listed {
    values: Vec<usize>,
    tail_base: usize,
    permutation: bool,
}

impl Listed {
    pub fn new(values: Vec<usize>) -> Self {
        let mut sorted = values.clone();
        sorted.sort_unstable();
        let permutation = sorted.iter().enumerate().all(|(i, &v)| i == v);
        let tail_base = if permutation { values.len() } else { values.iter().max().map_or(0, |m| m + 1) };
        Listed { values, tail_base, permutation }
    }

    pub fn is_permutation(&self) -> bool {
        self.permutation
    }
}

impl ScanMap for Listed {
    fn position(&self, mv: usize) -> usize {
        match self.values.get(mv) {
            Some(&p) => p,
            None => self.tail_base + (mv - self.values.len()),
        }
    }
    fn inverse(&self, pos: usize) -> Option<usize> {
        if let Some(k) = self.values.iter().position(|&p| p == pos) {
            return Some(k);
        }
        (pos >= self.tail_base).then(|| self.values.len() + pos - self.tail_base)
    }
    fn moves_covering(&self, n: usize) -> Option<usize> {
        let listed = self.values.iter().enumerate().filter(|(_, &p)| p < n).map(|(k, _)| k + 1).max().unwrap_or(0);
        let tail = if n > self.tail_base { self.values.len() + n - self.tail_base } else { 0 };
        Some(listed.max(tail))
    }
    fn describe(&self) -> String {
        let v: Vec<String> = self.values.iter().map(|p| p.to_string()).collect();
        format!("listed:{}", v.join(","))
    }
}

/// Hides the inverse and the covering bound of another map, leaving only
/// enumeration.
#[derive(Debug, Clone)]
pub struct NoHint(pub ScanMapRef);

impl ScanMap for NoHint {
    fn position(&self, mv: usize) -> usize {
        self.0.position(mv)
    }
    fn describe(&self) -> String {
        format!("nohint:{}", self.0.describe())
    }
}

/// A map whose covering bound comes from an enumeration performed elsewhere:
/// `found` lists the positions below `limit` that the enumeration produced,
/// keyed to their move index. Bounds are answered only for `n ≤ limit`.
#[derive(Debug, Clone)]
pub struct EnumeratedHint {
    inner: ScanMapRef,
    found: BTreeMap<usize, usize>,
    limit: usize,
}

impl EnumeratedHint {
    pub fn new(inner: ScanMapRef, found: BTreeMap<usize, usize>, limit: usize) -> Self {
        EnumeratedHint { inner, found, limit }
    }
}

impl ScanMap for EnumeratedHint {
    fn position(&self, mv: usize) -> usize {
        self.inner.position(mv)
    }
    fn inverse(&self, pos: usize) -> Option<usize> {
        self.found.get(&pos).copied()
    }
    fn moves_covering(&self, n: usize) -> Option<usize> {
        (n <= self.limit).then(|| self.found.range(..n).map(|(_, &k)| k + 1).max().unwrap_or(0))
    }
    fn describe(&self) -> String {
        self.inner.describe()
    }
}

/// Visits `0, then 1 or 2 further on`: the next position is the previous
/// one plus one plus the bit just read.
#[derive(Debug, Clone, Copy)]
pub struct JumpOnOne;

impl AdaptiveRule for JumpOnOne {
    fn next(&self, history: &Word, budget: &mut Budget) -> Result<usize, EvalError> {
        budget.tick(history.len() as u64 + 1)?;
        Ok(history.len() + history.count_ones())
    }
    fn describe(&self) -> String {
        "jump_on_one".into()
    }
}

/// Monotonic for `after` moves, then returns to position 0.
#[derive(Debug, Clone, Copy)]
pub struct Revisit {
    pub after: usize,
}

impl AdaptiveRule for Revisit {
    fn next(&self, history: &Word, budget: &mut Budget) -> Result<usize, EvalError> {
        budget.tick(1)?;
        Ok(if history.len() < self.after { history.len() } else { 0 })
    }
    fn describe(&self) -> String {
        format!("revisit:{}", self.after)
    }
}

pub fn next_position(rule: &ScanRule, history: &Word, budget: &mut Budget) -> Result<usize, EvalError> {
    match rule {
        ScanRule::Adaptive(a) => a.next(history, budget),
        other => {
            budget.tick(1)?;
            Ok(other.position(history.len()).unwrap())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("moves {0} and {1} visit the same position")]
    RepeatAt(usize, usize),
    #[error("inverse map disagrees at move {0}")]
    InverseMismatch(usize),
    #[error("adaptive rules are checked along a history")]
    NeedsHistory,
    #[error("scan rule ran out of budget at move {0}")]
    OutOfBudget(usize),
}

/// Pairwise distinctness of the first `horizon` scan positions. Adaptive
/// rules are followed along `history` (at most `|history| + 1` moves).
/// Permutations also have their inverse checked.
pub fn check_injectivity(
    rule: &ScanRule,
    horizon: usize,
    history: Option<&Word>,
    budget: &mut Budget,
) -> Result<(), ScanError> {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let moves = match rule {
        ScanRule::Adaptive(_) => {
            let h = history.ok_or(ScanError::NeedsHistory)?;
            horizon.min(h.len() + 1)
        }
        _ => horizon,
    };
    for k in 0..moves {
        let pos = match rule {
            ScanRule::Adaptive(a) => {
                a.next(&history.unwrap().prefix(k), budget).map_err(|_| ScanError::OutOfBudget(k))?
            }
            other => other.position(k).unwrap(),
        };
        if let Some(&first) = seen.get(&pos) {
            return Err(ScanError::RepeatAt(first, k));
        }
        seen.insert(pos, k);
        if let ScanRule::Permutation(m) = rule {
            if m.inverse(pos) != Some(k) {
                return Err(ScanError::InverseMismatch(k));
            }
        }
    }
    Ok(())
}

/// `π(ℕ) ∩ [0, n)`, each position keyed to the move visiting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitedSet {
    pub by_position: BTreeMap<usize, usize>,
    /// False when the enumeration was cut short by the budget; the set is
    /// then only known to be a subset of the true one.
    pub complete: bool,
}

impl VisitedSet {
    pub fn positions(&self) -> Vec<usize> {
        self.by_position.keys().copied().collect()
    }

    pub fn moves(&self) -> Vec<usize> {
        self.by_position.values().copied().collect()
    }
}

pub fn visited_below(rule: &ScanRule, n: usize, budget: &mut Budget) -> Result<VisitedSet, EvalError> {
    let mut by_position = BTreeMap::new();
    match rule {
        ScanRule::Adaptive(_) => return Err(EvalError::UnsupportedRule),
        ScanRule::Monotonic => {
            budget.tick(n as u64)?;
            by_position.extend((0..n).map(|p| (p, p)));
        }
        ScanRule::Permutation(m) => {
            budget.tick(n as u64)?;
            for p in 0..n {
                let k = m.inverse(p).ok_or(EvalError::UnsupportedRule)?;
                by_position.insert(p, k);
            }
        }
        ScanRule::Injection(m) => match m.moves_covering(n) {
            Some(moves) => {
                budget.tick(moves as u64)?;
                for k in 0..moves {
                    let p = m.position(k);
                    if p < n {
                        by_position.insert(p, k);
                    }
                }
            }
            None => {
                let mut k = 0;
                while budget.tick(1).is_ok() {
                    let p = m.position(k);
                    if p < n {
                        by_position.insert(p, k);
                    }
                    k += 1;
                    if by_position.len() == n {
                        break;
                    }
                }
                let complete = by_position.len() == n;
                return Ok(VisitedSet { by_position, complete });
            }
        },
    }
    Ok(VisitedSet { by_position, complete: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(m: impl ScanMap + 'static) -> ScanRule {
        ScanRule::Permutation(Arc::new(m))
    }

    fn inj(m: impl ScanMap + 'static) -> ScanRule {
        ScanRule::Injection(Arc::new(m))
    }

    #[test]
    fn next_position_examples() {
        let mut b = Budget::unlimited();
        assert_eq!(next_position(&ScanRule::Monotonic, &Word::repeat(false, 3), &mut b), Ok(3));
        assert_eq!(next_position(&perm(SwapPairs), &Word::empty(), &mut b), Ok(1));
        assert_eq!(next_position(&inj(Affine::new(2, 0)), &Word::repeat(true, 4), &mut b), Ok(8));
    }

    #[test]
    fn injectivity_examples() {
        let mut b = Budget::unlimited();
        assert!(check_injectivity(&perm(Identity), 100, None, &mut b).is_ok());
        let bad = inj(Listed::new(vec![5, 1, 2, 5]));
        assert_eq!(check_injectivity(&bad, 10, None, &mut b), Err(ScanError::RepeatAt(0, 3)));
        let rev = ScanRule::Adaptive(Arc::new(Revisit { after: 3 }));
        assert_eq!(check_injectivity(&rev, 10, Some(&Word::repeat(false, 5)), &mut b), Err(ScanError::RepeatAt(0, 3)));
        let jump = ScanRule::Adaptive(Arc::new(JumpOnOne));
        assert!(check_injectivity(&jump, 10, Some(&"1101".parse().unwrap()), &mut b).is_ok());
    }

    #[test]
    fn block_shuffle_is_a_permutation() {
        let m = BlockShuffle::new(5, 42);
        let rule = perm(m.clone());
        assert!(check_injectivity(&rule, 200, None, &mut Budget::unlimited()).is_ok());
        let mut positions: Vec<usize> = (0..50).map(|k| m.position(k)).collect();
        positions.sort_unstable();
        assert_eq!(positions, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn visited_below_examples() {
        let mut b = Budget::unlimited();
        let id = visited_below(&perm(Identity), 4, &mut b).unwrap();
        assert_eq!(id.positions(), vec![0, 1, 2, 3]);
        let aff = visited_below(&inj(Affine::new(2, 0)), 5, &mut b).unwrap();
        assert_eq!(aff.positions(), vec![0, 2, 4]);
        assert!(aff.complete);
        let swap = visited_below(&perm(SwapPairs), 3, &mut b).unwrap();
        assert_eq!(swap.positions(), vec![0, 1, 2]);
        assert_eq!(swap.moves(), vec![1, 0, 3]);
    }

    #[test]
    fn visited_below_without_hint_is_flagged() {
        let rule = inj(NoHint(Arc::new(Affine::new(2, 1))));
        let v = visited_below(&rule, 6, &mut Budget::new(50)).unwrap();
        assert_eq!(v.positions(), vec![1, 3, 5]);
        assert!(!v.complete);
    }

    #[test]
    fn covering_bounds_match_brute_force() {
        let maps: Vec<ScanMapRef> = vec![
            Arc::new(Identity),
            Arc::new(SwapPairs),
            Arc::new(BlockShuffle::new(4, 9)),
            Arc::new(BlockShuffle::new(7, 3)),
            Arc::new(Affine::new(3, 2)),
            Arc::new(Listed::new(vec![1, 5])),
            Arc::new(Listed::new(vec![2, 0, 1])),
        ];
        for m in maps {
            for n in 0..40 {
                // brute force: last move below n among the first 1000 moves
                let brute = (0..1000).filter(|&k| m.position(k) < n).map(|k| k + 1).max().unwrap_or(0);
                assert_eq!(m.moves_covering(n), Some(brute), "{} n={n}", m.describe());
            }
        }
    }

    #[test]
    fn listed_permutation_detection() {
        assert!(Listed::new(vec![1, 0]).is_permutation());
        assert!(!Listed::new(vec![1, 5]).is_permutation());
        let l = Listed::new(vec![1, 5]);
        assert_eq!((0..4).map(|k| l.position(k)).collect::<Vec<_>>(), vec![1, 5, 6, 7]);
    }
}
