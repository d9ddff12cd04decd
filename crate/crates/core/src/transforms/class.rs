//! Effectively closed classes, given by a staged enumeration of the
//! cylinders making up their complement `U`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::strategy::ScanMapRef;
use crate::word::Word;

/// A finite set of fixed bits `{(position, bit)}`: the set of sequences
/// agreeing with it. A cylinder `[w]` is the pattern fixing `0..|w|`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Pattern(BTreeMap<usize, bool>);

impl Pattern {
    pub fn from_word(w: &Word) -> Self {
        Pattern(w.iter().enumerate().collect())
    }

    pub fn get(&self, pos: usize) -> Option<bool> {
        self.0.get(&pos).copied()
    }

    pub fn with(&self, pos: usize, bit: bool) -> Self {
        let mut p = self.clone();
        p.0.insert(pos, bit);
        p
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.0.iter().map(|(&p, &b)| (p, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether every sequence matching `self` lies in `[w]`.
    pub fn implies(&self, w: &Word) -> bool {
        w.iter().enumerate().all(|(i, b)| self.get(i) == Some(b))
    }

    /// Whether some sequence matches both `self` and `[w]`.
    pub fn meets(&self, w: &Word) -> bool {
        w.iter().enumerate().all(|(i, b)| self.get(i).is_none_or(|x| x == b))
    }
}

pub trait ClosedClass: Send + Sync + fmt::Debug {
    /// Whether every sequence matching `pattern` lies in `U` as enumerated by
    /// the end of `stage`. Monotone in `stage`.
    fn covers(&self, pattern: &Pattern, stage: usize) -> bool;

    /// The least stage `≤ max_stage` at which `pattern` is covered.
    fn cover_stage(&self, pattern: &Pattern, max_stage: usize) -> Option<usize> {
        if !self.covers(pattern, max_stage) {
            return None;
        }
        let (mut lo, mut hi) = (0, max_stage);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.covers(pattern, mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }

    fn describe(&self) -> String;
}

pub type ClassRef = Arc<dyn ClosedClass>;

/// Whether the cylinders in `cyls` cover every sequence matching `p`.
fn cylinders_cover(cyls: &[&Word], p: &Pattern) -> bool {
    let live: Vec<&Word> = cyls.iter().copied().filter(|c| p.meets(c)).collect();
    if live.iter().any(|c| p.implies(c)) {
        return true;
    }
    // Split on the least position some live cylinder fixes and p does not.
    let split = live.iter().filter_map(|c| (0..c.len()).find(|&i| p.get(i).is_none())).min();
    match split {
        None => false,
        Some(i) => cylinders_cover(&live, &p.with(i, false)) && cylinders_cover(&live, &p.with(i, true)),
    }
}

/// An explicit finite staged enumeration: `stages[t]` lists the cylinders
/// first enumerated at stage `t`. Nothing new appears after the last stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StagedClass {
    stages: Vec<Vec<Word>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassParseError {
    #[error("line {0}: expected `stage <t>: <words>`")]
    Syntax(usize),
    #[error("line {0}: stages must be listed in increasing order")]
    Order(usize),
    #[error("line {0}: bad word {1:?}")]
    Word(usize, String),
}

impl StagedClass {
    pub fn new(stages: Vec<Vec<Word>>) -> Self {
        StagedClass { stages }
    }

    /// The class with empty complement: nothing is ever enumerated.
    pub fn full() -> Self {
        StagedClass::default()
    }

    pub fn stages(&self) -> &[Vec<Word>] {
        &self.stages
    }

    /// Every cylinder enumerated by the end of `stage`.
    pub fn enumerated(&self, stage: usize) -> Vec<&Word> {
        self.stages.iter().take(stage.saturating_add(1)).flatten().collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (t, words) in self.stages.iter().enumerate() {
            let ws: Vec<String> =
                words.iter().map(|w| if w.is_empty() { "-".to_string() } else { w.to_string() }).collect();
            if ws.is_empty() {
                out.push_str(&format!("stage {t}:\n"));
            } else {
                out.push_str(&format!("stage {t}: {}\n", ws.join(", ")));
            }
        }
        out
    }
}

impl FromStr for StagedClass {
    type Err = ClassParseError;

    /// Lines `stage <t>: w, w, …`; `-` is the empty word, blank lines and
    /// `#` comments are skipped, omitted stages are empty.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut stages: Vec<Vec<Word>> = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let rest = line.strip_prefix("stage").ok_or(ClassParseError::Syntax(line_no))?;
            let (t, words) = rest.split_once(':').ok_or(ClassParseError::Syntax(line_no))?;
            let t: usize = t.trim().parse().map_err(|_| ClassParseError::Syntax(line_no))?;
            if t < stages.len() {
                return Err(ClassParseError::Order(line_no));
            }
            stages.resize(t + 1, Vec::new());
            for tok in words.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let w = if tok == "-" {
                    Word::empty()
                } else {
                    tok.parse().map_err(|_| ClassParseError::Word(line_no, tok.to_string()))?
                };
                stages[t].push(w);
            }
        }
        Ok(StagedClass { stages })
    }
}

impl ClosedClass for StagedClass {
    fn covers(&self, pattern: &Pattern, stage: usize) -> bool {
        cylinders_cover(&self.enumerated(stage), pattern)
    }

    fn cover_stage(&self, pattern: &Pattern, max_stage: usize) -> Option<usize> {
        let last = self.stages.len().saturating_sub(1).min(max_stage);
        (0..=last).find(|&t| self.covers(pattern, t))
    }

    fn describe(&self) -> String {
        format!("staged({} stages)", self.stages.len())
    }
}

/// The image of a class under the map a permutation `π` induces on
/// sequences, `A ↦ A(π(0))A(π(1))…`. A sequence `B` is in the image iff
/// `B(π⁻¹(i)) = A(i)` for some member `A`, so the constraint `B(k) = b`
/// becomes `A(π(k)) = b`.
#[derive(Debug, Clone)]
pub struct ConjugatedClass {
    pi: ScanMapRef,
    inner: ClassRef,
}

impl ConjugatedClass {
    pub fn new(pi: ScanMapRef, inner: ClassRef) -> Self {
        ConjugatedClass { pi, inner }
    }

    fn pull_back(&self, p: &Pattern) -> Pattern {
        Pattern(p.iter().map(|(k, b)| (self.pi.position(k), b)).collect())
    }
}

impl ClosedClass for ConjugatedClass {
    fn covers(&self, pattern: &Pattern, stage: usize) -> bool {
        self.inner.covers(&self.pull_back(pattern), stage)
    }

    fn cover_stage(&self, pattern: &Pattern, max_stage: usize) -> Option<usize> {
        self.inner.cover_stage(&self.pull_back(pattern), max_stage)
    }

    fn describe(&self) -> String {
        format!("image({}, {})", self.pi.describe(), self.inner.describe())
    }
}

/// Explicit conjugation of a staged class: each enumerated `[w]` becomes the
/// union of the cylinders of length `max π⁻¹(0..|w|) + 1` agreeing with `w`
/// at positions `π⁻¹(i)`. `pi` must answer inverses.
pub fn conjugate_class(pi: &ScanMapRef, cls: &StagedClass) -> StagedClass {
    let stages = cls
        .stages()
        .iter()
        .map(|words| {
            let mut out = Vec::new();
            for w in words {
                let moved: Vec<(usize, bool)> =
                    w.iter().enumerate().map(|(i, b)| (pi.inverse(i).expect("permutation inverse"), b)).collect();
                let depth = moved.iter().map(|&(k, _)| k + 1).max().unwrap_or(0);
                let fixed: BTreeMap<usize, bool> = moved.into_iter().collect();
                let free: Vec<usize> = (0..depth).filter(|k| !fixed.contains_key(k)).collect();
                assert!(free.len() < 24, "conjugated cylinder too wide to list");
                for fill in 0u64..(1u64 << free.len()) {
                    let mut bits = vec![false; depth];
                    for (&k, &b) in &fixed {
                        bits[k] = b;
                    }
                    for (j, &k) in free.iter().enumerate() {
                        bits[k] = (fill >> (free.len() - 1 - j)) & 1 == 1;
                    }
                    out.push(Word::from_bits(bits));
                }
            }
            out.sort();
            out
        })
        .collect();
    StagedClass::new(stages)
}
