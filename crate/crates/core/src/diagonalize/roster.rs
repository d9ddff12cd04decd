//! The public roster catalog: numbered strategies a construction can be
//! asked to defeat. Certificates refer to entries by id only.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::catalog;
use crate::strategy::{ScanRule, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryKind {
    TotalMartingale,
    PartialMartingale,
    TotalInjectiveStrategy,
    PartialPermutationStrategy,
}

impl EntryKind {
    pub fn is_total(self) -> bool {
        matches!(self, EntryKind::TotalMartingale | EntryKind::TotalInjectiveStrategy)
    }

    pub fn label(self) -> &'static str {
        match self {
            EntryKind::TotalMartingale => "total_martingale",
            EntryKind::PartialMartingale => "partial_martingale",
            EntryKind::TotalInjectiveStrategy => "total_injective",
            EntryKind::PartialPermutationStrategy => "partial_permutation",
        }
    }
}

impl fmt::Display for EntryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone)]
pub struct RosterEntry {
    pub id: u32,
    pub kind: EntryKind,
    /// Martingale entries carry the monotonic rule.
    pub strategy: Strategy,
}

impl RosterEntry {
    /// Injection without a usable bound on the moves below a position.
    pub fn is_hintless_injection(&self) -> bool {
        matches!(&self.strategy.rule, ScanRule::Injection(m) if m.moves_covering(1).is_none())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown roster id {0}")]
pub struct UnknownRosterId(pub u32);

use EntryKind::*;

/// `(kind, martingale id, scan rule id)`; the index is the roster id.
pub const BUILTIN_ROSTER: &[(EntryKind, &str, &str)] = &[
    (TotalMartingale, "const:1", "monotonic"),
    (TotalMartingale, "double_on:0", "monotonic"),
    (TotalMartingale, "double_on:1", "monotonic"),
    (TotalMartingale, "pattern:01", "monotonic"),
    (TotalMartingale, "fraction:1:1/2", "monotonic"),
    (TotalMartingale, "random:1", "monotonic"),
    (TotalMartingale, "random:2", "monotonic"),
    (TotalMartingale, "pattern:0011", "monotonic"),
    (TotalInjectiveStrategy, "double_on:0", "swap_pairs"),
    (TotalInjectiveStrategy, "double_on:1", "affine:2:0"),
    (TotalInjectiveStrategy, "pattern:01", "block_shuffle:4:7"),
    (TotalInjectiveStrategy, "random:3", "swap_pairs"),
    (TotalInjectiveStrategy, "fraction:0:1/2", "affine:2:1"),
    (TotalInjectiveStrategy, "double_on:0", "nohint:affine:2:1"),
    (TotalInjectiveStrategy, "double_on:1", "nohint:affine:3:0"),
    (TotalInjectiveStrategy, "pattern:10", "identity"),
    (PartialMartingale, "partial_depth:3:double_on:0", "monotonic"),
    (PartialMartingale, "partial:1:double_on:0", "monotonic"),
    (PartialMartingale, "partial:0:double_on:1", "monotonic"),
    (PartialMartingale, "partial_depth:6:random:5", "monotonic"),
    (PartialMartingale, "partial:11111111:pattern:01", "monotonic"),
    (PartialMartingale, "partial:00:fraction:0:1/2", "monotonic"),
    (PartialMartingale, "partial_depth:40:double_on:1", "monotonic"),
    (PartialMartingale, "partial:01:random:6", "monotonic"),
    (PartialPermutationStrategy, "double_on:0", "swap_pairs"),
    (PartialPermutationStrategy, "partial:1:double_on:0", "swap_pairs"),
    (PartialPermutationStrategy, "double_on:1", "listed:0,0"),
    (PartialPermutationStrategy, "partial_depth:4:double_on:1", "identity"),
    (PartialPermutationStrategy, "random:7", "block_shuffle:4:3"),
    (PartialPermutationStrategy, "partial:0:pattern:01", "swap_pairs"),
    (PartialPermutationStrategy, "pattern:0110", "block_shuffle:4:11"),
    (PartialPermutationStrategy, "partial_depth:300:double_on:0", "identity"),
];

pub fn builtin_entry(id: u32) -> Result<RosterEntry, UnknownRosterId> {
    let &(kind, m, r) = BUILTIN_ROSTER.get(id as usize).ok_or(UnknownRosterId(id))?;
    let d = catalog::martingale(m).expect("builtin martingale id");
    let rule = catalog::scan_rule(r).expect("builtin rule id");
    Ok(RosterEntry { id, kind, strategy: Strategy::new(d, rule) })
}

pub fn builtin_roster(ids: &[u32]) -> Result<Vec<RosterEntry>, UnknownRosterId> {
    ids.iter().map(|&id| builtin_entry(id)).collect()
}

impl FromStr for EntryKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        [TotalMartingale, PartialMartingale, TotalInjectiveStrategy, PartialPermutationStrategy]
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or(())
    }
}
