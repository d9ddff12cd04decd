//! String ids for martingales, scan rules and sequence sources.
//!
//! ```text
//! martingale := const:<cap> | double_on:<bit> | pattern:<word> | fraction:<bit>:<cap>
//!             | random:<seed> | partial:<word>[,<word>…]:<martingale>
//!             | partial_depth:<n>:<martingale>
//! scan map   := identity | swap_pairs | block_shuffle:<B>:<seed> | affine:<a>:<b>
//!             | listed:<n>[,<n>…] | nohint:<scan map>
//! adaptive   := jump_on_one | revisit:<k>
//! source     := all-zeros | all-ones | alternating | thue-morse | random:<seed>
//!             | periodic:<word> | prefix:<word>
//! ```
//! In `partial:` cutoff lists `-` stands for the empty word.

use std::sync::Arc;

use thiserror::Error;

use crate::capital::Capital;
use crate::martingale::{
    ConstantMartingale, FractionBettor, MartingaleRef, PartialMartingale, PatternBettor, RandomFairMartingale,
};
use crate::source::SequenceSource;
use crate::strategy::{
    Affine, BlockShuffle, Identity, JumpOnOne, Listed, NoHint, Revisit, ScanMapRef, ScanRule, SwapPairs,
};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown id {0:?}")]
    Unknown(String),
    #[error("malformed id {0:?}")]
    Malformed(String),
}

fn malformed(id: &str) -> CatalogError {
    CatalogError::Malformed(id.to_string())
}

fn parse_bit(s: &str, id: &str) -> Result<bool, CatalogError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(malformed(id)),
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, id: &str) -> Result<T, CatalogError> {
    s.parse().map_err(|_| malformed(id))
}

fn parse_word(s: &str, id: &str) -> Result<Word, CatalogError> {
    if s == "-" {
        return Ok(Word::empty());
    }
    s.parse().map_err(|_| malformed(id))
}

pub fn martingale(id: &str) -> Result<MartingaleRef, CatalogError> {
    let (head, rest) = id.split_once(':').unwrap_or((id, ""));
    Ok(match head {
        "const" => Arc::new(ConstantMartingale(parse_num::<Capital>(rest, id)?)),
        "double_on" => Arc::new(PatternBettor::doubler(parse_bit(rest, id)?)),
        "pattern" => {
            let p = parse_word(rest, id)?;
            if p.is_empty() {
                return Err(malformed(id));
            }
            Arc::new(PatternBettor::new(p))
        }
        "fraction" => {
            let (b, f) = rest.split_once(':').ok_or_else(|| malformed(id))?;
            Arc::new(FractionBettor::new(parse_bit(b, id)?, parse_num(f, id)?).ok_or_else(|| malformed(id))?)
        }
        "random" => Arc::new(RandomFairMartingale::new(parse_num(rest, id)?)),
        "partial" => {
            let (cuts, inner) = rest.split_once(':').ok_or_else(|| malformed(id))?;
            let cuts = cuts.split(',').map(|c| parse_word(c, id)).collect::<Result<Vec<_>, _>>()?;
            Arc::new(PartialMartingale::beyond(martingale(inner)?, cuts))
        }
        "partial_depth" => {
            let (d, inner) = rest.split_once(':').ok_or_else(|| malformed(id))?;
            Arc::new(PartialMartingale::to_depth(martingale(inner)?, parse_num(d, id)?))
        }
        _ => return Err(CatalogError::Unknown(id.to_string())),
    })
}

/// A scan map together with whether it is a permutation.
pub fn scan_map(id: &str) -> Result<(ScanMapRef, bool), CatalogError> {
    let (head, rest) = id.split_once(':').unwrap_or((id, ""));
    Ok(match head {
        "identity" => (Arc::new(Identity), true),
        "swap_pairs" => (Arc::new(SwapPairs), true),
        "block_shuffle" => {
            let (b, seed) = rest.split_once(':').ok_or_else(|| malformed(id))?;
            let b: usize = parse_num(b, id)?;
            if b == 0 {
                return Err(malformed(id));
            }
            (Arc::new(BlockShuffle::new(b, parse_num(seed, id)?)), true)
        }
        "affine" => {
            let (a, b) = rest.split_once(':').ok_or_else(|| malformed(id))?;
            let a: usize = parse_num(a, id)?;
            if a == 0 {
                return Err(malformed(id));
            }
            let m = Affine::new(a, parse_num(b, id)?);
            let perm = m.is_permutation();
            (Arc::new(m), perm)
        }
        "listed" => {
            let values = rest.split(',').map(|v| parse_num(v, id)).collect::<Result<Vec<usize>, _>>()?;
            let l = Listed::new(values);
            let perm = l.is_permutation();
            (Arc::new(l), perm)
        }
        "nohint" => (Arc::new(NoHint(scan_map(rest)?.0)), false),
        _ => return Err(CatalogError::Unknown(id.to_string())),
    })
}

/// `"monotonic"`, or a scan map id, wrapped as a permutation when it is one
/// and as an injection otherwise.
pub fn scan_rule(id: &str) -> Result<ScanRule, CatalogError> {
    if id == "monotonic" {
        return Ok(ScanRule::Monotonic);
    }
    let (m, perm) = scan_map(id)?;
    Ok(if perm { ScanRule::Permutation(m) } else { ScanRule::Injection(m) })
}

pub fn adaptive_rule(id: &str) -> Result<ScanRule, CatalogError> {
    let (head, rest) = id.split_once(':').unwrap_or((id, ""));
    Ok(match head {
        "jump_on_one" => ScanRule::Adaptive(Arc::new(JumpOnOne)),
        "revisit" => ScanRule::Adaptive(Arc::new(Revisit { after: parse_num(rest, id)? })),
        _ => return Err(CatalogError::Unknown(id.to_string())),
    })
}

pub fn source(id: &str) -> Result<SequenceSource, CatalogError> {
    let (head, rest) = id.split_once(':').unwrap_or((id, ""));
    Ok(match head {
        "all-zeros" => SequenceSource::all_zeros(),
        "all-ones" => SequenceSource::all_ones(),
        "alternating" => SequenceSource::alternating(),
        "thue-morse" => SequenceSource::thue_morse(),
        "random" => SequenceSource::pseudo_random(parse_num(rest, id)?),
        "periodic" => {
            let p = parse_word(rest, id)?;
            if p.is_empty() {
                return Err(malformed(id));
            }
            SequenceSource::periodic(p)
        }
        "prefix" => SequenceSource::from_prefix(parse_word(rest, id)?),
        _ => return Err(CatalogError::Unknown(id.to_string())),
    })
}

/// Martingale ids used by the suites: every shipped total martingale family.
pub const TOTAL_MARTINGALES: &[&str] = &[
    "const:1",
    "const:3/2",
    "double_on:0",
    "double_on:1",
    "pattern:01",
    "pattern:0011",
    "fraction:0:1/2",
    "fraction:1:1/3",
    "random:1",
    "random:2",
    "random:3",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::martingale::value;
    use crate::word::w;

    #[test]
    fn martingale_ids_round_trip_describe() {
        for id in TOTAL_MARTINGALES {
            assert_eq!(martingale(id).unwrap().describe().split(':').next(), id.split(':').next());
        }
        let p = martingale("partial:1,00:double_on:0").unwrap();
        assert!(!p.declared_total());
        assert!(p.eval(&w("10"), &mut crate::budget::Budget::new(100)).is_err());
        assert_eq!(value(martingale("const:3/2").unwrap().as_ref(), &w("1")).unwrap(), "3/2".parse().unwrap());
    }

    #[test]
    fn rules_classified() {
        assert!(matches!(scan_rule("swap_pairs").unwrap(), ScanRule::Permutation(_)));
        assert!(matches!(scan_rule("affine:2:0").unwrap(), ScanRule::Injection(_)));
        assert!(matches!(scan_rule("affine:1:0").unwrap(), ScanRule::Permutation(_)));
        assert!(matches!(scan_rule("listed:1,0").unwrap(), ScanRule::Permutation(_)));
        assert!(matches!(scan_rule("listed:0,0").unwrap(), ScanRule::Injection(_)));
        assert!(matches!(scan_rule("monotonic").unwrap(), ScanRule::Monotonic));
        assert!(scan_rule("nohint:affine:2:0").unwrap().moves_covering(4).is_none());
        assert!(adaptive_rule("revisit:3").unwrap().is_adaptive());
    }

    #[test]
    fn errors() {
        assert!(matches!(martingale("nope"), Err(CatalogError::Unknown(_))));
        assert!(matches!(martingale("double_on:2"), Err(CatalogError::Malformed(_))));
        assert!(matches!(scan_map("affine:0:1"), Err(CatalogError::Malformed(_))));
        assert!(matches!(source("periodic:"), Err(CatalogError::Malformed(_))));
    }

    #[test]
    fn sources() {
        assert_eq!(source("alternating").unwrap().prefix(5), w("01010"));
        assert_eq!(source("periodic:110").unwrap().prefix(5), w("11011"));
        assert_eq!(source("prefix:11").unwrap().prefix(4), w("1100"));
    }
}
