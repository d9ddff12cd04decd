//! Finite bit strings.
//!
//! Bits are indexed from 0. A word serializes as an ASCII string over
//! `{0,1}`; the empty word serializes as the empty string.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Upper bound on the length of any word handled by this crate.
pub const MAX_WORD_BITS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid character {0:?} in word (expected '0' or '1')")]
    InvalidChar(char),
    #[error("word of {0} bits exceeds the {MAX_WORD_BITS}-bit cap")]
    TooLong(usize),
}

/// A finite binary string.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: Vec<bool>,
}

impl Word {
    pub fn empty() -> Self {
        Word { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Word { bits }
    }

    /// `n` copies of `bit`.
    pub fn repeat(bit: bool, n: usize) -> Self {
        Word { bits: vec![bit; n] }
    }

    /// The `width` low-order bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .map(|i| {
                let shift = width - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Word { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn pop(&mut self) -> Option<bool> {
        self.bits.pop()
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn truncate(&mut self, n: usize) {
        self.bits.truncate(n);
    }

    /// `self` followed by `bit`.
    pub fn child(&self, bit: bool) -> Word {
        let mut bits = Vec::with_capacity(self.bits.len() + 1);
        bits.extend_from_slice(&self.bits);
        bits.push(bit);
        Word { bits }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend_from(other);
        w
    }

    /// The first `n` bits (the whole word if `n >= len`).
    pub fn prefix(&self, n: usize) -> Word {
        Word { bits: self.bits[..n.min(self.bits.len())].to_vec() }
    }

    /// Bits from position `n` on.
    pub fn suffix_from(&self, n: usize) -> Word {
        Word { bits: self.bits[n.min(self.bits.len())..].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// Neither word is a prefix of the other.
    pub fn is_incompatible_with(&self, other: &Word) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// Copy with bit `i` inverted.
    pub fn flipped(&self, i: usize) -> Word {
        let mut w = self.clone();
        w.bits[i] = !w.bits[i];
        w
    }

    /// All words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word> {
        assert!(n < 64, "exhaustive enumeration limited to lengths below 64");
        (0..(1u64 << n)).map(move |v| Word::from_u64(v, n))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_WORD_BITS {
            return Err(WordError::TooLong(s.len()));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(WordError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word { bits })
    }
}

impl From<&[bool]> for Word {
    fn from(bits: &[bool]) -> Self {
        Word { bits: bits.to_vec() }
    }
}

impl FromIterator<bool> for Word {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Word { bits: iter.into_iter().collect() }
    }
}

/// Parse a word literal, panicking on malformed input. Test and catalog helper.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_has_length_zero() {
        let e = Word::empty();
        assert_eq!(e.len(), 0);
        assert_eq!(e.bit(0), None);
        assert_eq!(e.to_string(), "");
        assert_eq!("".parse::<Word>().unwrap(), e);
    }

    #[test]
    fn zero_based_indexing() {
        let x = w("0110");
        assert_eq!(x.bit(0), Some(false));
        assert_eq!(x.bit(1), Some(true));
        assert_eq!(x.bit(3), Some(false));
        assert_eq!(x.bit(4), None);
    }

    #[test]
    fn prefix_relations() {
        assert!(w("01").is_prefix_of(&w("0110")));
        assert!(Word::empty().is_prefix_of(&w("1")));
        assert!(!w("1").is_prefix_of(&w("01")));
        assert!(w("00").is_incompatible_with(&w("01")));
        assert!(!w("0").is_incompatible_with(&w("01")));
    }

    #[test]
    fn rejects_bad_chars() {
        assert_eq!("01a".parse::<Word>(), Err(WordError::InvalidChar('a')));
    }

    #[test]
    fn from_u64_msb_first() {
        assert_eq!(Word::from_u64(0b101, 3), w("101"));
        assert_eq!(Word::from_u64(1, 4), w("0001"));
        assert_eq!(Word::all_of_length(2).collect::<Vec<_>>(), vec![w("00"), w("01"), w("10"), w("11")]);
    }
}
