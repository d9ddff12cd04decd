//! Programs are self-delimiting records:
//!
//! ```text
//! 00 γ(L+1) w            LITERAL: the L bits of w
//! 01 γ(P) p              REPEAT: p repeated, cut to the condition length
//! 10 cert                CERT: a compact certificate replayed to the condition
//! 11                     invalid
//! ```
//!
//! A program is valid when it parses with no bits left over, so no valid
//! program is a proper prefix of another. The condition never appears in
//! the program.

use std::collections::HashSet;

use thiserror::Error;

use super::code::{gamma_len, BitReader};
use crate::budget::Budget;
use crate::diagonalize::{replay_certificate, Certificate};
use crate::word::Word;

/// CERT programs longer than this are not searched by `complexity_upper`.
pub const CERT_SEARCH_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program {
    Literal(Word),
    Repeat(Word),
    Cert(Certificate),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("not a valid program")]
    Invalid,
    #[error("step budget exhausted")]
    OutOfBudget,
}

pub fn parse_program(p: &Word) -> Result<Program, DecodeError> {
    let mut r = BitReader::new(p);
    let program = match r.uint(2).map_err(|_| DecodeError::Invalid)? {
        0 => {
            let len = r.gamma().ok().flatten().ok_or(DecodeError::Invalid)? - 1;
            let len = usize::try_from(len).map_err(|_| DecodeError::Invalid)?;
            Program::Literal(r.bits(len).map_err(|_| DecodeError::Invalid)?)
        }
        1 => {
            let len = r.gamma().ok().flatten().ok_or(DecodeError::Invalid)?;
            let len = usize::try_from(len).map_err(|_| DecodeError::Invalid)?;
            Program::Repeat(r.bits(len).map_err(|_| DecodeError::Invalid)?)
        }
        2 => Program::Cert(Certificate::read_bits(&mut r, 0).map_err(|_| DecodeError::Invalid)?),
        _ => return Err(DecodeError::Invalid),
    };
    if !r.at_end() {
        return Err(DecodeError::Invalid);
    }
    Ok(program)
}

pub fn encode_program(program: &Program) -> Word {
    let mut wr = super::code::BitWriter::new();
    match program {
        Program::Literal(w) => {
            wr.uint(0, 2);
            wr.gamma(w.len() as u64 + 1);
            wr.bits(w);
        }
        Program::Repeat(p) => {
            wr.uint(1, 2);
            wr.gamma(p.len() as u64);
            wr.bits(p);
        }
        Program::Cert(c) => {
            wr.uint(2, 2);
            c.write_bits(&mut wr).expect("certificate refers to known roster ids");
        }
    }
    wr.finish()
}

pub fn literal_len(n: usize) -> usize {
    2 + gamma_len(n as u64 + 1) + n
}

pub fn repeat_len(period: usize) -> usize {
    2 + gamma_len(period as u64) + period
}

/// Run a parsed program. CERT replay is charged `(n+1)·(entries+1)` steps
/// up front.
pub fn run_program(program: &Program, condition: usize, budget: &mut Budget) -> Result<Word, DecodeError> {
    match program {
        Program::Literal(w) => {
            budget.tick(w.len() as u64 + 1).map_err(|_| DecodeError::OutOfBudget)?;
            Ok(w.clone())
        }
        Program::Repeat(p) => {
            budget.tick(condition as u64 + 1).map_err(|_| DecodeError::OutOfBudget)?;
            Ok((0..condition).map(|i| p.bit(i % p.len()).unwrap()).collect())
        }
        Program::Cert(c) => {
            let cost = (condition as u64 + 1).saturating_mul(c.entries.len() as u64 + 1);
            budget.tick(cost).map_err(|_| DecodeError::OutOfBudget)?;
            replay_certificate(&c.with_target(condition), condition).map_err(|_| DecodeError::Invalid)
        }
    }
}

pub fn decode(p: &Word, condition: usize, budget: &mut Budget) -> Result<Word, DecodeError> {
    budget.tick(p.len() as u64 + 1).map_err(|_| DecodeError::OutOfBudget)?;
    run_program(&parse_program(p)?, condition, budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityBound {
    pub word: Word,
    pub condition: usize,
    pub bound: usize,
    pub witness: Word,
}

/// Least period `P` with `w[i] = w[i mod P]`, for nonempty `w`.
fn least_period(w: &Word) -> usize {
    let b = w.bits();
    (1..=b.len()).find(|&p| (p..b.len()).all(|i| b[i] == b[i - p])).unwrap_or(b.len())
}

/// The first program in length-lexicographic order that decodes to `w`,
/// with CERT programs searched only up to `CERT_SEARCH_BITS`. `None` when
/// the budget runs out first.
pub fn complexity_upper(w: &Word, condition: usize, budget: &mut Budget) -> Option<ComplexityBound> {
    let literal = literal_len(w.len());
    let repeat = (w.len() == condition && !w.is_empty()).then(|| least_period(w));
    let best = literal.min(repeat.map_or(usize::MAX, repeat_len));
    for len in 1..=best {
        if len == literal {
            let witness = encode_program(&Program::Literal(w.clone()));
            return Some(ComplexityBound { word: w.clone(), condition, bound: len, witness });
        }
        if let Some(p) = repeat.filter(|&p| repeat_len(p) == len) {
            let witness = encode_program(&Program::Repeat(w.prefix(p)));
            return Some(ComplexityBound { word: w.clone(), condition, bound: len, witness });
        }
        if (3..=CERT_SEARCH_BITS).contains(&len) {
            for tail in Word::all_of_length(len - 2) {
                let p = Word::from_bits(vec![true, false]).concat(&tail);
                budget.tick(1).ok()?;
                let Ok(program @ Program::Cert(_)) = parse_program(&p) else {
                    continue;
                };
                match run_program(&program, condition, budget) {
                    Ok(out) if &out == w => {
                        return Some(ComplexityBound { word: w.clone(), condition, bound: len, witness: p })
                    }
                    Err(DecodeError::OutOfBudget) => return None,
                    _ => {}
                }
            }
        }
    }
    None
}

/// Words of a fixed length first produced by programs of length at most
/// `threshold`, in program order. Restartable by constructing it again.
pub struct LowEnumeration {
    length: usize,
    condition: usize,
    threshold: usize,
    budget: Budget,
    seen: HashSet<Word>,
    program_len: usize,
    programs: Box<dyn Iterator<Item = Word> + Send>,
    truncated: bool,
}

impl std::fmt::Debug for LowEnumeration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LowEnumeration")
            .field("length", &self.length)
            .field("condition", &self.condition)
            .field("threshold", &self.threshold)
            .field("program_len", &self.program_len)
            .field("emitted", &self.seen.len())
            .field("truncated", &self.truncated)
            .finish()
    }
}

impl LowEnumeration {
    /// Whether the budget ran out before every program was tried.
    pub fn truncated(&self) -> bool {
        self.truncated
    }
}

pub fn enumerate_low(length: usize, condition: usize, threshold: usize, budget: Budget) -> LowEnumeration {
    LowEnumeration {
        length,
        condition,
        threshold,
        budget,
        seen: HashSet::new(),
        program_len: 0,
        programs: Box::new(Word::all_of_length(0)),
        truncated: false,
    }
}

impl Iterator for LowEnumeration {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.truncated {
            return None;
        }
        loop {
            let p = match self.programs.next() {
                Some(p) => p,
                None if self.program_len < self.threshold => {
                    self.program_len += 1;
                    self.programs = Box::new(Word::all_of_length(self.program_len));
                    continue;
                }
                None => return None,
            };
            match decode(&p, self.condition, &mut self.budget) {
                Ok(out) if out.len() == self.length && self.seen.insert(out.clone()) => return Some(out),
                Err(DecodeError::OutOfBudget) => {
                    self.truncated = true;
                    return None;
                }
                _ => {}
            }
        }
    }
}

/// Valid programs of length at most `max_len` having a valid proper prefix.
pub fn prefix_violations(max_len: usize) -> Vec<(Word, Word)> {
    let mut valid = HashSet::new();
    let mut out = Vec::new();
    for len in 0..=max_len {
        for p in Word::all_of_length(len) {
            if parse_program(&p).is_ok() {
                if let Some(q) = (0..len).map(|k| p.prefix(k)).find(|q| valid.contains(q)) {
                    out.push((q, p.clone()));
                }
                valid.insert(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonalize::{builtin_roster, run_construction, ConstructionBudgets, Schedule, Variant};
    use crate::word::w;

    #[test]
    fn golden_encodings() {
        assert_eq!(encode_program(&Program::Repeat(w("0"))), w("0110"));
        assert_eq!(encode_program(&Program::Literal(Word::empty())), w("001"));
        assert_eq!(encode_program(&Program::Literal(w("0110"))), w("00001010110"));
        assert_eq!(literal_len(4), 11);
        assert_eq!(repeat_len(1), 4);
    }

    #[test]
    fn decode_examples() {
        let mut b = Budget::unlimited();
        assert_eq!(decode(&w("00001010110"), 99, &mut b), Ok(w("0110")));
        assert_eq!(decode(&w("0110"), 7, &mut b), Ok(w("0000000")));
        assert_eq!(decode(&w("0101010"), 5, &mut b), Ok(w("10101")));
        assert_eq!(decode(&w("11"), 0, &mut b), Err(DecodeError::Invalid));
        assert_eq!(decode(&w("01101"), 0, &mut b), Err(DecodeError::Invalid));
        assert_eq!(decode(&w("0110"), 1000, &mut Budget::new(10)), Err(DecodeError::OutOfBudget));
    }

    #[test]
    fn cert_programs_replay_constructions() {
        let roster = builtin_roster(&[1, 2]).unwrap();
        let schedule = Schedule::new(vec![0, 8], None).unwrap();
        let c = run_construction(&roster, &schedule, Variant::Tmr, ConstructionBudgets::default(), 40).unwrap();
        let p = encode_program(&Program::Cert(c.certificate.clone()));
        for n in [0, 8, 17, 40] {
            assert_eq!(decode(&p, n, &mut Budget::unlimited()), Ok(c.prefix.prefix(n)));
        }
    }

    #[test]
    fn upper_bound_examples() {
        let zeros = Word::repeat(false, 64);
        let b = complexity_upper(&zeros, 64, &mut Budget::unlimited()).unwrap();
        assert_eq!(b.bound, 4);
        assert_eq!(b.witness, w("0110"));
        let empty = complexity_upper(&Word::empty(), 0, &mut Budget::unlimited()).unwrap();
        assert_eq!((empty.bound, empty.witness), (3, w("001")));
        let x = w("0110100110010110");
        let b = complexity_upper(&x, 16, &mut Budget::unlimited()).unwrap();
        assert!(b.bound <= literal_len(16));
        assert_eq!(decode(&b.witness, 16, &mut Budget::unlimited()), Ok(x.clone()));
        assert_eq!(complexity_upper(&x, 16, &mut Budget::new(3)), None);
    }

    #[test]
    fn low_enumeration_examples() {
        assert_eq!(enumerate_low(8, 8, 0, Budget::unlimited()).count(), 0);
        let all: HashSet<Word> = enumerate_low(3, 3, literal_len(3), Budget::unlimited()).collect();
        assert_eq!(all.len(), 8);
        let low: Vec<Word> = enumerate_low(16, 16, 8, Budget::unlimited()).collect();
        assert_eq!(low[0], Word::repeat(false, 16));
        let mut short = enumerate_low(16, 16, 12, Budget::new(50));
        while short.next().is_some() {}
        assert!(short.truncated());
    }

    #[test]
    fn no_prefix_violations_up_to_twelve_bits() {
        assert!(prefix_violations(12).is_empty());
    }
}
