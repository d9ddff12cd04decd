//! Bit-level reading and writing, and Elias gamma codes.

use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndOfInput;

/// Gamma code of `x ≥ 1`: `⌊log₂x⌋` zeros, then `x` in binary.
pub fn gamma(x: u64) -> Word {
    assert!(x >= 1, "gamma code is defined for x ≥ 1");
    let width = 64 - x.leading_zeros() as usize;
    let mut w = Word::repeat(false, width - 1);
    w.extend_from(&Word::from_u64(x, width));
    w
}

pub fn gamma_len(x: u64) -> usize {
    assert!(x >= 1);
    2 * (63 - x.leading_zeros() as usize) + 1
}

#[derive(Debug, Clone, Default)]
pub struct BitWriter {
    out: Word,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bit(&mut self, b: bool) {
        self.out.push(b);
    }

    pub fn bits(&mut self, w: &Word) {
        self.out.extend_from(w);
    }

    pub fn uint(&mut self, value: u64, width: usize) {
        self.out.extend_from(&Word::from_u64(value, width));
    }

    pub fn gamma(&mut self, x: u64) {
        self.out.extend_from(&gamma(x));
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out.is_empty()
    }

    pub fn finish(self) -> Word {
        self.out
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    src: &'a Word,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(src: &'a Word) -> Self {
        BitReader { src, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos == self.src.len()
    }

    pub fn bit(&mut self) -> Result<bool, EndOfInput> {
        let b = self.src.bit(self.pos).ok_or(EndOfInput)?;
        self.pos += 1;
        Ok(b)
    }

    pub fn bits(&mut self, n: usize) -> Result<Word, EndOfInput> {
        if self.pos + n > self.src.len() {
            return Err(EndOfInput);
        }
        let w = Word::from_bits(self.src.bits()[self.pos..self.pos + n].to_vec());
        self.pos += n;
        Ok(w)
    }

    pub fn uint(&mut self, width: usize) -> Result<u64, EndOfInput> {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | u64::from(self.bit()?);
        }
        Ok(v)
    }

    /// Gamma-coded value; `None` for codes wider than 64 bits.
    pub fn gamma(&mut self) -> Result<Option<u64>, EndOfInput> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
        }
        if zeros >= 64 {
            self.bits(zeros)?;
            return Ok(None);
        }
        let rest = self.uint(zeros)?;
        Ok(Some((1u64 << zeros) | rest))
    }
}
