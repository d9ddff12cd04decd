//! Certificates: the advice from which a constructed prefix is replayed.
//!
//! The compact bit form (also the payload of a `CERT` description) is
//!
//! ```text
//! cert     := variant:2 schedule budgets entry* '0'
//! variant  := 00 tmr | 01 tir | 10 pmr | 11 ppr
//! schedule := '1' γ(id+1)
//!           | '0' γ(count) γ(f0+1) γ(f1−f0) … γ(landing+1)      landing 0 = none
//! budgets  := '0' | '1' γ(eval) γ(race)
//! entry    := '1' γ(id+1) tag [pair]
//! tag      := 00 active | 01 excluded | 10 γ(L+1) diverged | 11 γ(len+1) bits adopted
//! pair     := γ(c+1) [γ(i+1) if c > 0]        c = l+1, or 0 when nothing was found
//! ```
//!
//! `γ` is the Elias gamma code. A pair follows only in `tir` certificates,
//! only for roster entries whose rule is an injection without a bound, and
//! only for tags 00 and 10.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::roster::{builtin_entry, UnknownRosterId};
use super::schedule::{Schedule, ScheduleError};
use crate::complexity::code::{BitReader, BitWriter, EndOfInput};
use crate::word::Word;

pub const DEFAULT_EVAL_BUDGET: u64 = 200_000;
pub const DEFAULT_RACE_BUDGET: u64 = 4096;

/// Size bound `c₁·entries + c₂·⌈log₂ n⌉·records + c₃`, where records
/// count divergences, adoptions and (twice) enumeration pairs.
pub const SIZE_C1: usize = 14;
pub const SIZE_C2: usize = 3;
pub const SIZE_C3: usize = 16;

pub const FILE_MAGIC: &[u8; 4] = b"MLCT";
pub const FILE_VERSION: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Total martingales.
    Tmr,
    /// Total injective strategies.
    Tir,
    /// Partial martingales.
    Pmr,
    /// Partial permutation strategies.
    Ppr,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Tmr, Variant::Tir, Variant::Pmr, Variant::Ppr];

    fn code(self) -> u64 {
        match self {
            Variant::Tmr => 0,
            Variant::Tir => 1,
            Variant::Pmr => 2,
            Variant::Ppr => 3,
        }
    }

    fn from_code(c: u64) -> Self {
        Variant::ALL[c as usize]
    }

    pub fn label(self) -> &'static str {
        match self {
            Variant::Tmr => "tmr",
            Variant::Tir => "tir",
            Variant::Pmr => "pmr",
            Variant::Ppr => "ppr",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.label() == s)
            .ok_or_else(|| format!("unknown variant {s:?} (expected tmr, tir, pmr or ppr)"))
    }
}

/// Budgets that influence replayed values and so travel with the certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplayBudgets {
    /// Steps per single evaluation of an adversary term.
    pub eval: u64,
    /// Ticks per totalization race.
    pub race: u64,
}

impl Default for ReplayBudgets {
    fn default() -> Self {
        ReplayBudgets { eval: DEFAULT_EVAL_BUDGET, race: DEFAULT_RACE_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Active,
    /// Not admitted by the variant, invalid scan rule, or zero capital.
    Excluded,
    /// Contributes nothing to evaluations of words of length `≥ at`.
    Diverged {
        at: usize,
    },
    /// The prefix was extended by `extension`, on which the entry diverges.
    Adopted {
        extension: Word,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryRecord {
    pub id: u32,
    pub outcome: Outcome,
    /// Last enumerated `(position, move)` below the horizon, for injections
    /// without a bound in `tir` constructions.
    pub pair: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub variant: Variant,
    pub schedule: Schedule,
    pub budgets: ReplayBudgets,
    pub entries: Vec<EntryRecord>,
    /// Length of the forward construction.
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate bits end early")]
    Truncated,
    #[error("certificate has {0} trailing bits")]
    TrailingBits(usize),
    #[error("value out of range in certificate")]
    Overflow,
    #[error(transparent)]
    UnknownRosterId(#[from] UnknownRosterId),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("bad file magic")]
    BadMagic,
    #[error("unsupported file version {0}")]
    BadVersion(u8),
    #[error("file length does not match header")]
    BadLength,
}

impl From<EndOfInput> for CertificateError {
    fn from(_: EndOfInput) -> Self {
        CertificateError::Truncated
    }
}

fn needs_pair(variant: Variant, id: u32, outcome: &Outcome) -> Result<bool, UnknownRosterId> {
    Ok(variant == Variant::Tir
        && matches!(outcome, Outcome::Active | Outcome::Diverged { .. })
        && builtin_entry(id)?.is_hintless_injection())
}

fn read_usize(r: &mut BitReader) -> Result<usize, CertificateError> {
    let v = r.gamma()?.ok_or(CertificateError::Overflow)?;
    usize::try_from(v - 1).map_err(|_| CertificateError::Overflow)
}

impl Certificate {
    pub fn write_bits(&self, wr: &mut BitWriter) -> Result<(), UnknownRosterId> {
        wr.uint(self.variant.code(), 2);
        match self.schedule.builtin {
            Some(id) => {
                wr.bit(true);
                wr.gamma(u64::from(id) + 1);
            }
            None => {
                wr.bit(false);
                let v = &self.schedule.values;
                wr.gamma(v.len() as u64);
                wr.gamma(v[0] as u64 + 1);
                for i in 1..v.len() {
                    wr.gamma((v[i] - v[i - 1]) as u64);
                }
                wr.gamma(self.schedule.landing.unwrap_or(0) as u64 + 1);
            }
        }
        if self.budgets == ReplayBudgets::default() {
            wr.bit(false);
        } else {
            wr.bit(true);
            wr.gamma(self.budgets.eval.max(1));
            wr.gamma(self.budgets.race.max(1));
        }
        for e in &self.entries {
            wr.bit(true);
            wr.gamma(u64::from(e.id) + 1);
            match &e.outcome {
                Outcome::Active => wr.uint(0, 2),
                Outcome::Excluded => wr.uint(1, 2),
                Outcome::Diverged { at } => {
                    wr.uint(2, 2);
                    wr.gamma(*at as u64 + 1);
                }
                Outcome::Adopted { extension } => {
                    wr.uint(3, 2);
                    wr.gamma(extension.len() as u64 + 1);
                    wr.bits(extension);
                }
            }
            if needs_pair(self.variant, e.id, &e.outcome)? {
                match e.pair {
                    None => wr.gamma(1),
                    Some((i, l)) => {
                        wr.gamma(l as u64 + 2);
                        wr.gamma(i as u64 + 1);
                    }
                }
            }
        }
        wr.bit(false);
        Ok(())
    }

    /// The compact bit form, without the target length.
    pub fn to_bits(&self) -> Result<Word, UnknownRosterId> {
        let mut wr = BitWriter::new();
        self.write_bits(&mut wr)?;
        Ok(wr.finish())
    }

    pub fn bit_len(&self) -> Result<usize, UnknownRosterId> {
        Ok(self.to_bits()?.len())
    }

    /// Parse one certificate from the reader, leaving it just past the end.
    pub fn read_bits(r: &mut BitReader, target: usize) -> Result<Certificate, CertificateError> {
        let variant = Variant::from_code(r.uint(2)?);
        let schedule = if r.bit()? {
            let id = u32::try_from(read_usize(r)?).map_err(|_| CertificateError::Overflow)?;
            Schedule::builtin(id)?
        } else {
            let count = r.gamma()?.ok_or(CertificateError::Overflow)?;
            let mut values = vec![read_usize(r)?];
            for _ in 1..count {
                let delta = usize::try_from(r.gamma()?.ok_or(CertificateError::Overflow)?)
                    .map_err(|_| CertificateError::Overflow)?;
                let next = values.last().unwrap().checked_add(delta).ok_or(CertificateError::Overflow)?;
                values.push(next);
            }
            let landing = read_usize(r)?;
            Schedule::new(values, (landing > 0).then_some(landing))?
        };
        let budgets = if r.bit()? {
            ReplayBudgets {
                eval: r.gamma()?.ok_or(CertificateError::Overflow)?,
                race: r.gamma()?.ok_or(CertificateError::Overflow)?,
            }
        } else {
            ReplayBudgets::default()
        };
        let mut entries = Vec::new();
        while r.bit()? {
            let id = u32::try_from(read_usize(r)?).map_err(|_| CertificateError::Overflow)?;
            let outcome = match r.uint(2)? {
                0 => Outcome::Active,
                1 => Outcome::Excluded,
                2 => Outcome::Diverged { at: read_usize(r)? },
                _ => {
                    let len = read_usize(r)?;
                    Outcome::Adopted { extension: r.bits(len)? }
                }
            };
            let pair = if needs_pair(variant, id, &outcome)? {
                match read_usize(r)? {
                    0 => None,
                    c => Some((read_usize(r)?, c - 1)),
                }
            } else {
                None
            };
            entries.push(EntryRecord { id, outcome, pair });
        }
        Ok(Certificate { variant, schedule, budgets, entries, target })
    }

    /// Parse the compact form; every bit must be consumed.
    pub fn from_bits(bits: &Word, target: usize) -> Result<Certificate, CertificateError> {
        let mut r = BitReader::new(bits);
        let cert = Self::read_bits(&mut r, target)?;
        if !r.at_end() {
            return Err(CertificateError::TrailingBits(bits.len() - r.position()));
        }
        Ok(cert)
    }

    /// The same records with target `n`. Replay to `n` ignores entries
    /// scheduled at or beyond `n` and divergences that land after it.
    pub fn with_target(&self, n: usize) -> Certificate {
        let mut c = self.clone();
        c.target = n;
        c
    }

    /// Number of records carrying a position-sized payload: divergences,
    /// adoptions, and (counted twice) enumeration pairs.
    pub fn log_records(&self) -> usize {
        self.entries
            .iter()
            .map(|e| {
                let o = usize::from(matches!(e.outcome, Outcome::Diverged { .. } | Outcome::Adopted { .. }));
                o + 2 * usize::from(e.pair.is_some())
            })
            .sum()
    }

    pub fn size_bound(&self) -> usize {
        let log_n = (usize::BITS - self.target.max(2).saturating_sub(1).leading_zeros()) as usize;
        SIZE_C1 * self.entries.len() + SIZE_C2 * log_n * self.log_records() + SIZE_C3
    }

    /// File form: magic, version, target (u32 LE), bit length (u32 LE),
    /// then the compact bits packed most significant bit first.
    pub fn to_bytes(&self) -> Result<Vec<u8>, UnknownRosterId> {
        let bits = self.to_bits()?;
        let mut out = Vec::with_capacity(13 + bits.len().div_ceil(8));
        out.extend_from_slice(FILE_MAGIC);
        out.push(FILE_VERSION);
        out.extend_from_slice(&(self.target as u32).to_le_bytes());
        out.extend_from_slice(&(bits.len() as u32).to_le_bytes());
        for chunk in bits.bits().chunks(8) {
            let mut byte = 0u8;
            for (j, &b) in chunk.iter().enumerate() {
                byte |= u8::from(b) << (7 - j);
            }
            out.push(byte);
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Certificate, CertificateError> {
        if bytes.len() < 13 || &bytes[0..4] != FILE_MAGIC {
            return Err(CertificateError::BadMagic);
        }
        if bytes[4] != FILE_VERSION {
            return Err(CertificateError::BadVersion(bytes[4]));
        }
        let target = u32::from_le_bytes(bytes[5..9].try_into().unwrap()) as usize;
        let bit_len = u32::from_le_bytes(bytes[9..13].try_into().unwrap()) as usize;
        let payload = &bytes[13..];
        if payload.len() != bit_len.div_ceil(8) {
            return Err(CertificateError::BadLength);
        }
        let bits: Word = (0..bit_len).map(|i| (payload[i / 8] >> (7 - i % 8)) & 1 == 1).collect();
        Self::from_bits(&bits, target)
    }
}
