//! Stage schedules: entry `k` of a roster is inserted once the constructed
//! prefix has length at least `f(k)`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub values: Vec<usize>,
    /// When set, insertions are delayed until the prefix length is a
    /// multiple of this modulus.
    pub landing: Option<usize>,
    /// Id in the builtin catalog, if the schedule comes from there.
    pub builtin: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("schedule is empty")]
    Empty,
    #[error("schedule is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("landing modulus must be positive")]
    ZeroLanding,
    #[error("unknown schedule id {0}")]
    UnknownId(u32),
    #[error("order table never reaches {0}")]
    OrderTooShort(usize),
}

pub const BUILTIN_SCHEDULES: &[(&[usize], Option<usize>)] = &[
    (&[0, 8, 32, 128, 512], None),
    (&[0], None),
    (&[0, 1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024], None),
    (&[0, 8, 32, 128, 512], Some(16)),
];

impl Schedule {
    pub fn new(values: Vec<usize>, landing: Option<usize>) -> Result<Self, ScheduleError> {
        if values.is_empty() {
            return Err(ScheduleError::Empty);
        }
        if let Some(i) = (1..values.len()).find(|&i| values[i] <= values[i - 1]) {
            return Err(ScheduleError::NotIncreasing(i));
        }
        if landing == Some(0) {
            return Err(ScheduleError::ZeroLanding);
        }
        Ok(Schedule { values, landing, builtin: None })
    }

    pub fn builtin(id: u32) -> Result<Self, ScheduleError> {
        let &(values, landing) = BUILTIN_SCHEDULES.get(id as usize).ok_or(ScheduleError::UnknownId(id))?;
        let mut s = Schedule::new(values.to_vec(), landing)?;
        s.builtin = Some(id);
        Ok(s)
    }

    /// The builtin id with the same values and landing set, if any.
    pub fn canonical(mut self) -> Self {
        self.builtin = BUILTIN_SCHEDULES
            .iter()
            .position(|&(v, l)| v == self.values.as_slice() && l == self.landing)
            .map(|i| i as u32);
        self
    }

    pub fn last(&self) -> usize {
        *self.values.last().unwrap()
    }

    /// Whether entry `k` may be inserted at prefix length `len`.
    pub fn ready(&self, k: usize, len: usize) -> bool {
        self.values.get(k).is_some_and(|&f| len >= f) && self.landing.is_none_or(|m| len.is_multiple_of(m))
    }
}

/// Stage lengths from a tabulated order `h`: `f(k)` is the least `n` with
/// `h(n) ≥ k + offset`, pushed up to `f(k-1) + 1` when that is not larger.
pub fn schedule_from_order(h: &[usize], stages: usize, offset: usize) -> Result<Schedule, ScheduleError> {
    let mut values: Vec<usize> = Vec::with_capacity(stages);
    for k in 0..stages {
        let need = k + offset;
        let n = h.iter().position(|&v| v >= need).ok_or(ScheduleError::OrderTooShort(need))?;
        let n = match values.last() {
            Some(&prev) if n <= prev => prev + 1,
            _ => n,
        };
        values.push(n);
    }
    Schedule::new(values, None)
}
