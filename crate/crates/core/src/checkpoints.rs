//! Checkpoint sequences `0 = n_0 < n_1 < …` with `n_{k+1} ≥ 2·n_k`.

use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckpointError {
    #[error("checkpoint list is empty")]
    Empty,
    #[error("first checkpoint must be 0, got {0}")]
    NonZeroStart(usize),
    #[error("checkpoints not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("doubling condition n_{{k+1}} >= 2 n_k fails at k = {0}")]
    DoublingViolation(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoints {
    values: Vec<usize>,
}

impl Checkpoints {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Number of intervals `I_k`.
    pub fn interval_count(&self) -> usize {
        self.values.len() - 1
    }

    /// `I_k = [n_k, n_{k+1})`.
    pub fn interval(&self, k: usize) -> Range<usize> {
        self.values[k]..self.values[k + 1]
    }

    pub fn horizon(&self) -> usize {
        *self.values.last().unwrap()
    }
}

pub fn validate_checkpoints(values: &[usize]) -> Result<Checkpoints, CheckpointError> {
    let first = *values.first().ok_or(CheckpointError::Empty)?;
    if first != 0 {
        return Err(CheckpointError::NonZeroStart(first));
    }
    for k in 0..values.len().saturating_sub(1) {
        if values[k + 1] <= values[k] {
            return Err(CheckpointError::NotIncreasing(k));
        }
    }
    // n_0 = 0 makes k = 0 vacuous.
    for k in 1..values.len().saturating_sub(1) {
        if values[k + 1] < 2 * values[k] {
            return Err(CheckpointError::DoublingViolation(k));
        }
    }
    Ok(Checkpoints { values: values.to_vec() })
}
