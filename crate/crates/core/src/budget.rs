//! Step budgets.
//!
//! Partial computations are modeled by step counting: an evaluation that
//! needs more steps than its budget allows reports `OutOfBudget`, and every
//! consumer treats that as divergence. A computation that never halts
//! simply exhausts whatever budget it is given.

/// Environment variable naming the default step budget of the CLI.
pub const BUDGET_ENV: &str = "MLAB_BUDGET";

pub const DEFAULT_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfBudget;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    remaining: u64,
}

impl Budget {
    pub fn new(steps: u64) -> Self {
        Budget { remaining: steps }
    }

    pub fn unlimited() -> Self {
        Budget { remaining: u64::MAX }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Consume `n` steps, failing (and emptying the budget) if fewer remain.
    pub fn tick(&mut self, n: u64) -> Result<(), OutOfBudget> {
        if n > self.remaining {
            self.remaining = 0;
            Err(OutOfBudget)
        } else {
            self.remaining -= n;
            Ok(())
        }
    }

    /// Burn the whole budget: what a non-halting computation does.
    pub fn exhaust(&mut self) -> OutOfBudget {
        self.remaining = 0;
        OutOfBudget
    }

    /// Carve out `1/parts` of what remains as an independent sub-budget.
    pub fn share(&self, parts: usize) -> Budget {
        Budget::new(self.remaining / parts.max(1) as u64)
    }

    /// Charge the steps a sub-budget spent since it was created with `initial` steps.
    pub fn absorb(&mut self, initial: u64, sub: &Budget) {
        let spent = initial - sub.remaining;
        self.remaining = self.remaining.saturating_sub(spent);
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_STEPS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_and_exhaust() {
        let mut b = Budget::new(5);
        assert!(b.tick(3).is_ok());
        assert_eq!(b.remaining(), 2);
        assert_eq!(b.tick(3), Err(OutOfBudget));
        assert_eq!(b.remaining(), 0);
    }

    #[test]
    fn share_and_absorb() {
        let mut b = Budget::new(100);
        let mut sub = b.share(4);
        assert_eq!(sub.remaining(), 25);
        sub.tick(10).unwrap();
        b.absorb(25, &sub);
        assert_eq!(b.remaining(), 90);
    }
}
