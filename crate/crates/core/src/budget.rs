//! Fitness-evaluation accounting.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Which stage of a run an evaluation is charged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Decomposition,
    Optimization,
}

/// Monotone counter of objective-set evaluations with a hard limit.
///
/// Counters are atomic so that concurrent evaluators can share one budget;
/// a charge either succeeds in full or leaves the counters untouched.
#[derive(Debug)]
pub struct EvaluationBudget {
    limit: u64,
    decomposition: AtomicU64,
    optimization: AtomicU64,
}

impl EvaluationBudget {
    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            decomposition: AtomicU64::new(0),
            optimization: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used_decomposition(&self) -> u64 {
        self.decomposition.load(Ordering::SeqCst)
    }

    pub fn used_optimization(&self) -> u64 {
        self.optimization.load(Ordering::SeqCst)
    }

    pub fn used(&self) -> u64 {
        self.used_decomposition() + self.used_optimization()
    }

    pub fn remaining(&self) -> u64 {
        self.limit.saturating_sub(self.used())
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining() == 0
    }

    /// Charges `n` evaluations to `stage`, or fails without charging anything.
    pub fn charge(&self, stage: Stage, n: u64) -> Result<()> {
        let counter = match stage {
            Stage::Decomposition => &self.decomposition,
            Stage::Optimization => &self.optimization,
        };
        // The total is spread over two counters, so reserve under a CAS loop on
        // the target counter while re-reading the other one.
        loop {
            let mine = counter.load(Ordering::SeqCst);
            let other = match stage {
                Stage::Decomposition => self.optimization.load(Ordering::SeqCst),
                Stage::Optimization => self.decomposition.load(Ordering::SeqCst),
            };
            let used = mine + other;
            if used.checked_add(n).is_none_or(|t| t > self.limit) {
                return Err(Error::BudgetExhausted {
                    used,
                    limit: self.limit,
                });
            }
            if counter
                .compare_exchange(mine, mine + n, Ordering::SeqCst, Ordering::SeqCst)
                .is_ok()
            {
                return Ok(());
            }
        }
    }

    pub fn can_afford(&self, n: u64) -> bool {
        self.remaining() >= n
    }
}
