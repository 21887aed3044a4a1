//! Explicit caps on brute-force enumeration.
//!
//! Every exhaustive search in the crate asks a [`Guard`] before starting.
//! Exceeding it is an error, never a silent switch to sampling.

use crate::error::{Error, Result};

pub const DEFAULT_LIMIT: u128 = 1_000_000;
pub const ENV_VAR: &str = "LABELFORGE_GUARD";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    limit: u128,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { limit: DEFAULT_LIMIT }
    }
}

impl Guard {
    pub fn new(limit: u128) -> Self {
        Guard { limit }
    }

    /// Reads `LABELFORGE_GUARD`, falling back to the default limit.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENV_VAR) {
            Ok(s) => s
                .trim()
                .parse::<u128>()
                .map(Guard::new)
                .map_err(|_| Error::InvalidParams(format!("{ENV_VAR}={s} is not an integer"))),
            Err(_) => Ok(Guard::default()),
        }
    }

    pub fn limit(&self) -> u128 {
        self.limit
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.limit {
            Err(Error::GuardExceeded {
                needed,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Number of ordered `k`-tuples of distinct elements from `n`.
pub fn falling_factorial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
    }
    Some(acc)
}
