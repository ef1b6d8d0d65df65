use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_SIGNATURES: u64 = 100_000;
pub const DEFAULT_LP_CALLS: u64 = 1_000_000;
pub const LP_ENV: &str = "TROPIC_BUDGET_LP";

/// Work caps for enumeration. Geometry oracle calls are charged as they happen.
#[derive(Debug)]
pub struct Budget {
    pub signatures: u64,
    pub lp_calls: u64,
    used: AtomicU64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_SIGNATURES, DEFAULT_LP_CALLS)
    }
}

impl Clone for Budget {
    fn clone(&self) -> Self {
        Budget::new(self.signatures, self.lp_calls)
    }
}

impl Budget {
    pub fn new(signatures: u64, lp_calls: u64) -> Self {
        Budget { signatures, lp_calls, used: AtomicU64::new(0) }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX, u64::MAX)
    }

    /// Default caps with the LP cap taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var(LP_ENV) {
            b.lp_calls = v.trim().parse().map_err(|_| Error::Input(format!("{LP_ENV}={v:?} is not an integer")))?;
        }
        Ok(b)
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn charge(&self, n: u64) -> Result<()> {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.lp_calls {
            return Err(Error::Budget(format!(
                "more than {} LP calls (raise --budget-lp or {LP_ENV})",
                self.lp_calls
            )));
        }
        Ok(())
    }

    pub fn check_signatures(&self, needed: u128) -> Result<()> {
        if needed > self.signatures as u128 {
            return Err(Error::Budget(format!(
                "{needed} signatures exceed the cap of {} (raise --budget-signatures)",
                self.signatures
            )));
        }
        Ok(())
    }
}
