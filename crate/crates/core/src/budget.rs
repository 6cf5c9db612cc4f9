use serde::{Deserialize, Serialize};

/// Resource ceilings. Element counts are checked as enumeration proceeds;
/// the byte ceiling is an estimate of the KL memo footprint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Whole-group walks (cell enumeration).
    pub max_group_elements: u64,
    /// Elements of a single Bruhat interval or descending search.
    pub max_interval: u64,
    pub max_kl_bytes: u64,
}

impl Budget {
    pub const fn laptop() -> Self {
        Budget {
            max_group_elements: 3_000_000,
            max_interval: 250_000,
            max_kl_bytes: 1_500_000_000,
        }
    }

    pub const fn long() -> Self {
        Budget {
            max_group_elements: 10_000_000,
            max_interval: 10_000_000,
            max_kl_bytes: 4_000_000_000,
        }
    }

    pub const fn stretch() -> Self {
        Budget {
            max_group_elements: u64::MAX,
            max_interval: u64::MAX,
            max_kl_bytes: 4_000_000_000,
        }
    }

    pub const fn unlimited() -> Self {
        Budget {
            max_group_elements: u64::MAX,
            max_interval: u64::MAX,
            max_kl_bytes: u64::MAX,
        }
    }

    /// Same ceilings with both element counts replaced by `n`.
    pub fn with_elements(mut self, n: u64) -> Self {
        self.max_group_elements = n;
        self.max_interval = n;
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::laptop()
    }
}
