use serde::{Deserialize, Serialize};

/// Size caps for the exhaustive searches. Exceeding a cap is reported as
/// [`Error::SizeLimit`](crate::Error::SizeLimit), never truncated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub independence_max_n: usize,
    pub canonical_max_n: usize,
    pub automorphism_max_n: usize,
    pub pattern_max_len: usize,
    pub uniform_coloring_max_len: usize,
    pub grid_max_n: usize,
    /// Exact rank-division search runs when rows + cols is at most this.
    pub rank_division_max_dim: usize,
    pub rank_division_max_k: usize,
    pub exact_tww_max_n: usize,
    pub enumerate_max_m: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            independence_max_n: 64,
            canonical_max_n: 10,
            automorphism_max_n: 10,
            pattern_max_len: 10,
            uniform_coloring_max_len: 4,
            grid_max_n: 64,
            rank_division_max_dim: 48,
            rank_division_max_k: 4,
            exact_tww_max_n: 8,
            enumerate_max_m: 4,
        }
    }
}

pub(crate) fn check(what: &'static str, size: usize, cap: usize) -> crate::Result<()> {
    if size > cap {
        Err(crate::Error::SizeLimit { what, size, cap })
    } else {
        Ok(())
    }
}
