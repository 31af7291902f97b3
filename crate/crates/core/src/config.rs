//! Resource limits shared by the rewriting engine and the linear oracle.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Maximum rewriting steps in one normal-form computation.
    pub max_steps: u64,
    /// Highest degree examined by the confluence and linear checks.
    pub max_degree: usize,
    /// Largest number of words the linear oracle may span.
    pub max_words: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_steps: 1_000_000,
            max_degree: 6,
            max_words: 200_000,
        }
    }
}
