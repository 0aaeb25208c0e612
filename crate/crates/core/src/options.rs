use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalars::FactorOptions;

/// Budgets and the seed shared by every randomized search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Options {
    pub seed: u64,
    /// Random candidates tried by splitting and zero-divisor searches.
    pub max_samples: usize,
    /// Largest polynomial degree handed to the factorizer.
    pub degree_ceiling: usize,
    /// Largest number of grid points evaluated by the isomorphism test.
    pub grid_budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: 0, max_samples: 64, degree_ceiling: 64, grid_budget: 4096 }
    }
}

impl Options {
    pub fn with_seed(seed: u64) -> Options {
        Options { seed, ..Options::default() }
    }

    pub fn factor(&self) -> FactorOptions {
        FactorOptions { seed: self.seed, degree_ceiling: self.degree_ceiling }
    }

    /// A generator for one named search; distinct salts give independent streams.
    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}
