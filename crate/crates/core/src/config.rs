//! Resource caps and scan parameters for an analysis run.

use thiserror::Error;

use crate::cohomology::ExactCaps;
use crate::permgroup::DEFAULT_WORD_BUDGET;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0} must be at least 1")]
pub struct ConfigError(pub &'static str);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Largest group that is enumerated element by element.
    pub enum_cap: u64,
    /// Largest subgroup handled by the bar complex.
    pub bar_cap: u64,
    /// Largest number of edge-orbit unions enumerated.
    pub union_cap: u64,
    /// How many levels of invariant subgraphs are analyzed.
    pub subgraph_depth: u32,
    pub seed: u64,
    /// Random elements tried when a group is too large to enumerate.
    pub word_budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            enum_cap: 1_000_000,
            bar_cap: 32,
            union_cap: 4096,
            subgraph_depth: 1,
            seed: 0,
            word_budget: DEFAULT_WORD_BUDGET,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.enum_cap == 0 {
            return Err(ConfigError("enumeration cap"));
        }
        if self.bar_cap == 0 {
            return Err(ConfigError("bar cap"));
        }
        if self.union_cap == 0 {
            return Err(ConfigError("union cap"));
        }
        Ok(())
    }

    pub fn exact_caps(&self) -> ExactCaps {
        ExactCaps {
            enum_cap: self.enum_cap,
            bar_cap: self.bar_cap,
            word_budget: self.word_budget,
            seed: self.seed,
        }
    }
}
