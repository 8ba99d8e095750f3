//! Entropic self-organization: partition a dataset so that the entropy of
//! each feature within each cluster is as small as possible.
//!
//! The objective ([`partition_entropy`]) discretizes every column into
//! equal-width bins spanning that column's global range, then sums, over
//! clusters, `|c|/n` times the total per-column entropy inside the cluster.
//! [`entropic_self_organize`] searches for a minimizer with an elitist
//! genetic algorithm; [`brute_force_min`] enumerates small instances
//! exhaustively and serves as its oracle.

mod brute;
mod ga;
mod objective;
mod partition;

pub use brute::{brute_force_min, MAX_ENUMERATED_ASSIGNMENTS};
pub use ga::{
    entropic_self_organize, guided_mutate, mutate, random_partition, GaConfig, GenerationRecord,
    SelfOrgResult, SelfOrgTrace, MAX_MUTATION_DRAWS,
};
pub use objective::{partition_entropy, EntropyObjective, EntropyObjectiveConfig};
pub use partition::Partition;

use thiserror::Error;

use crate::entropy::EntropyError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelfOrgError {
    #[error("{n} rows cannot fill {k} clusters of at least {min_size}")]
    Infeasible { n: usize, k: usize, min_size: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{k}^{n} assignments exceed the enumeration limit of {MAX_ENUMERATED_ASSIGNMENTS}")]
    TooLarge { n: usize, k: usize },
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

pub type Result<T> = std::result::Result<T, SelfOrgError>;

pub(crate) fn check_feasible(n: usize, k: usize, min_size: usize) -> Result<()> {
    if k == 0 {
        return Err(SelfOrgError::InvalidConfig("k must be at least 1".into()));
    }
    match k.checked_mul(min_size) {
        Some(needed) if needed <= n => Ok(()),
        _ => Err(SelfOrgError::Infeasible { n, k, min_size }),
    }
}
