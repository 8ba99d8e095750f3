//! Entropy as an optimization target.
//!
//! - [`entropy`]: information content, Shannon, Rényi (direct and through
//!   the α-norm) and thermodynamic entropy, plus histograms.
//! - [`learning`]: a table learner whose prediction entropy collapses as it
//!   converges on its targets.
//! - [`selforg`]: clustering by minimizing within-cluster entropy, with a
//!   genetic search and an exhaustive oracle.
//! - [`dataio`]: CSV datasets, a seeded Gaussian-mixture generator and
//!   label-matched error rates.
//! - [`explorer`]: an agent that maximizes the entropy of the heights it
//!   visits on a surface.
//!
//! Every stochastic routine takes an explicit seed and is bit-reproducible.

pub mod dataio;
pub mod entropy;
pub mod explorer;
pub mod learning;
pub mod selforg;
pub mod trace;

pub use dataio::{error_rate, generate_synthetic, load_csv, Dataset, SyntheticSpec};
pub use entropy::{
    distribution_from_histogram, info_content, normalized_entropy, renyi_entropy,
    renyi_entropy_pnorm, shannon_entropy, thermodynamic_entropy, DiscreteDistribution,
    EntropyOrder, Histogram, LogBase,
};
pub use explorer::{run_exploration, ExploreConfig, Surface, SurfaceId};
pub use learning::{init_learner, train, LearnerState};
pub use selforg::{
    brute_force_min, entropic_self_organize, partition_entropy, EntropyObjectiveConfig, GaConfig,
    Partition,
};
pub use trace::RunTrace;
