use serde::Serialize;

use super::{Partition, Result, SelfOrgError};
use crate::dataio::Dataset;
use crate::entropy::{counts_entropy, EntropyOrder, Histogram, LogBase};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyObjectiveConfig {
    pub bins_per_dim: usize,
    pub order: EntropyOrder,
    pub base: LogBase,
    pub min_cluster_size: usize,
}

impl Default for EntropyObjectiveConfig {
    fn default() -> Self {
        Self {
            bins_per_dim: 8,
            order: EntropyOrder::Shannon,
            base: LogBase::Two,
            min_cluster_size: 2,
        }
    }
}

impl EntropyObjectiveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bins_per_dim < 2 {
            return Err(SelfOrgError::InvalidConfig(format!(
                "bins_per_dim must be at least 2, got {}",
                self.bins_per_dim
            )));
        }
        if self.min_cluster_size == 0 {
            return Err(SelfOrgError::InvalidConfig(
                "min_cluster_size must be at least 1".into(),
            ));
        }
        self.order.validate()?;
        Ok(())
    }
}

/// A dataset discretized once, ready to score many partitions.
#[derive(Debug, Clone)]
pub struct EntropyObjective {
    n: usize,
    dim: usize,
    bins: usize,
    /// Row-major `n × dim` bin indices.
    codes: Vec<u32>,
    config: EntropyObjectiveConfig,
}

/// Per-cluster, per-column bin counts of a partition.
#[derive(Debug, Clone)]
pub(crate) struct CountTable {
    dim: usize,
    bins: usize,
    counts: Vec<u64>,
}

impl CountTable {
    #[inline]
    pub(crate) fn get(&self, cluster: usize, column: usize, bin: usize) -> u64 {
        self.counts[(cluster * self.dim + column) * self.bins + bin]
    }

    fn column(&self, cluster: usize, column: usize) -> &[u64] {
        let start = (cluster * self.dim + column) * self.bins;
        &self.counts[start..start + self.bins]
    }
}

impl EntropyObjective {
    /// Bins every column into `bins_per_dim` equal-width bins over the
    /// column's global `[min, max]`. Constant columns put every row in bin 0.
    pub fn new(ds: &Dataset, config: EntropyObjectiveConfig) -> Result<Self> {
        config.validate()?;
        let (n, dim, bins) = (ds.len(), ds.dim(), config.bins_per_dim);
        let mut codes = vec![0u32; n * dim];
        for d in 0..dim {
            let (lo, hi) = ds
                .column(d)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            if lo < hi {
                let hist = Histogram::uniform(lo, hi, bins)?;
                for (i, v) in ds.column(d).enumerate() {
                    codes[i * dim + d] = hist.bin_of(v) as u32;
                }
            }
        }
        Ok(Self {
            n,
            dim,
            bins,
            codes,
            config,
        })
    }

    pub fn config(&self) -> &EntropyObjectiveConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub(crate) fn code(&self, row: usize, column: usize) -> usize {
        self.codes[row * self.dim + column] as usize
    }

    pub(crate) fn count_table(&self, p: &Partition) -> CountTable {
        let mut counts = vec![0u64; p.k() * self.dim * self.bins];
        for (row, &c) in p.assignment().iter().enumerate() {
            let codes = &self.codes[row * self.dim..(row + 1) * self.dim];
            for (d, &b) in codes.iter().enumerate() {
                counts[(c * self.dim + d) * self.bins + b as usize] += 1;
            }
        }
        CountTable {
            dim: self.dim,
            bins: self.bins,
            counts,
        }
    }

    /// Scores a partition of the same rows. Does not check cluster sizes.
    ///
    /// Partial sums are sorted before being added so the value depends only
    /// on the multiset of per-cluster histograms: relabeling clusters or
    /// permuting bins yields the identical float.
    pub fn evaluate(&self, p: &Partition) -> f64 {
        debug_assert_eq!(p.len(), self.n);
        let table = self.count_table(p);
        let n = self.n as f64;
        let mut per_cluster = Vec::with_capacity(p.k());
        let mut per_column = Vec::with_capacity(self.dim);
        for (c, &size) in p.sizes().iter().enumerate() {
            if size == 0 {
                continue;
            }
            per_column.clear();
            for d in 0..self.dim {
                let h = counts_entropy(table.column(c, d), self.config.order, self.config.base)
                    .expect("order validated at construction and cluster non-empty");
                per_column.push(h);
            }
            per_column.sort_by(f64::total_cmp);
            let within: f64 = per_column.iter().sum();
            per_cluster.push(size as f64 / n * within);
        }
        per_cluster.sort_by(f64::total_cmp);
        per_cluster.iter().sum()
    }
}

/// Size-weighted sum of within-cluster, per-column entropies.
pub fn partition_entropy(
    ds: &Dataset,
    p: &Partition,
    config: &EntropyObjectiveConfig,
) -> Result<f64> {
    if p.len() != ds.len() {
        return Err(SelfOrgError::InvalidPartition(format!(
            "partition covers {} rows, dataset has {}",
            p.len(),
            ds.len()
        )));
    }
    p.validate(config.min_cluster_size)?;
    Ok(EntropyObjective::new(ds, *config)?.evaluate(p))
}
