//! Information content, Shannon, Rényi and thermodynamic entropy.
//!
//! Everything here is a pure function of its inputs. Probabilities below
//! [`ZERO_PROBABILITY`] are treated as exact zeros inside the sums, and
//! `0 · log 0` is taken to be `0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Probabilities smaller than this are skipped in entropy sums.
pub const ZERO_PROBABILITY: f64 = 1e-15;

/// Absolute tolerance on `Σ pᵢ = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("probability {0} is outside (0, 1]")]
    InvalidProbability(f64),
    #[error("distribution is empty")]
    EmptyDistribution,
    #[error("negative or non-finite probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("Rényi order {0} is outside the valid domain")]
    InvalidOrder(f64),
    #[error("cannot average entropy over an empty list of distributions")]
    EmptyList,
    #[error("histogram edges must be strictly increasing and number at least 2")]
    InvalidEdges,
    #[error("histogram has {counts} counts for {edges} edges")]
    CountsMismatch { edges: usize, counts: usize },
    #[error("histogram has no observations")]
    EmptyHistogram,
    #[error("unknown log base {0:?} (expected 2, e or 10)")]
    UnknownBase(String),
    #[error("unknown entropy order {0:?} (expected \"shannon\" or a number)")]
    UnknownOrder(String),
}

pub type Result<T> = std::result::Result<T, EntropyError>;

/// Logarithm base; fixes the unit of every entropy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    /// bits
    #[default]
    Two,
    /// nats
    E,
    /// hartleys
    Ten,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
            LogBase::Ten => x.log10(),
        }
    }
}

impl FromStr for LogBase {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2" => Ok(LogBase::Two),
            "e" | "E" => Ok(LogBase::E),
            "10" => Ok(LogBase::Ten),
            other => Err(EntropyError::UnknownBase(other.to_string())),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
            LogBase::Ten => "10",
        })
    }
}

/// Which entropy to measure: Shannon, or Rényi of a given order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EntropyOrder {
    Shannon,
    Renyi(f64),
}

impl EntropyOrder {
    /// Rejects Rényi orders that are negative, non-finite or exactly 1.
    pub fn validate(self) -> Result<Self> {
        match self {
            EntropyOrder::Renyi(alpha) => check_renyi_order(alpha).map(|_| self),
            EntropyOrder::Shannon => Ok(self),
        }
    }

    pub fn entropy(self, d: &DiscreteDistribution, base: LogBase) -> Result<f64> {
        match self {
            EntropyOrder::Shannon => Ok(shannon_entropy(d, base)),
            EntropyOrder::Renyi(alpha) => renyi_entropy(d, alpha, base),
        }
    }
}

impl FromStr for EntropyOrder {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("shannon") {
            return Ok(EntropyOrder::Shannon);
        }
        let alpha: f64 = s
            .parse()
            .map_err(|_| EntropyError::UnknownOrder(s.to_string()))?;
        EntropyOrder::Renyi(alpha).validate()
    }
}

impl fmt::Display for EntropyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyOrder::Shannon => f.write_str("shannon"),
            EntropyOrder::Renyi(alpha) => write!(f, "{alpha}"),
        }
    }
}

/// A normalized probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(EntropyError::EmptyDistribution);
        }
        if let Some((index, &value)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(EntropyError::NegativeProbability { index, value });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(EntropyError::NotNormalized(sum));
        }
        Ok(Self { probs })
    }

    /// Uniform distribution over `n ≥ 1` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(EntropyError::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// Normalizes non-negative counts. The counts are sorted first so the
    /// result depends only on their multiset, which makes entropies of
    /// permuted count vectors bit-identical.
    pub fn from_counts_canonical(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(EntropyError::EmptyHistogram);
        }
        let mut sorted: Vec<u64> = counts.to_vec();
        sorted.sort_unstable();
        let total = total as f64;
        Ok(Self {
            probs: sorted.into_iter().map(|c| c as f64 / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p >= ZERO_PROBABILITY)
    }
}

impl TryFrom<Vec<f64>> for DiscreteDistribution {
    type Error = EntropyError;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

fn check_renyi_order(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 || alpha == 1.0 {
        return Err(EntropyError::InvalidOrder(alpha));
    }
    Ok(())
}

// Entropies are non-negative; rounding can leave -0.0 or -1e-17 behind.
#[inline]
fn non_negative(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// `-log(p)`: the surprise of an outcome with probability `p`.
pub fn info_content(p: f64, base: LogBase) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(EntropyError::InvalidProbability(p));
    }
    if p == 1.0 {
        return Ok(0.0);
    }
    Ok(-base.log(p))
}

/// `-Σ pᵢ log pᵢ`, in `[0, log N]`.
pub fn shannon_entropy(d: &DiscreteDistribution, base: LogBase) -> f64 {
    non_negative(-d.support().map(|p| p * base.log(p)).sum::<f64>())
}

/// `1/(1-α) · log Σ pᵢ^α` for `α ≥ 0, α ≠ 1`.
pub fn renyi_entropy(d: &DiscreteDistribution, alpha: f64, base: LogBase) -> Result<f64> {
    check_renyi_order(alpha)?;
    let power_sum: f64 = d.support().map(|p| p.powf(alpha)).sum();
    Ok(non_negative(base.log(power_sum) / (1.0 - alpha)))
}

/// Rényi entropy through the α-norm: `α/(1-α) · log ‖p‖_α`.
///
/// Same value as [`renyi_entropy`]; kept as a separate route so the two
/// can be checked against each other. Needs `α > 0` since the 0-"norm"
/// has no finite root.
pub fn renyi_entropy_pnorm(d: &DiscreteDistribution, alpha: f64, base: LogBase) -> Result<f64> {
    check_renyi_order(alpha)?;
    if alpha == 0.0 {
        return Err(EntropyError::InvalidOrder(alpha));
    }
    let norm = d
        .support()
        .map(|p| p.powf(alpha))
        .sum::<f64>()
        .powf(1.0 / alpha);
    Ok(non_negative(alpha / (1.0 - alpha) * base.log(norm)))
}

/// Gibbs entropy `-k_B Σ pᵢ ln pᵢ`, in J/K.
pub fn thermodynamic_entropy(d: &DiscreteDistribution) -> f64 {
    BOLTZMANN * shannon_entropy(d, LogBase::E)
}

/// Mean Shannon entropy over a non-empty set of distributions.
pub fn normalized_entropy(ds: &[DiscreteDistribution], base: LogBase) -> Result<f64> {
    if ds.is_empty() {
        return Err(EntropyError::EmptyList);
    }
    let total: f64 = ds.iter().map(|d| shannon_entropy(d, base)).sum();
    Ok(total / ds.len() as f64)
}

/// Entropy of the empirical distribution of `counts` (bin order ignored).
pub fn counts_entropy(counts: &[u64], order: EntropyOrder, base: LogBase) -> Result<f64> {
    order.entropy(&DiscreteDistribution::from_counts_canonical(counts)?, base)
}

/// Equal- or variable-width histogram over a real-valued quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        if edges.len() < 2
            || edges.iter().any(|e| !e.is_finite())
            || edges.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(EntropyError::InvalidEdges);
        }
        if counts.len() != edges.len() - 1 {
            return Err(EntropyError::CountsMismatch {
                edges: edges.len(),
                counts: counts.len(),
            });
        }
        Ok(Self { edges, counts })
    }

    /// `bins` equal-width bins spanning `[low, high]`, all empty.
    pub fn uniform(low: f64, high: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !low.is_finite() || !high.is_finite() || low >= high {
            return Err(EntropyError::InvalidEdges);
        }
        let width = (high - low) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| low + width * i as f64).collect();
        edges.push(high);
        Self::new(edges, vec![0; bins])
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin holding `value`. Bins are half-open `[lo, hi)` except the last,
    /// which is closed; values outside the edges land in the nearest end bin.
    pub fn bin_of(&self, value: f64) -> usize {
        let last = self.counts.len() - 1;
        // First edge strictly greater than value, minus one.
        let upper = self.edges.partition_point(|&e| e <= value);
        upper.saturating_sub(1).min(last)
    }

    /// Records one observation and returns its bin.
    pub fn record(&mut self, value: f64) -> usize {
        let bin = self.bin_of(value);
        self.counts[bin] += 1;
        bin
    }
}

/// `counts[i] / Σ counts`.
pub fn distribution_from_histogram(h: &Histogram) -> Result<DiscreteDistribution> {
    let total = h.total();
    if total == 0 {
        return Err(EntropyError::EmptyHistogram);
    }
    let total = total as f64;
    let probs: Vec<f64> = h.counts.iter().map(|&c| c as f64 / total).collect();
    DiscreteDistribution::new(probs)
}
