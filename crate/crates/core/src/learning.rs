//! A probabilistic table learner: the iterative mapping from inputs to
//! outputs, trained by gradient descent on the distance to its targets.
//!
//! Row `i` of the weight matrix scores every candidate output for input `i`;
//! predictions are the row-wise exponential normalization of those scores,
//! so every prediction row is a strictly positive distribution at finite
//! time. The distance `d` is the mean over rows of the squared distance
//! between a prediction row and its one-hot target, and it doubles as the
//! loss being descended.
//!
//! This is a supervised mapping (explicit targets). Overtraining is not
//! guarded against: the learner memorizes its table by construction.
//!
//! Indexing: `predictions[i * N + j]` is the probability that input `i` maps
//! to output `j`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::entropy::{
    normalized_entropy, renyi_entropy, DiscreteDistribution, EntropyError, EntropyOrder, LogBase,
};
use crate::trace::{RunTrace, TraceKind, TraceRecord};

/// Loss below which the mapping counts as converged.
pub const CONVERGED_LOSS: f64 = 1e-6;

/// Loss at which [`train`] stops iterating.
pub const STOP_LOSS: f64 = 1e-12;

/// Maximum number of rate halvings tried within one step.
pub const MAX_HALVINGS: u32 = 20;

/// Rate multiplier applied after every accepted step.
pub const RATE_GROWTH: f64 = 2.0;

/// Upper bound on the effective rate, as a multiple of the base rate.
pub const MAX_RATE_MULTIPLE: f64 = 1e12;

/// Entropies in this module are measured in bits.
pub const BASE: LogBase = LogBase::Two;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LearningError {
    #[error("learner needs at least one input and one output (got {inputs}x{outputs})")]
    EmptyDimensions { inputs: usize, outputs: usize },
    #[error("expected {expected} targets, got {found}")]
    TargetCount { expected: usize, found: usize },
    #[error("target {target} for input {input} is not below {outputs}")]
    TargetOutOfRange {
        input: usize,
        target: usize,
        outputs: usize,
    },
    #[error("learning rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("gradient became non-finite at iteration {0}")]
    NonFiniteGradient(u64),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

pub type Result<T> = std::result::Result<T, LearningError>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnerState {
    num_inputs: usize,
    num_outputs: usize,
    weights: Vec<f64>,
    predictions: Vec<f64>,
    targets: Vec<usize>,
    t: u64,
    rho: f64,
    rate: f64,
}

impl LearnerState {
    /// Builds a learner from explicit weights (row-major, `M × N`).
    pub fn from_weights(
        num_inputs: usize,
        num_outputs: usize,
        weights: Vec<f64>,
        targets: Vec<usize>,
        rho: f64,
    ) -> Result<Self> {
        validate_shape(num_inputs, num_outputs, &targets, rho)?;
        assert_eq!(
            weights.len(),
            num_inputs * num_outputs,
            "weight matrix has the wrong size"
        );
        let predictions = normalize_rows(&weights, num_outputs);
        Ok(Self {
            num_inputs,
            num_outputs,
            weights,
            predictions,
            targets,
            t: 0,
            rho,
            rate: rho,
        })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn predictions(&self) -> &[f64] {
        &self.predictions
    }

    pub fn prediction_row(&self, i: usize) -> &[f64] {
        &self.predictions[i * self.num_outputs..(i + 1) * self.num_outputs]
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Learning rate used for the next step.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn prediction_distributions(&self) -> Result<Vec<DiscreteDistribution>> {
        (0..self.num_inputs)
            .map(|i| Ok(DiscreteDistribution::new(self.prediction_row(i).to_vec())?))
            .collect()
    }

    fn with_weights(&self, weights: Vec<f64>) -> Self {
        let predictions = normalize_rows(&weights, self.num_outputs);
        Self {
            weights,
            predictions,
            targets: self.targets.clone(),
            ..*self
        }
    }
}

fn validate_shape(inputs: usize, outputs: usize, targets: &[usize], rho: f64) -> Result<()> {
    if inputs == 0 || outputs == 0 {
        return Err(LearningError::EmptyDimensions { inputs, outputs });
    }
    if targets.len() != inputs {
        return Err(LearningError::TargetCount {
            expected: inputs,
            found: targets.len(),
        });
    }
    if let Some((input, &target)) = targets.iter().enumerate().find(|(_, &t)| t >= outputs) {
        return Err(LearningError::TargetOutOfRange {
            input,
            target,
            outputs,
        });
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(LearningError::InvalidRate(rho));
    }
    Ok(())
}

fn normalize_rows(weights: &[f64], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(weights.len());
    for row in weights.chunks_exact(n) {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let start = out.len();
        out.extend(row.iter().map(|w| (w - max).exp()));
        let sum: f64 = out[start..].iter().sum();
        out[start..].iter_mut().for_each(|p| *p /= sum);
    }
    out
}

/// Learner with weights drawn uniformly from `[-0.1, 0.1]`.
pub fn init_learner(
    num_inputs: usize,
    num_outputs: usize,
    targets: Vec<usize>,
    rho: f64,
    seed: u64,
) -> Result<LearnerState> {
    validate_shape(num_inputs, num_outputs, &targets, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..num_inputs * num_outputs)
        .map(|_| rng.random_range(-0.1..=0.1))
        .collect();
    LearnerState::from_weights(num_inputs, num_outputs, weights, targets, rho)
}

/// Mean squared distance between prediction rows and one-hot targets.
pub fn loss(state: &LearnerState) -> f64 {
    distance(&state.predictions, &state.targets, state.num_outputs)
}

fn distance(predictions: &[f64], targets: &[usize], n: usize) -> f64 {
    let total: f64 = predictions
        .chunks_exact(n)
        .zip(targets)
        .map(|(row, &target)| {
            row.iter()
                .enumerate()
                .map(|(j, &p)| {
                    let diff = if j == target { p - 1.0 } else { p };
                    diff * diff
                })
                .sum::<f64>()
        })
        .sum();
    total / targets.len() as f64
}

/// Analytic `∂loss/∂weights`, row-major like the weights.
///
/// With `e = p - y`, the chain rule through the normalization gives
/// `∂L/∂w_ik = (2/M) · p_ik · (e_ik - Σ_j e_ij p_ij)`.
pub fn gradient(state: &LearnerState) -> Vec<f64> {
    let n = state.num_outputs;
    let scale = 2.0 / state.num_inputs as f64;
    let mut grad = Vec::with_capacity(state.weights.len());
    for (row, &target) in state.predictions.chunks_exact(n).zip(&state.targets) {
        let err = |j: usize| if j == target { row[j] - 1.0 } else { row[j] };
        let weighted: f64 = (0..n).map(|j| err(j) * row[j]).sum();
        grad.extend((0..n).map(|k| scale * row[k] * (err(k) - weighted)));
    }
    grad
}

/// One gradient-descent update.
///
/// The step is taken at the current effective rate. If it would raise the
/// loss, the rate is halved and the step retried, up to [`MAX_HALVINGS`]
/// times; if every retry fails the weights stay put. An accepted step grows
/// the rate by [`RATE_GROWTH`] for the next one, capped at
/// `rho · MAX_RATE_MULTIPLE`. The loss therefore never increases.
pub fn step(state: &LearnerState) -> Result<LearnerState> {
    let current = loss(state);
    if current == 0.0 {
        return Ok(LearnerState {
            t: state.t + 1,
            ..state.clone()
        });
    }
    let grad = gradient(state);
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(LearningError::NonFiniteGradient(state.t));
    }

    let mut rate = state.rate;
    for _ in 0..=MAX_HALVINGS {
        let weights: Vec<f64> = state
            .weights
            .iter()
            .zip(&grad)
            .map(|(w, g)| w - rate * g)
            .collect();
        let candidate = state.with_weights(weights);
        if loss(&candidate) <= current {
            return Ok(LearnerState {
                t: state.t + 1,
                rate: (rate * RATE_GROWTH).min(state.rho * MAX_RATE_MULTIPLE),
                ..candidate
            });
        }
        rate *= 0.5;
    }
    Ok(LearnerState {
        t: state.t + 1,
        rate,
        ..state.clone()
    })
}

/// Normalized Shannon entropy (mean over rows) or mean per-row Rényi
/// entropy of the prediction table, in bits.
pub fn mapping_entropy(state: &LearnerState, order: EntropyOrder) -> Result<f64> {
    let rows = state.prediction_distributions()?;
    match order {
        EntropyOrder::Shannon => Ok(normalized_entropy(&rows, BASE)?),
        EntropyOrder::Renyi(alpha) => {
            let mut total = 0.0;
            for row in &rows {
                total += renyi_entropy(row, alpha, BASE)?;
            }
            Ok(total / rows.len() as f64)
        }
    }
}

/// One line of a learning trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearningRecord {
    pub t: u64,
    pub loss: f64,
    pub distance: f64,
    pub entropy_shannon: f64,
    /// One value per configured Rényi order, in configuration order.
    pub entropy_renyi: Vec<f64>,
    /// Effective learning rate for the step leaving this state.
    pub rate: f64,
}

impl TraceRecord for LearningRecord {
    fn fields(&self) -> Vec<String> {
        let mut f = vec![
            self.t.to_string(),
            self.loss.to_string(),
            self.distance.to_string(),
            self.entropy_shannon.to_string(),
        ];
        f.extend(self.entropy_renyi.iter().map(f64::to_string));
        f.push(self.rate.to_string());
        f
    }
}

/// CSV columns: `t, loss, distance, entropy_shannon, entropy_renyi_<α>…, rate`.
pub type LearningTrace = RunTrace<LearningRecord>;

pub fn learning_columns(alphas: &[f64]) -> Vec<String> {
    let mut cols: Vec<String> = ["t", "loss", "distance", "entropy_shannon"]
        .into_iter()
        .map(String::from)
        .collect();
    cols.extend(alphas.iter().map(|a| format!("entropy_renyi_{a}")));
    cols.push("rate".into());
    cols
}

fn record(state: &LearnerState, alphas: &[f64]) -> Result<LearningRecord> {
    let d = loss(state);
    Ok(LearningRecord {
        t: state.t,
        loss: d,
        distance: d,
        entropy_shannon: mapping_entropy(state, EntropyOrder::Shannon)?,
        entropy_renyi: alphas
            .iter()
            .map(|&a| mapping_entropy(state, EntropyOrder::Renyi(a)))
            .collect::<Result<_>>()?,
        rate: state.rate,
    })
}

/// Runs [`step`] until the loss drops below [`STOP_LOSS`] or `max_iters`
/// steps have been taken. The trace holds the starting state plus one
/// record per step.
pub fn train(
    state: LearnerState,
    max_iters: u64,
    entropy_alphas: &[f64],
) -> Result<(LearnerState, LearningTrace)> {
    train_until(state, max_iters, entropy_alphas, STOP_LOSS)
}

/// [`train`] with an explicit stopping loss.
pub fn train_until(
    mut state: LearnerState,
    max_iters: u64,
    entropy_alphas: &[f64],
    stop_loss: f64,
) -> Result<(LearnerState, LearningTrace)> {
    for &a in entropy_alphas {
        EntropyOrder::Renyi(a).validate()?;
    }
    let started = Instant::now();
    let mut trace = RunTrace::new(TraceKind::Learning, learning_columns(entropy_alphas), 0);
    trace.echo("inputs", state.num_inputs);
    trace.echo("outputs", state.num_outputs);
    trace.echo("rho", state.rho);
    trace.echo("max_iters", max_iters);
    trace.push(record(&state, entropy_alphas)?);
    let mut iters = 0;
    while iters < max_iters && loss(&state) >= stop_loss {
        state = step(&state)?;
        trace.push(record(&state, entropy_alphas)?);
        iters += 1;
    }
    trace.metadata.duration_secs = started.elapsed().as_secs_f64();
    Ok((state, trace))
}

/// First iteration whose loss is below [`CONVERGED_LOSS`], if any.
pub fn converged_at(trace: &LearningTrace) -> Option<u64> {
    trace
        .records
        .iter()
        .find(|r| r.loss < CONVERGED_LOSS)
        .map(|r| r.t)
}
