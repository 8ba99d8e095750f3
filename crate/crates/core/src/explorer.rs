//! An agent that wanders a height field and steers toward the heights it
//! has visited least, driving the histogram of its `z` positions toward
//! uniform.
//!
//! The agent moves on a grid of compass steps `(±ε_x | 0, ±ε_y | 0)`,
//! clamped to the surface bounds. Every realized height is recorded in an
//! equal-width histogram over `z ∈ [0, 1]`. The entropy policy scores each
//! candidate move by the entropy the histogram would have after recording
//! that move's height and takes a best one; the random-walk policy picks a
//! candidate uniformly.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::entropy::{
    counts_entropy, distribution_from_histogram, shannon_entropy, DiscreteDistribution,
    EntropyError, EntropyOrder, Histogram, LogBase,
};
use crate::trace::{RunTrace, TraceKind, TraceRecord};

/// Grid resolution used to check a surface stays within `[0, 1]`.
const RANGE_CHECK_GRID: usize = 101;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExploreError {
    #[error("bounds must satisfy x_min < x_max and y_min < y_max")]
    InvalidBounds,
    #[error("surface {surface} leaves [0, 1] at ({x}, {y}): z = {z}")]
    OutOfRange {
        surface: SurfaceId,
        x: f64,
        y: f64,
        z: f64,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown surface {0:?} (expected 1 or 2)")]
    UnknownSurface(String),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
}

pub type Result<T> = std::result::Result<T, ExploreError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceId {
    /// `z = exp(-(x² + y²))`
    S1,
    /// `z = ¼ · exp(-((x/10)² + (y/10)²)) · (cos(πy/2) + sin(πx/2) + 2)`
    S2,
}

impl SurfaceId {
    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            SurfaceId::S1 => (-(x * x + y * y)).exp(),
            SurfaceId::S2 => {
                let (u, v) = (x / 10.0, y / 10.0);
                0.25 * (-(u * u + v * v)).exp()
                    * ((FRAC_PI_2 * y).cos() + (FRAC_PI_2 * x).sin() + 2.0)
            }
        }
    }

    pub fn default_bounds(self) -> Bounds {
        let r = match self {
            SurfaceId::S1 => 2.0,
            SurfaceId::S2 => 10.0,
        };
        Bounds {
            x_min: -r,
            x_max: r,
            y_min: -r,
            y_max: r,
        }
    }
}

impl FromStr for SurfaceId {
    type Err = ExploreError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "S1" | "s1" => Ok(SurfaceId::S1),
            "2" | "S2" | "s2" => Ok(SurfaceId::S2),
            other => Err(ExploreError::UnknownSurface(other.to_string())),
        }
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceId::S1 => "S1",
            SurfaceId::S2 => "S2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if finite && self.x_min < self.x_max && self.y_min < self.y_max {
            Ok(())
        } else {
            Err(ExploreError::InvalidBounds)
        }
    }

    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        (self.x_min..=self.x_max).contains(&x) && (self.y_min..=self.y_max).contains(&y)
    }

    pub fn clamp(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            x.clamp(self.x_min, self.x_max),
            y.clamp(self.y_min, self.y_max),
        )
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Surface {
    pub id: SurfaceId,
    pub bounds: Bounds,
}

impl Surface {
    /// Validates the bounds and checks `z ∈ [0, 1]` on a grid over them.
    pub fn new(id: SurfaceId, bounds: Bounds) -> Result<Self> {
        bounds.validate()?;
        let last = (RANGE_CHECK_GRID - 1) as f64;
        for i in 0..RANGE_CHECK_GRID {
            let x = bounds.x_min + (bounds.x_max - bounds.x_min) * i as f64 / last;
            for j in 0..RANGE_CHECK_GRID {
                let y = bounds.y_min + (bounds.y_max - bounds.y_min) * j as f64 / last;
                let z = id.eval(x, y);
                if !(0.0..=1.0).contains(&z) {
                    return Err(ExploreError::OutOfRange {
                        surface: id,
                        x,
                        y,
                        z,
                    });
                }
            }
        }
        Ok(Self { id, bounds })
    }

    pub fn with_default_bounds(id: SurfaceId) -> Self {
        Self::new(id, id.default_bounds()).expect("default bounds are valid")
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.id.eval(x, y)
    }
}

/// Height of surface `id` at `(x, y)`; defined on the whole plane.
pub fn surface_eval(surface: &Surface, x: f64, y: f64) -> f64 {
    surface.eval(x, y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentState {
    pub position: (f64, f64),
    pub bounds: Bounds,
    pub epsilon: (f64, f64),
    pub histogram: Histogram,
    /// Number of recorded steps; equals the histogram total.
    pub t: u64,
}

impl AgentState {
    pub fn new(
        start: (f64, f64),
        bounds: Bounds,
        epsilon: (f64, f64),
        bins: usize,
    ) -> Result<Self> {
        bounds.validate()?;
        if !bounds.contains(start) {
            return Err(ExploreError::InvalidConfig(format!(
                "start {start:?} lies outside the bounds"
            )));
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !(positive(epsilon.0) && positive(epsilon.1)) {
            return Err(ExploreError::InvalidConfig(format!(
                "step sizes must be positive, got {epsilon:?}"
            )));
        }
        if bins < 2 {
            return Err(ExploreError::InvalidConfig(format!(
                "need at least 2 bins, got {bins}"
            )));
        }
        Ok(Self {
            position: start,
            bounds,
            epsilon,
            histogram: Histogram::uniform(0.0, 1.0, bins)?,
            t: 0,
        })
    }

    pub fn distribution(&self) -> Result<DiscreteDistribution> {
        Ok(distribution_from_histogram(&self.histogram)?)
    }

    /// Shannon entropy of the visited-height distribution, in bits; 0 before
    /// the first step.
    pub fn shannon_bits(&self) -> f64 {
        match distribution_from_histogram(&self.histogram) {
            Ok(d) => shannon_entropy(&d, LogBase::Two),
            Err(_) => 0.0,
        }
    }

    fn advance(&mut self, (dx, dy): (f64, f64), surface: &Surface) -> f64 {
        let (x, y) = self.position;
        self.position = self.bounds.clamp((x + dx, y + dy));
        let z = surface.eval(self.position.0, self.position.1);
        self.histogram.record(z);
        self.t += 1;
        z
    }

    /// Greedy one-step lookahead: see [`entropy_gain_step`].
    pub fn entropy_gain_step<R: Rng>(
        &mut self,
        surface: &Surface,
        order: EntropyOrder,
        rng: &mut R,
    ) -> Result<f64> {
        let moves = candidate_moves(self);
        let (x, y) = self.position;
        let mut scores = [0.0f64; 8];
        let mut by_bin: Vec<Option<f64>> = vec![None; self.histogram.bins()];
        let mut counts = self.histogram.counts().to_vec();
        for (score, &(dx, dy)) in scores.iter_mut().zip(&moves) {
            let (nx, ny) = self.bounds.clamp((x + dx, y + dy));
            let bin = self.histogram.bin_of(surface.eval(nx, ny));
            *score = match by_bin[bin] {
                Some(s) => s,
                None => {
                    counts[bin] += 1;
                    let s = counts_entropy(&counts, order, LogBase::Two)?;
                    counts[bin] -= 1;
                    by_bin[bin] = Some(s);
                    s
                }
            };
        }
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..moves.len()).filter(|&i| scores[i] == best).collect();
        let choice = *tied
            .choose(rng)
            .expect("at least one candidate attains the maximum");
        debug_assert!(scores.iter().all(|&s| scores[choice] >= s));
        Ok(self.advance(moves[choice], surface))
    }

    pub fn random_walk_step<R: Rng>(&mut self, surface: &Surface, rng: &mut R) -> f64 {
        let moves = candidate_moves(self);
        let choice = *moves.choose(rng).expect("eight candidate moves");
        self.advance(choice, surface)
    }
}

/// The eight compass moves `{-ε_x, 0, +ε_x} × {-ε_y, 0, +ε_y} \ {(0, 0)}`,
/// each shortened so it stops at the boundary instead of crossing it.
pub fn candidate_moves(a: &AgentState) -> [(f64, f64); 8] {
    let (x, y) = a.position;
    let (ex, ey) = a.epsilon;
    let mut out = [(0.0, 0.0); 8];
    let mut i = 0;
    for sx in [-1.0, 0.0, 1.0] {
        for sy in [-1.0, 0.0, 1.0] {
            if sx == 0.0 && sy == 0.0 {
                continue;
            }
            let (nx, ny) = a.bounds.clamp((x + sx * ex, y + sy * ey));
            out[i] = (nx - x, ny - y);
            i += 1;
        }
    }
    out
}

/// Moves to a candidate whose height maximizes the entropy of the updated
/// histogram, breaking exact ties uniformly at random, and records it.
pub fn entropy_gain_step<R: Rng>(
    a: &AgentState,
    surface: &Surface,
    order: EntropyOrder,
    rng: &mut R,
) -> Result<AgentState> {
    let mut next = a.clone();
    next.entropy_gain_step(surface, order, rng)?;
    Ok(next)
}

/// Moves to a uniformly chosen candidate and records it.
pub fn random_walk_step<R: Rng>(a: &AgentState, surface: &Surface, rng: &mut R) -> AgentState {
    let mut next = a.clone();
    next.random_walk_step(surface, rng);
    next
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExploreConfig {
    pub surface: Surface,
    pub start: (f64, f64),
    pub epsilon: (f64, f64),
    pub bins: usize,
    /// Entropy scored by the greedy policy.
    pub order: EntropyOrder,
    /// Random-walk steps taken before the entropy policy starts.
    pub warmup_steps: u64,
    pub total_steps: u64,
    pub seed: u64,
}

impl ExploreConfig {
    /// Defaults: start at the center of the bounds, ε = (0.1, 0.1), 10 bins,
    /// Rényi order 2, 1000 warm-up steps, 100 000 steps in total.
    pub fn new(surface: Surface, seed: u64) -> Self {
        Self {
            surface,
            start: surface.bounds.center(),
            epsilon: (0.1, 0.1),
            bins: 10,
            order: EntropyOrder::Renyi(2.0),
            warmup_steps: 1000,
            total_steps: 100_000,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.order.validate()?;
        if self.total_steps == 0 {
            return Err(ExploreError::InvalidConfig(
                "total_steps must be positive".into(),
            ));
        }
        if self.warmup_steps > self.total_steps {
            return Err(ExploreError::InvalidConfig(format!(
                "warmup_steps {} exceeds total_steps {}",
                self.warmup_steps, self.total_steps
            )));
        }
        AgentState::new(self.start, self.surface.bounds, self.epsilon, self.bins).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExploreRecord {
    pub t: u64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Shannon entropy (bits) of the height histogram after this step.
    pub entropy: f64,
}

impl TraceRecord for ExploreRecord {
    fn fields(&self) -> Vec<String> {
        vec![
            self.t.to_string(),
            self.x.to_string(),
            self.y.to_string(),
            self.z.to_string(),
            self.entropy.to_string(),
        ]
    }
}

/// CSV columns: `t, x, y, z, entropy`.
pub type ExploreTrace = RunTrace<ExploreRecord>;

#[derive(Debug, Clone)]
pub struct ExploreOutcome {
    pub trace: ExploreTrace,
    pub final_state: AgentState,
}

/// Final histogram as written to JSON: `{edges, counts, distribution}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramReport {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub distribution: Vec<f64>,
}

impl ExploreOutcome {
    pub fn final_entropy(&self) -> f64 {
        self.final_state.shannon_bits()
    }

    /// Histogram entropy right after step `t` (0 for `t = 0`).
    pub fn entropy_at(&self, t: u64) -> f64 {
        if t == 0 {
            return 0.0;
        }
        self.trace.records[(t - 1) as usize].entropy
    }

    pub fn histogram_report(&self) -> Result<HistogramReport> {
        let h = &self.final_state.histogram;
        Ok(HistogramReport {
            edges: h.edges().to_vec(),
            counts: h.counts().to_vec(),
            distribution: self.final_state.distribution()?.probs().to_vec(),
        })
    }
}

/// `warmup_steps` random-walk steps followed by entropy-policy steps up to
/// `total_steps`, one trace record per step.
pub fn run_exploration(cfg: &ExploreConfig) -> Result<ExploreOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut agent = AgentState::new(cfg.start, cfg.surface.bounds, cfg.epsilon, cfg.bins)?;
    let mut trace = RunTrace::new(
        TraceKind::Explore,
        ["t", "x", "y", "z", "entropy"].map(String::from).to_vec(),
        cfg.seed,
    );
    trace.echo("surface", cfg.surface.id);
    trace.echo("bounds", format!("{:?}", cfg.surface.bounds));
    trace.echo("start", format!("{:?}", cfg.start));
    trace.echo("epsilon", format!("{:?}", cfg.epsilon));
    trace.echo("bins", cfg.bins);
    trace.echo("order", cfg.order);
    trace.echo("warmup_steps", cfg.warmup_steps);
    trace.echo("total_steps", cfg.total_steps);
    trace.records.reserve(cfg.total_steps as usize);

    for step in 0..cfg.total_steps {
        let z = if step < cfg.warmup_steps {
            agent.random_walk_step(&cfg.surface, &mut rng)
        } else {
            agent.entropy_gain_step(&cfg.surface, cfg.order, &mut rng)?
        };
        trace.push(ExploreRecord {
            t: agent.t,
            x: agent.position.0,
            y: agent.position.1,
            z,
            entropy: agent.shannon_bits(),
        });
    }
    trace.metadata.duration_secs = started.elapsed().as_secs_f64();
    Ok(ExploreOutcome {
        trace,
        final_state: agent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn agent_at(pos: (f64, f64), bins: usize) -> AgentState {
        AgentState::new(pos, SurfaceId::S1.default_bounds(), (0.1, 0.1), bins).unwrap()
    }

    #[test]
    fn surface_values() {
        let s1 = Surface::with_default_bounds(SurfaceId::S1);
        let s2 = Surface::with_default_bounds(SurfaceId::S2);
        assert_eq!(surface_eval(&s1, 0.0, 0.0), 1.0);
        assert_abs_diff_eq!(
            surface_eval(&s1, 1.0, 0.0),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(surface_eval(&s1, 1.0, 0.0), 0.367879, epsilon = 1e-6);
        assert_eq!(surface_eval(&s2, 0.0, 0.0), 0.75);
    }

    #[test]
    fn out_of_range_bounds_rejected() {
        let bad = Bounds {
            x_min: 1.0,
            x_max: 0.0,
            y_min: 0.0,
            y_max: 1.0,
        };
        assert_eq!(
            Surface::new(SurfaceId::S1, bad),
            Err(ExploreError::InvalidBounds)
        );
    }

    #[test]
    fn interior_candidates() {
        let moves = candidate_moves(&agent_at((0.0, 0.0), 10));
        assert_eq!(moves.len(), 8);
        assert!(moves.contains(&(0.1, -0.1)));
        assert!(!moves.contains(&(0.0, 0.0)));
    }

    #[test]
    fn corner_candidates_are_clamped() {
        let a = agent_at((-2.0, -2.0), 10);
        let moves = candidate_moves(&a);
        assert_eq!(moves.len(), 8);
        for (dx, dy) in moves {
            assert!(a.bounds.contains((a.position.0 + dx, a.position.1 + dy)));
        }
        assert!(moves.contains(&(0.0, 0.0)));
        assert!(moves.iter().any(|&(dx, dy)| dx > 0.0 && dy > 0.0));
    }

    #[test]
    fn first_step_from_empty_histogram() {
        let s1 = Surface::with_default_bounds(SurfaceId::S1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = agent_at((1.0, 1.0), 10);
        let next = entropy_gain_step(&a, &s1, EntropyOrder::Renyi(2.0), &mut rng).unwrap();
        assert_eq!(next.t, 1);
        assert_eq!(next.histogram.total(), 1);
        assert_ne!(next.position, a.position);
    }

    #[test]
    fn greedy_prefers_the_empty_bin() {
        // Two bins split at z = 0.5: on S1 that is the circle r² = ln 2.
        // From (0.8, 0) (z ≈ 0.527, bin 1) some moves cross into bin 0.
        let s1 = Surface::with_default_bounds(SurfaceId::S1);
        let mut a = agent_at((0.8, 0.0), 2);
        a.histogram = Histogram::new(vec![0.0, 0.5, 1.0], vec![0, 10]).unwrap();
        // [1, 10] beats [0, 11] for every order.
        let low = counts_entropy(&[1, 10], EntropyOrder::Renyi(2.0), LogBase::Two).unwrap();
        let high = counts_entropy(&[0, 11], EntropyOrder::Renyi(2.0), LogBase::Two).unwrap();
        assert!(low > high);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let next = entropy_gain_step(&a, &s1, EntropyOrder::Renyi(2.0), &mut rng).unwrap();
            assert_eq!(next.histogram.counts(), &[1, 10]);
        }
    }

    #[test]
    fn random_walk_bookkeeping_and_bounds() {
        let s1 = Surface::with_default_bounds(SurfaceId::S1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut a = agent_at((2.0, 2.0), 10);
        for _ in 0..1000 {
            a.random_walk_step(&s1, &mut rng);
            assert!(a.bounds.contains(a.position));
        }
        assert_eq!(a.histogram.total(), 1000);
        assert_eq!(a.t, 1000);
    }

    #[test]
    fn config_validation() {
        let s1 = Surface::with_default_bounds(SurfaceId::S1);
        let cfg = ExploreConfig::new(s1, 0);
        assert!(cfg.validate().is_ok());
        assert!(ExploreConfig {
            warmup_steps: 200_000,
            ..cfg
        }
        .validate()
        .is_err());
        assert!(ExploreConfig { bins: 1, ..cfg }.validate().is_err());
        assert!(ExploreConfig {
            start: (5.0, 0.0),
            ..cfg
        }
        .validate()
        .is_err());
        assert!(ExploreConfig {
            epsilon: (0.0, 0.1),
            ..cfg
        }
        .validate()
        .is_err());
        assert!(ExploreConfig {
            order: EntropyOrder::Renyi(1.0),
            ..cfg
        }
        .validate()
        .is_err());
    }

    #[test]
    fn pure_random_walk_when_warmup_covers_run() {
        let s1 = Surface::with_default_bounds(SurfaceId::S1);
        let cfg = ExploreConfig {
            warmup_steps: 500,
            total_steps: 500,
            ..ExploreConfig::new(s1, 4)
        };
        let out = run_exploration(&cfg).unwrap();
        assert_eq!(out.trace.len(), 500);
        assert_eq!(out.final_state.histogram.total(), 500);
        let report = out.histogram_report().unwrap();
        assert_eq!(report.edges.len(), 11);
        assert_abs_diff_eq!(
            report.distribution.iter().sum::<f64>(),
            1.0,
            epsilon = 1e-12
        );
    }
}
