use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    check_feasible, EntropyObjective, EntropyObjectiveConfig, Partition, Result, SelfOrgError,
};
use crate::dataio::Dataset;
use crate::trace::{RunTrace, TraceKind, TraceRecord};

/// Random draws a mutation makes before giving up on finding a legal move.
pub const MAX_MUTATION_DRAWS: usize = 100;

/// Rows sampled by a guided move; the most surprising one is moved.
const GUIDED_CANDIDATES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaConfig {
    pub population: usize,
    /// Number of generations.
    pub iterations: usize,
    pub mutation_moves_per_child: usize,
    pub tournament_size: usize,
    pub seed: u64,
    /// Replace half of the random moves with information-guided ones.
    pub guided_mutation: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 32,
            iterations: 10_000,
            mutation_moves_per_child: 1,
            tournament_size: 3,
            seed: 0,
            guided_mutation: false,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SelfOrgError::InvalidConfig(m));
        if self.population < 2 {
            return bad(format!(
                "population must be at least 2, got {}",
                self.population
            ));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population {
            return bad(format!(
                "tournament size {} must be in 1..={}",
                self.tournament_size, self.population
            ));
        }
        if self.mutation_moves_per_child == 0 {
            return bad("mutation_moves_per_child must be at least 1".into());
        }
        if self.iterations == 0 {
            return bad("iterations must be at least 1".into());
        }
        Ok(())
    }
}

/// Best objective after a generation (generation 0 is the initial population).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_objective: f64,
}

impl TraceRecord for GenerationRecord {
    fn fields(&self) -> Vec<String> {
        vec![self.generation.to_string(), self.best_objective.to_string()]
    }
}

/// CSV columns: `generation, best_objective`.
pub type SelfOrgTrace = RunTrace<GenerationRecord>;

#[derive(Debug, Clone)]
pub struct SelfOrgResult {
    pub partition: Partition,
    pub objective: f64,
    /// Best objective among the random initial partitions.
    pub initial_objective: f64,
    pub trace: SelfOrgTrace,
}

/// A uniformly shuffled partition in which every cluster gets at least
/// `min_size` rows; the remaining rows pick clusters uniformly.
pub fn random_partition<R: Rng>(
    n: usize,
    k: usize,
    min_size: usize,
    rng: &mut R,
) -> Result<Partition> {
    check_feasible(n, k, min_size)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut assignment = vec![0; n];
    for (slot, &row) in order.iter().enumerate() {
        assignment[row] = if slot < k * min_size {
            slot % k
        } else {
            rng.random_range(0..k)
        };
    }
    Partition::new(assignment, k, min_size)
}

fn movable(p: &Partition, min_size: usize) -> bool {
    p.k() >= 2 && p.sizes().iter().any(|&s| s > min_size)
}

fn draw_movable_row<R: Rng>(p: &Partition, min_size: usize, rng: &mut R) -> Option<usize> {
    (0..MAX_MUTATION_DRAWS)
        .map(|_| rng.random_range(0..p.len()))
        .find(|&row| p.sizes()[p.cluster_of(row)] > min_size)
}

fn mutate_in_place<R: Rng>(p: &mut Partition, min_size: usize, rng: &mut R) {
    if !movable(p, min_size) {
        return;
    }
    if let Some(row) = draw_movable_row(p, min_size, rng) {
        let from = p.cluster_of(row);
        let mut to = rng.random_range(0..p.k() - 1);
        if to >= from {
            to += 1;
        }
        p.move_row(row, to);
    }
}

/// Moves one random row to a different random cluster, never shrinking
/// the donor below `min_size`. Returns the input unchanged when no legal
/// move exists.
pub fn mutate<R: Rng>(p: &Partition, rng: &mut R, min_size: usize) -> Partition {
    let mut out = p.clone();
    mutate_in_place(&mut out, min_size, rng);
    out
}

/// Moves a high-information row to the cluster where it would carry the
/// least information.
///
/// A row's information content in cluster `c` is `Σ_d -log₂ P_c(bin_d)`,
/// with `P_c` the cluster's empirical bin frequencies. Out of a few
/// randomly sampled movable rows the one with the highest content in its
/// own cluster is moved; the destination minimizes the Laplace-smoothed
/// content `Σ_d -log₂((count + 1) / (size + 1))`.
pub fn guided_mutate<R: Rng>(
    p: &Partition,
    objective: &EntropyObjective,
    rng: &mut R,
    min_size: usize,
) -> Partition {
    let mut out = p.clone();
    guided_in_place(&mut out, objective, min_size, rng);
    out
}

fn guided_in_place<R: Rng>(
    p: &mut Partition,
    objective: &EntropyObjective,
    min_size: usize,
    rng: &mut R,
) {
    if !movable(p, min_size) {
        return;
    }
    let table = objective.count_table(p);
    let dim = objective.dim();
    let own_info = |row: usize| -> f64 {
        let c = p.cluster_of(row);
        let size = p.sizes()[c] as f64;
        (0..dim)
            .map(|d| -(table.get(c, d, objective.code(row, d)) as f64 / size).log2())
            .sum()
    };
    let mut chosen: Option<(usize, f64)> = None;
    for _ in 0..GUIDED_CANDIDATES {
        let Some(row) = draw_movable_row(p, min_size, rng) else {
            break;
        };
        let info = own_info(row);
        if chosen.is_none_or(|(_, best)| info > best) {
            chosen = Some((row, info));
        }
    }
    let Some((row, _)) = chosen else {
        return;
    };
    let from = p.cluster_of(row);
    let dest = (0..p.k())
        .filter(|&c| c != from)
        .map(|c| {
            let size = p.sizes()[c] as f64 + 1.0;
            let info: f64 = (0..dim)
                .map(|d| -((table.get(c, d, objective.code(row, d)) as f64 + 1.0) / size).log2())
                .sum();
            (c, info)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, _)| c);
    if let Some(to) = dest {
        p.move_row(row, to);
    }
}

fn tournament<R: Rng>(population: &[(Partition, f64)], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..population.len());
    for _ in 1..size {
        let other = rng.random_range(0..population.len());
        if population[other].1 < population[best].1 {
            best = other;
        }
    }
    best
}

/// Searches for the partition of `ds` into `k` clusters with minimal
/// [`partition_entropy`](super::partition_entropy).
///
/// Elitist (μ+λ) scheme: each generation breeds `population` children from
/// tournament-selected parents by mutation, then keeps the best
/// `population` of parents and children. Children are placed ahead of
/// parents before the stable sort, so on equal objective the child
/// survives and the search can drift across plateaus. The trace records
/// the best objective after every generation and never increases.
pub fn entropic_self_organize(
    ds: &Dataset,
    k: usize,
    obj: &EntropyObjectiveConfig,
    ga: &GaConfig,
) -> Result<SelfOrgResult> {
    ga.validate()?;
    obj.validate()?;
    let min_size = obj.min_cluster_size;
    check_feasible(ds.len(), k, min_size)?;
    let started = Instant::now();
    let objective = EntropyObjective::new(ds, *obj)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ga.seed);

    let mut population = Vec::with_capacity(2 * ga.population);
    for _ in 0..ga.population {
        let p = random_partition(ds.len(), k, min_size, &mut rng)?;
        let score = objective.evaluate(&p);
        population.push((p, score));
    }
    population.sort_by(|a, b| a.1.total_cmp(&b.1));
    let initial_objective = population[0].1;

    let mut trace = RunTrace::new(
        TraceKind::SelfOrg,
        vec!["generation".into(), "best_objective".into()],
        ga.seed,
    );
    trace.echo("k", k);
    trace.echo("rows", ds.len());
    trace.echo("bins_per_dim", obj.bins_per_dim);
    trace.echo("order", obj.order);
    trace.echo("base", obj.base);
    trace.echo("min_cluster_size", min_size);
    trace.echo("population", ga.population);
    trace.echo("iterations", ga.iterations);
    trace.echo("mutation_moves_per_child", ga.mutation_moves_per_child);
    trace.echo("tournament_size", ga.tournament_size);
    trace.echo("guided_mutation", ga.guided_mutation);
    trace.push(GenerationRecord {
        generation: 0,
        best_objective: initial_objective,
    });

    let mut merged = Vec::with_capacity(2 * ga.population);
    for generation in 1..=ga.iterations {
        for _ in 0..ga.population {
            let parent = tournament(&population, ga.tournament_size, &mut rng);
            let mut child = population[parent].0.clone();
            for _ in 0..ga.mutation_moves_per_child {
                if ga.guided_mutation && rng.random_bool(0.5) {
                    guided_in_place(&mut child, &objective, min_size, &mut rng);
                } else {
                    mutate_in_place(&mut child, min_size, &mut rng);
                }
            }
            let score = objective.evaluate(&child);
            merged.push((child, score));
        }
        merged.append(&mut population);
        merged.sort_by(|a, b| a.1.total_cmp(&b.1));
        merged.truncate(ga.population);
        std::mem::swap(&mut population, &mut merged);
        trace.push(GenerationRecord {
            generation,
            best_objective: population[0].1,
        });
    }

    let (partition, objective) = population.swap_remove(0);
    trace.metadata.duration_secs = started.elapsed().as_secs_f64();
    Ok(SelfOrgResult {
        partition,
        objective,
        initial_objective,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutate_respects_minimum_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut p = Partition::new(vec![0, 0, 1, 1, 1, 1, 1], 2, 2).unwrap();
        for _ in 0..500 {
            p = mutate(&p, &mut rng, 2);
            assert!(p.sizes().iter().all(|&s| s >= 2));
        }
    }

    #[test]
    fn mutate_without_legal_move_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Partition::new(vec![0, 1, 0, 1], 2, 2).unwrap();
        assert_eq!(mutate(&p, &mut rng, 2), p);
        let single = Partition::new(vec![0; 4], 1, 2).unwrap();
        assert_eq!(mutate(&single, &mut rng, 2), single);
    }

    #[test]
    fn mutate_changes_exactly_one_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let p = Partition::new(vec![0, 0, 0, 1, 1, 1], 2, 2).unwrap();
        for _ in 0..1000 {
            let q = mutate(&p, &mut rng, 2);
            let changed = p
                .assignment()
                .iter()
                .zip(q.assignment())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(changed, 1);
        }
    }

    #[test]
    fn random_partitions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_partition(9, 4, 2, &mut rng).unwrap();
            p.validate(2).unwrap();
        }
        assert!(matches!(
            random_partition(7, 4, 2, &mut rng),
            Err(SelfOrgError::Infeasible { .. })
        ));
    }

    #[test]
    fn guided_move_sends_outlier_home() {
        // Row 2 sits with the zeros but looks like the ones.
        let ds = Dataset::new(
            vec![
                vec![0.0],
                vec![0.0],
                vec![1.0],
                vec![1.0],
                vec![1.0],
                vec![0.0],
            ],
            None,
        )
        .unwrap();
        let obj = EntropyObjective::new(
            &ds,
            EntropyObjectiveConfig {
                bins_per_dim: 2,
                ..Default::default()
            },
        )
        .unwrap();
        let p = Partition::new(vec![0, 0, 0, 1, 1, 1], 2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut moved_outlier = false;
        for _ in 0..50 {
            let q = guided_mutate(&p, &obj, &mut rng, 2);
            assert!(q.sizes().iter().all(|&s| s >= 2));
            moved_outlier |= q.cluster_of(2) == 1;
        }
        assert!(moved_outlier);
    }

    #[test]
    fn config_validation() {
        let ok = GaConfig::default();
        assert!(ok.validate().is_ok());
        assert!(GaConfig {
            population: 1,
            ..ok
        }
        .validate()
        .is_err());
        assert!(GaConfig {
            tournament_size: 40,
            ..ok
        }
        .validate()
        .is_err());
        assert!(GaConfig {
            mutation_moves_per_child: 0,
            ..ok
        }
        .validate()
        .is_err());
    }
}
