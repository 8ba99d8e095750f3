use super::{
    check_feasible, EntropyObjective, EntropyObjectiveConfig, Partition, Result, SelfOrgError,
};
use crate::dataio::Dataset;

/// Largest `k^n` [`brute_force_min`] will enumerate.
pub const MAX_ENUMERATED_ASSIGNMENTS: u64 = 1 << 22;

/// Exhaustive minimizer of the partition entropy over every assignment of
/// `n` rows to `k` clusters that respects the minimum cluster size. Ties
/// keep the first assignment in odometer order (row 0 is the fastest digit).
pub fn brute_force_min(
    ds: &Dataset,
    k: usize,
    obj: &EntropyObjectiveConfig,
) -> Result<(Partition, f64)> {
    obj.validate()?;
    let n = ds.len();
    check_feasible(n, k, obj.min_cluster_size)?;
    let total = (k as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_ENUMERATED_ASSIGNMENTS)
        .ok_or(SelfOrgError::TooLarge { n, k })?;

    let objective = EntropyObjective::new(ds, *obj)?;
    let mut digits = vec![0usize; n];
    let mut best: Option<(Partition, f64)> = None;
    for _ in 0..total {
        let p = Partition::from_assignment(digits.clone(), k)?;
        if p.sizes().iter().all(|&s| s >= obj.min_cluster_size) {
            let score = objective.evaluate(&p);
            if best.as_ref().is_none_or(|(_, b)| score < *b) {
                best = Some((p, score));
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < k {
                break;
            }
            *d = 0;
        }
    }
    Ok(best.expect("feasibility check guarantees a valid assignment"))
}
