use serde::Serialize;

use super::{Result, SelfOrgError};

/// Assignment of every row to exactly one of `k` clusters.
///
/// Because each row carries a single cluster index, the blocks are
/// disjoint and cover the dataset by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
    #[serde(skip)]
    sizes: Vec<usize>,
}

impl Partition {
    /// Checks index ranges and that every cluster has at least `min_size`
    /// members.
    pub fn new(assignment: Vec<usize>, k: usize, min_size: usize) -> Result<Self> {
        let p = Self::from_assignment(assignment, k)?;
        p.validate(min_size)?;
        Ok(p)
    }

    /// Checks index ranges only; clusters may be empty.
    pub fn from_assignment(assignment: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(SelfOrgError::InvalidPartition(
                "k must be at least 1".into(),
            ));
        }
        let mut sizes = vec![0; k];
        for (row, &c) in assignment.iter().enumerate() {
            if c >= k {
                return Err(SelfOrgError::InvalidPartition(format!(
                    "row {row} assigned to cluster {c}, but k = {k}"
                )));
            }
            sizes[c] += 1;
        }
        Ok(Self {
            assignment,
            k,
            sizes,
        })
    }

    pub fn validate(&self, min_size: usize) -> Result<()> {
        let min_size = min_size.max(1);
        if let Some((c, &size)) = self.sizes.iter().enumerate().find(|(_, &s)| s < min_size) {
            return Err(SelfOrgError::InvalidPartition(format!(
                "cluster {c} has {size} members, minimum is {min_size}"
            )));
        }
        Ok(())
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn cluster_of(&self, row: usize) -> usize {
        self.assignment[row]
    }

    /// Row indices of every cluster, in cluster order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (row, &c) in self.assignment.iter().enumerate() {
            out[c].push(row);
        }
        out
    }

    /// Applies `new_label = mapping[old_label]`; `mapping` must be a
    /// permutation of `0..k`.
    pub fn relabel(&self, mapping: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.k];
        if mapping.len() != self.k
            || mapping
                .iter()
                .any(|&m| m >= self.k || std::mem::replace(&mut seen[m], true))
        {
            return Err(SelfOrgError::InvalidPartition(
                "relabeling is not a permutation".into(),
            ));
        }
        Self::from_assignment(
            self.assignment.iter().map(|&c| mapping[c]).collect(),
            self.k,
        )
    }

    pub(crate) fn move_row(&mut self, row: usize, to: usize) {
        let from = self.assignment[row];
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.assignment[row] = to;
    }
}
