//! Datasets: CSV ingestion and export, the seeded Gaussian-mixture
//! generator, and permutation-matched clustering error.
//!
//! CSV files are plain comma-separated decimal numbers with `.` as the
//! decimal separator and LF line endings. An optional header row is
//! skipped on read. When a label column is given it must hold
//! non-negative integers; [`write_csv`] always puts labels last.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::selforg::Partition;

/// Largest `max(k, label count)` accepted by [`error_rate`].
pub const MAX_MATCHED_CLUSTERS: usize = 8;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: expected {expected} columns, found {found}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("dataset is empty")]
    Empty,
    #[error("rows must have at least one feature")]
    NoFeatures,
    #[error("row {row} has {found} features, expected {expected}")]
    InconsistentDimension {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("{labels} labels for {rows} rows")]
    LabelCount { rows: usize, labels: usize },
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("cannot match {0} clusters/labels exhaustively (limit {MAX_MATCHED_CLUSTERS})")]
    TooManyClusters(usize),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DataError>;

/// Real-valued rows of fixed dimensionality, with optional ground-truth
/// labels used only for evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    rows: Vec<Vec<f64>>,
    labels: Option<Vec<usize>>,
}

impl Dataset {
    pub fn new(rows: Vec<Vec<f64>>, labels: Option<Vec<usize>>) -> Result<Self> {
        let first = rows.first().ok_or(DataError::Empty)?;
        let dim = first.len();
        if dim == 0 {
            return Err(DataError::NoFeatures);
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(DataError::InconsistentDimension {
                row,
                expected: dim,
                found: r.len(),
            });
        }
        if let Some(l) = &labels {
            if l.len() != rows.len() {
                return Err(DataError::LabelCount {
                    rows: rows.len(),
                    labels: l.len(),
                });
            }
        }
        Ok(Self { rows, labels })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows[0].len()
    }

    /// Values of feature `d` across all rows.
    pub fn column(&self, d: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[d])
    }
}

pub fn load_csv(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<Dataset> {
    read_csv(File::open(path)?, has_header, label_column)
}

pub fn read_csv<R: io::Read>(
    input: R,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows = Vec::new();
    let mut labels = label_column.map(|_| Vec::new());
    let mut width = None;

    for result in reader.records() {
        let record = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            DataError::Malformed {
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(DataError::Ragged {
                line,
                expected,
                found: record.len(),
            });
        }
        if let Some(col) = label_column {
            if col >= record.len() {
                return Err(DataError::Malformed {
                    line,
                    message: format!(
                        "label column {col} out of range for {} columns",
                        record.len()
                    ),
                });
            }
        }

        let mut features = Vec::with_capacity(record.len());
        for (i, field) in record.iter().enumerate() {
            if Some(i) == label_column {
                let label = field.parse::<usize>().map_err(|_| DataError::Malformed {
                    line,
                    message: format!("label {field:?} is not a non-negative integer"),
                })?;
                if let Some(l) = labels.as_mut() {
                    l.push(label);
                }
            } else {
                let value = field.parse::<f64>().map_err(|_| DataError::Malformed {
                    line,
                    message: format!("column {i}: {field:?} is not a number"),
                })?;
                if !value.is_finite() {
                    return Err(DataError::Malformed {
                        line,
                        message: format!("column {i}: non-finite value {field:?}"),
                    });
                }
                features.push(value);
            }
        }
        rows.push(features);
    }
    Dataset::new(rows, labels)
}

/// Writes features followed by the label (if any), no header. Floats use
/// the shortest representation that parses back to the same value.
pub fn write_csv<W: Write>(ds: &Dataset, out: W) -> io::Result<()> {
    let mut out = BufWriter::new(out);
    for (i, row) in ds.rows.iter().enumerate() {
        let mut line = row.iter().map(f64::to_string).join(",");
        if let Some(labels) = &ds.labels {
            line.push(',');
            line.push_str(&labels[i].to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> io::Result<()> {
    write_csv(ds, File::create(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub center: Vec<f64>,
    pub stddev: f64,
    pub count: usize,
}

/// Parameters of an isotropic Gaussian mixture plus uniform noise features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub clusters: Vec<ClusterSpec>,
    #[serde(default)]
    pub noise_dims: usize,
    #[serde(default = "default_noise_interval")]
    pub noise_interval: (f64, f64),
    #[serde(default)]
    pub seed: u64,
}

fn default_noise_interval() -> (f64, f64) {
    (-1.0, 1.0)
}

impl SyntheticSpec {
    /// Three well-separated 3-D Gaussians of 100 points each:
    /// centers (0,0,0), (4,4,0), (0,4,4), stddev 0.5.
    pub fn default300(noise_dims: usize, seed: u64) -> Self {
        let cluster = |center: [f64; 3]| ClusterSpec {
            center: center.to_vec(),
            stddev: 0.5,
            count: 100,
        };
        Self {
            clusters: vec![
                cluster([0.0, 0.0, 0.0]),
                cluster([4.0, 4.0, 0.0]),
                cluster([0.0, 4.0, 4.0]),
            ],
            noise_dims,
            noise_interval: default_noise_interval(),
            seed,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(DataError::InvalidSpec(m.to_string()));
        let Some(first) = self.clusters.first() else {
            return invalid("at least one cluster is required");
        };
        let dim = first.center.len();
        if dim == 0 && self.noise_dims == 0 {
            return invalid("rows would have no features");
        }
        for c in &self.clusters {
            if c.center.len() != dim {
                return invalid("all cluster centers must have the same dimension");
            }
            if c.count == 0 {
                return invalid("cluster counts must be at least 1");
            }
            if !(c.stddev >= 0.0 && c.stddev.is_finite()) {
                return invalid("stddev must be finite and non-negative");
            }
            if c.center.iter().any(|v| !v.is_finite()) {
                return invalid("cluster centers must be finite");
            }
        }
        let (low, high) = self.noise_interval;
        if !(low < high && low.is_finite() && high.is_finite()) {
            return invalid("noise interval needs low < high");
        }
        Ok(())
    }
}

/// Draws the mixture described by `spec`.
///
/// The generator is `ChaCha8Rng::seed_from_u64(seed)`. Rows are produced
/// cluster by cluster; within a row, each Gaussian coordinate takes two
/// uniforms `u1, u2` in `[0, 1)` and returns
/// `center + stddev · sqrt(-2 ln(1 - u1)) · cos(2π u2)` (Box–Muller, cosine
/// branch only), then each noise coordinate takes one more uniform `u` and
/// returns `low + (high - low) · u`. Labels are cluster indices.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (low, high) = spec.noise_interval;
    let total: usize = spec.clusters.iter().map(|c| c.count).sum();
    let mut rows = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for (label, cluster) in spec.clusters.iter().enumerate() {
        for _ in 0..cluster.count {
            let mut row = Vec::with_capacity(cluster.center.len() + spec.noise_dims);
            for &mu in &cluster.center {
                row.push(mu + cluster.stddev * standard_normal(&mut rng));
            }
            for _ in 0..spec.noise_dims {
                row.push(low + (high - low) * rng.random::<f64>());
            }
            rows.push(row);
            labels.push(label);
        }
    }
    Dataset::new(rows, Some(labels))
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Fraction of rows misassigned under the best one-to-one matching of
/// clusters to labels.
///
/// When the partition and the labelling use different numbers of classes,
/// the smaller side is padded with empty classes.
pub fn error_rate(p: &Partition, labels: &[usize]) -> Result<f64> {
    let assignment = p.assignment();
    if assignment.len() != labels.len() {
        return Err(DataError::LabelCount {
            rows: assignment.len(),
            labels: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(DataError::Empty);
    }
    let num_labels = labels.iter().max().map_or(0, |&m| m + 1);
    let m = p.k().max(num_labels);
    if m > MAX_MATCHED_CLUSTERS {
        return Err(DataError::TooManyClusters(m));
    }
    let mut confusion = vec![0usize; m * m];
    for (&c, &l) in assignment.iter().zip(labels) {
        confusion[c * m + l] += 1;
    }
    let best = (0..m)
        .permutations(m)
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(c, &l)| confusion[c * m + l])
                .sum::<usize>()
        })
        .max()
        .unwrap_or(0);
    Ok(1.0 - best as f64 / labels.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_plain_rows() {
        let ds = read_csv("0.0,0.0,0.0\n1.0,1.0,1.0".as_bytes(), false, None).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.dim(), 3);
        assert!(ds.labels().is_none());
    }

    #[test]
    fn load_with_labels_and_header() {
        let text = "x,y,z,label\n0.5,1,2,0\n3,4,5,2\n";
        let ds = read_csv(text.as_bytes(), true, Some(3)).unwrap();
        assert_eq!(ds.dim(), 3);
        assert_eq!(ds.labels(), Some(&[0, 2][..]));
        assert_eq!(ds.rows()[0], vec![0.5, 1.0, 2.0]);
    }

    #[test]
    fn ragged_row_names_line() {
        let err = read_csv("1,2,3\n4,5\n".as_bytes(), false, None).unwrap_err();
        match err {
            DataError::Ragged {
                line,
                expected,
                found,
            } => {
                assert_eq!((line, expected, found), (2, 3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err_line(read_csv("1,2\n3,abc\n".as_bytes(), false, None)) == Some(2));
    }

    fn err_line(r: Result<Dataset>) -> Option<u64> {
        match r {
            Err(DataError::Malformed { line, .. }) => Some(line),
            _ => None,
        }
    }

    #[test]
    fn empty_and_bad_labels() {
        assert!(matches!(
            read_csv("".as_bytes(), false, None),
            Err(DataError::Empty)
        ));
        assert!(err_line(read_csv("1,2,x\n".as_bytes(), false, Some(2))).is_some());
        assert!(err_line(read_csv("1,2,-1\n".as_bytes(), false, Some(2))).is_some());
    }

    #[test]
    fn default300_shape() {
        let ds = generate_synthetic(&SyntheticSpec::default300(0, 1)).unwrap();
        assert_eq!(ds.len(), 300);
        assert_eq!(ds.dim(), 3);
        let labels = ds.labels().unwrap();
        for c in 0..3 {
            assert_eq!(labels.iter().filter(|&&l| l == c).count(), 100);
        }
        let noisy = generate_synthetic(&SyntheticSpec::default300(4, 1)).unwrap();
        assert_eq!(noisy.dim(), 7);
        for row in noisy.rows() {
            assert!(row[3..].iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn degenerate_gaussian_repeats_center() {
        let spec = SyntheticSpec {
            clusters: vec![ClusterSpec {
                center: vec![1.5, -2.0],
                stddev: 0.0,
                count: 5,
            }],
            noise_dims: 0,
            noise_interval: (-1.0, 1.0),
            seed: 3,
        };
        let ds = generate_synthetic(&spec).unwrap();
        assert!(ds.rows().iter().all(|r| r == &vec![1.5, -2.0]));
    }

    #[test]
    fn spec_validation() {
        assert!(SyntheticSpec::from_json(r#"{"clusters": []}"#).is_err());
        assert!(SyntheticSpec::from_json(
            r#"{"clusters": [{"center": [0], "stddev": 1, "count": 0}]}"#
        )
        .is_err());
        assert!(SyntheticSpec::from_json(
            r#"{"clusters": [{"center": [0], "stddev": 1, "count": 2}], "noise_interval": [1, -1]}"#
        )
        .is_err());
        let spec = SyntheticSpec::from_json(
            r#"{"clusters": [{"center": [0, 1], "stddev": 0.5, "count": 2}], "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(spec.noise_interval, (-1.0, 1.0));
        assert_eq!(spec.seed, 9);
    }

    #[test]
    fn error_rate_values() {
        let labels = [0, 0, 1, 1, 2, 2];
        let same = Partition::from_assignment(labels.to_vec(), 3).unwrap();
        assert_eq!(error_rate(&same, &labels).unwrap(), 0.0);
        let renamed = Partition::from_assignment(vec![2, 2, 0, 0, 1, 1], 3).unwrap();
        assert_eq!(error_rate(&renamed, &labels).unwrap(), 0.0);
        let off = Partition::from_assignment(vec![0, 1, 1, 1], 2).unwrap();
        assert_eq!(error_rate(&off, &[0, 0, 1, 1]).unwrap(), 0.25);
    }

    #[test]
    fn error_rate_errors() {
        let p = Partition::from_assignment(vec![0, 1], 2).unwrap();
        assert!(matches!(
            error_rate(&p, &[0]),
            Err(DataError::LabelCount { .. })
        ));
        let big = Partition::from_assignment((0..9).collect(), 9).unwrap();
        assert!(matches!(
            error_rate(&big, &[0; 9]),
            Err(DataError::TooManyClusters(9))
        ));
    }
}
