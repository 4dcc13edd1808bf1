//! Inconsistency measurement: lambda_max, CI, CR, and the random-index table.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcm::NumericPcm;
use crate::priority::{eigen_priority_default, lambda_max_estimate};
use crate::rng::{substream, DOMAIN_RANDOM_INDEX};

/// CI below this is treated as exactly zero.
///
/// A consistent matrix realized in floating point carries lambda_max noise
/// around 1e-15; clamping keeps "consistent input => CR exactly 0" true,
/// while any real inconsistency (a single off-by-one grade) sits orders of
/// magnitude above the threshold.
pub const CI_ZERO_EPS: f64 = 1e-12;

/// Samples per chunk when the random-index derivation runs in parallel.
const RI_CHUNK: u64 = 4096;

/// The 17 candidate entries of a random reciprocal matrix:
/// grades 1..9 and their reciprocals.
const RANDOM_ENTRIES: [f64; 17] = [
    1.0,
    2.0,
    3.0,
    4.0,
    5.0,
    6.0,
    7.0,
    8.0,
    9.0,
    1.0 / 2.0,
    1.0 / 3.0,
    1.0 / 4.0,
    1.0 / 5.0,
    1.0 / 6.0,
    1.0 / 7.0,
    1.0 / 8.0,
    1.0 / 9.0,
];

/// How the priorities backing a consistency report were derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorityMethod {
    Eigenvector,
    GeometricMean,
}

/// Inconsistency summary for one numeric PCM.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub lambda_max: f64,
    pub ci: f64,
    pub cr: f64,
    pub method: PriorityMethod,
    pub iterations: usize,
}

/// Mean consistency index of random reciprocal matrices per dimension,
/// the denominator of CR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomIndexTable {
    pub seed: u64,
    pub samples: u64,
    pub ri: BTreeMap<usize, f64>,
}

static BUILTIN_TABLE: LazyLock<RandomIndexTable> = LazyLock::new(|| {
    RandomIndexTable::from_json(include_str!("../data/ri_table.json"))
        .expect("embedded random-index table is valid")
});

impl RandomIndexTable {
    /// The table shipped with the crate: seed 42, 500000 samples, dims 3..=15.
    pub fn builtin() -> &'static RandomIndexTable {
        &BUILTIN_TABLE
    }

    /// Regenerates a table for `dims` with [`derive_random_index`].
    pub fn generate(dims: std::ops::RangeInclusive<usize>, samples: u64, seed: u64) -> Self {
        let ri = dims
            .map(|n| (n, derive_random_index(n, samples, seed)))
            .collect();
        RandomIndexTable { seed, samples, ri }
    }

    pub fn ri(&self, n: usize) -> Option<f64> {
        self.ri.get(&n).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("ri table", e.to_string()))
    }
}

/// Computes lambda_max, CI = (lambda_max - n)/(n - 1), and CR = CI / RI(n).
///
/// CR is exactly 0 whenever CI is 0 (in particular for n = 2, where every
/// reciprocal matrix is consistent); the RI entry is only consulted when the
/// matrix is actually inconsistent.
pub fn consistency(m: &NumericPcm, ri: &RandomIndexTable) -> Result<ConsistencyReport> {
    let solution = eigen_priority_default(m)?;
    let n = m.n();
    let ci = clamp_ci((solution.lambda_max - n as f64) / (n as f64 - 1.0));
    let cr = if ci == 0.0 {
        0.0
    } else {
        let denom = ri.ri(n).ok_or(Error::MissingRandomIndex { n })?;
        ci / denom
    };
    Ok(ConsistencyReport {
        lambda_max: solution.lambda_max,
        ci,
        cr,
        method: PriorityMethod::Eigenvector,
        iterations: solution.iterations,
    })
}

pub(crate) fn clamp_ci(ci: f64) -> f64 {
    if ci < CI_ZERO_EPS {
        0.0
    } else {
        ci
    }
}

/// Mean CI over `samples` random reciprocal matrices of dimension `n`,
/// upper-triangle entries drawn uniformly from grades 1..9 and their
/// reciprocals. Deterministic given the seed: samples are split into
/// fixed-size chunks, each driven by its own (seed, n, chunk) substream,
/// and the per-chunk sums are combined in chunk order.
pub fn derive_random_index(n: usize, samples: u64, seed: u64) -> f64 {
    assert!(n >= 3, "random index is defined for n >= 3");
    assert!(samples >= 10_000, "need at least 10000 samples");

    let chunks = samples.div_ceil(RI_CHUNK);
    let sums: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * RI_CHUNK;
            let hi = (lo + RI_CHUNK).min(samples);
            let mut rng = substream(seed, DOMAIN_RANDOM_INDEX ^ (n as u64) << 32, chunk);
            let mut sum = 0.0;
            for _ in lo..hi {
                sum += sample_random_ci(n, &mut rng);
            }
            sum
        })
        .collect();
    sums.iter().sum::<f64>() / samples as f64
}

fn sample_random_ci(n: usize, rng: &mut impl Rng) -> f64 {
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let a = RANDOM_ENTRIES[rng.random_range(0..RANDOM_ENTRIES.len())];
            entries[i * n + j] = a;
            entries[j * n + i] = 1.0 / a;
        }
    }
    let m = NumericPcm::new(n, entries).expect("sampled matrix is reciprocal");
    let lambda = lambda_max_estimate(&m);
    (lambda - n as f64) / (n as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_matrix() -> NumericPcm {
        let weights: Vec<f64> = (1..=9).map(|i| i as f64 / 45.0).collect();
        NumericPcm::from_weights(&weights).unwrap()
    }

    #[test]
    fn consistent_matrix_has_zero_ci_and_cr() {
        let report = consistency(&table1_matrix(), RandomIndexTable::builtin()).unwrap();
        assert_eq!(report.ci, 0.0);
        assert_eq!(report.cr, 0.0);
        assert!((report.lambda_max - 9.0).abs() < 1e-9);
    }

    #[test]
    fn all_ones_matrix_is_exactly_consistent() {
        let m = NumericPcm::new(5, vec![1.0; 25]).unwrap();
        let report = consistency(&m, RandomIndexTable::builtin()).unwrap();
        assert_eq!(report.lambda_max, 5.0);
        assert_eq!(report.ci, 0.0);
        assert_eq!(report.cr, 0.0);
    }

    #[test]
    fn inconsistent_matrix_reports_positive_cr() {
        let entries = vec![1.0, 2.0, 4.0, 0.5, 1.0, 3.0, 0.25, 1.0 / 3.0, 1.0];
        let m = NumericPcm::new(3, entries).unwrap();
        let report = consistency(&m, RandomIndexTable::builtin()).unwrap();
        assert!(report.ci > 1e-3);
        assert!(report.cr > 0.0);
        let recomputed = (report.lambda_max - 3.0) / 2.0;
        assert!((report.ci - recomputed).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_needs_no_ri_entry() {
        let m = NumericPcm::new(2, vec![1.0, 7.0, 1.0 / 7.0, 1.0]).unwrap();
        let empty = RandomIndexTable {
            seed: 0,
            samples: 0,
            ri: BTreeMap::new(),
        };
        let report = consistency(&m, &empty).unwrap();
        assert_eq!(report.ci, 0.0);
        assert_eq!(report.cr, 0.0);
    }

    #[test]
    fn missing_ri_entry_is_reported() {
        let entries = vec![1.0, 2.0, 4.0, 0.5, 1.0, 3.0, 0.25, 1.0 / 3.0, 1.0];
        let m = NumericPcm::new(3, entries).unwrap();
        let empty = RandomIndexTable {
            seed: 0,
            samples: 0,
            ri: BTreeMap::new(),
        };
        assert!(matches!(
            consistency(&m, &empty),
            Err(Error::MissingRandomIndex { n: 3 })
        ));
    }

    #[test]
    fn derive_random_index_is_deterministic() {
        let a = derive_random_index(3, 10_000, 7);
        let b = derive_random_index(3, 10_000, 7);
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(a > 0.0);
    }

    #[test]
    fn derive_random_index_grows_with_dimension() {
        let r3 = derive_random_index(3, 20_000, 42);
        let r9 = derive_random_index(9, 20_000, 42);
        assert!(r9 > r3);
    }

    #[test]
    fn random_index_stable_across_disjoint_seeds() {
        let a = derive_random_index(3, 100_000, 1);
        let b = derive_random_index(3, 100_000, 2);
        assert!((a - b).abs() < 0.01, "{a} vs {b}");
    }

    #[test]
    fn table_json_round_trip() {
        let table = RandomIndexTable {
            seed: 42,
            samples: 1000,
            ri: [(3, 0.52), (4, 0.88)].into_iter().collect(),
        };
        let json = table.to_json();
        let back = RandomIndexTable::from_json(&json).unwrap();
        assert_eq!(back, table);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["ri"]["3"].is_number());
        assert_eq!(value["seed"], 42);
        assert_eq!(value["samples"], 1000);
    }

    #[test]
    fn builtin_table_covers_dims_3_to_15() {
        let table = RandomIndexTable::builtin();
        for n in 3..=15 {
            assert!(table.ri(n).is_some(), "missing dim {n}");
            assert!(table.ri(n).unwrap() > 0.0);
        }
        assert_eq!(table.seed, 42);
        assert_eq!(table.samples, 500_000);
    }
}
