//! Evaluation harness: dataset ingestion, distance metrics against ground
//! truth, per-participant records, and aggregation.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::consistency::RandomIndexTable;
use crate::error::{Error, Result};
use crate::individualize::{individualize_scale, IndividualizationConfig};
use crate::io::{parse_pcm, PcmDoc, PcmFormat};
use crate::pcm::{realize, validate_pcm, LinguisticPcm};
use crate::priority::{eigen_priority_default, PriorityVector};
use crate::scale::ScaleAssignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Visual,
    Mass,
    Synthetic,
}

/// The measurable quantity behind an experiment (dot counts, grams) and the
/// priority vector it induces.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub experiment: Experiment,
    pub natural_values: Vec<f64>,
    pub weights: PriorityVector,
}

impl GroundTruth {
    /// Normalizes `natural_values` into the true priority vector.
    pub fn new(experiment: Experiment, natural_values: Vec<f64>) -> Result<Self> {
        let weights = PriorityVector::normalized(&natural_values)?;
        Ok(GroundTruth {
            experiment,
            natural_values,
            weights,
        })
    }
}

#[derive(Deserialize)]
struct GroundTruthDoc {
    experiment: Experiment,
    natural_values: Vec<f64>,
}

/// Loads the ground-truth sidecar `{"experiment": str, "natural_values": [..]}`.
pub fn load_ground_truth(path: &Path) -> Result<GroundTruth> {
    let text = fs::read_to_string(path)?;
    let doc: GroundTruthDoc = serde_json::from_str(&text)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    GroundTruth::new(doc.experiment, doc.natural_values)
}

/// Which scale produced a record: the fixed baseline or the individualized one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMethod {
    FixedSaaty,
    Bagins,
}

impl ScaleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ScaleMethod::FixedSaaty => "fixed_saaty",
            ScaleMethod::Bagins => "bagins",
        }
    }
}

impl fmt::Display for ScaleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Distances between derived priorities and the truth for one participant
/// under one method.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationRecord {
    pub participant: String,
    pub method: ScaleMethod,
    pub euclidean: f64,
    pub mae: f64,
    pub kendall_tau: f64,
    pub cr_before: f64,
    pub cr_after: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceMetrics {
    pub euclidean: f64,
    pub mae: f64,
    pub kendall_tau: f64,
}

/// Euclidean distance, mean absolute error, and Kendall tau-b between a
/// derived priority vector and the truth.
pub fn distance_metrics(
    derived: &PriorityVector,
    truth: &PriorityVector,
) -> Result<DistanceMetrics> {
    if derived.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: derived.len(),
        });
    }
    let d = derived.weights();
    let t = truth.weights();
    let euclidean = d
        .iter()
        .zip(t)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let mae = d.iter().zip(t).map(|(a, b)| (a - b).abs()).sum::<f64>() / d.len() as f64;
    Ok(DistanceMetrics {
        euclidean,
        mae,
        kendall_tau: kendall_tau_b(d, t),
    })
}

/// Kendall tau-b: tie-aware rank correlation. Returns 0 when either side is
/// entirely tied (the denominator vanishes).
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len());
    if n < 2 {
        return 0.0;
    }
    let mut concordant = 0u64;
    let mut discordant = 0u64;
    let mut tied_x = 0u64;
    let mut tied_y = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                tied_x += 1;
            }
            if dy == 0.0 {
                tied_y += 1;
            }
            if dx != 0.0 && dy != 0.0 {
                if (dx > 0.0) == (dy > 0.0) {
                    concordant += 1;
                } else {
                    discordant += 1;
                }
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    let denom = ((n0 - tied_x as f64) * (n0 - tied_y as f64)).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (concordant as f64 - discordant as f64) / denom
}

/// Evaluates one participant under both the fixed scale and the
/// individualized scale, returning the (fixed_saaty, bagins) record pair.
pub fn evaluate_participant(
    pcm: &LinguisticPcm,
    truth: &GroundTruth,
    cfg: &IndividualizationConfig,
    ri: &RandomIndexTable,
) -> Result<(EvaluationRecord, EvaluationRecord)> {
    if pcm.n != truth.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.weights.len(),
            actual: pcm.n,
        });
    }
    let result = individualize_scale(pcm, cfg, ri)?;

    let fixed_matrix = realize(pcm, &ScaleAssignment::saaty())?;
    let fixed_derived = eigen_priority_default(&fixed_matrix)?.priorities;
    let fixed_metrics = distance_metrics(&fixed_derived, &truth.weights)?;
    let fixed = EvaluationRecord {
        participant: pcm.id.clone(),
        method: ScaleMethod::FixedSaaty,
        euclidean: fixed_metrics.euclidean,
        mae: fixed_metrics.mae,
        kendall_tau: fixed_metrics.kendall_tau,
        cr_before: result.baseline_objective,
        cr_after: result.baseline_objective,
    };

    let tuned_matrix = realize(pcm, &result.scale)?;
    let tuned_derived = eigen_priority_default(&tuned_matrix)?.priorities;
    let tuned_metrics = distance_metrics(&tuned_derived, &truth.weights)?;
    let bagins = EvaluationRecord {
        participant: pcm.id.clone(),
        method: ScaleMethod::Bagins,
        euclidean: tuned_metrics.euclidean,
        mae: tuned_metrics.mae,
        kendall_tau: tuned_metrics.kendall_tau,
        cr_before: result.baseline_objective,
        cr_after: result.objective_value,
    };

    Ok((fixed, bagins))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Jsonl,
    CsvDir,
}

#[derive(Deserialize)]
struct JsonlLineDoc {
    #[serde(flatten)]
    pcm: PcmDoc,
    #[serde(default)]
    true_weights: Option<Vec<f64>>,
}

/// Loads a dataset of PCMs with optional ground truth.
///
/// JSONL: one PCM document per line; a `true_weights` field on a line
/// becomes that PCM's (synthetic) ground truth. CSV: every `*.csv` file in
/// the directory, in filename order. An explicit `sidecar` ground-truth file
/// applies to every PCM that has none of its own; for CSV directories a
/// `truth.json` file inside the directory is picked up when no sidecar is
/// given. Every PCM is structurally validated.
pub fn load_dataset(
    path: &Path,
    format: DatasetFormat,
    sidecar: Option<&Path>,
) -> Result<Vec<(LinguisticPcm, Option<GroundTruth>)>> {
    let shared_truth = match sidecar {
        Some(p) => Some(load_ground_truth(p)?),
        None => match format {
            DatasetFormat::CsvDir if path.join("truth.json").is_file() => {
                Some(load_ground_truth(&path.join("truth.json"))?)
            }
            _ => None,
        },
    };

    let mut entries = Vec::new();
    match format {
        DatasetFormat::Jsonl => {
            let text = fs::read_to_string(path)?;
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let location = format!("{}:{}", path.display(), lineno + 1);
                let doc: JsonlLineDoc = serde_json::from_str(line)
                    .map_err(|e| Error::parse(&location, e.to_string()))?;
                let truth = match doc.true_weights {
                    Some(values) => Some(GroundTruth::new(Experiment::Synthetic, values)?),
                    None => shared_truth.clone(),
                };
                let pcm = doc.pcm.into_pcm().map_err(|e| match e {
                    Error::Parse {
                        location: l,
                        message,
                    } => Error::parse(format!("{location} {l}"), message),
                    other => other,
                })?;
                entries.push((pcm, truth));
            }
        }
        DatasetFormat::CsvDir => {
            let mut files: Vec<_> = fs::read_dir(path)?
                .collect::<std::io::Result<Vec<_>>>()?
                .into_iter()
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
                .collect();
            files.sort();
            for file in files {
                let text = fs::read_to_string(&file)?;
                let pcm = parse_pcm(&text, PcmFormat::Csv).map_err(|e| match e {
                    Error::Parse { location, message } => {
                        Error::parse(format!("{}: {location}", file.display()), message)
                    }
                    other => other,
                })?;
                entries.push((pcm, shared_truth.clone()));
            }
        }
    }

    for (pcm, truth) in &entries {
        let report = validate_pcm(pcm);
        if !report.ok() {
            return Err(Error::parse(
                format!("{} (id {})", path.display(), pcm.id),
                report.to_string(),
            ));
        }
        if let Some(t) = truth {
            if t.weights.len() != pcm.n {
                return Err(Error::DimensionMismatch {
                    expected: pcm.n,
                    actual: t.weights.len(),
                });
            }
        }
    }
    Ok(entries)
}

/// Runs [`evaluate_participant`] over a loaded dataset, in input order.
pub fn evaluate_dataset(
    entries: &[(LinguisticPcm, Option<GroundTruth>)],
    cfg: &IndividualizationConfig,
    ri: &RandomIndexTable,
) -> Result<Vec<EvaluationRecord>> {
    let mut records = Vec::with_capacity(entries.len() * 2);
    for (pcm, truth) in entries {
        let truth = truth.as_ref().ok_or_else(|| {
            Error::EmptyInput(format!("no ground truth for participant '{}'", pcm.id))
        })?;
        let (fixed, bagins) = evaluate_participant(pcm, truth, cfg, ri)?;
        records.push(fixed);
        records.push(bagins);
    }
    Ok(records)
}

/// Mean, median, and sample standard deviation of one metric.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MetricSummary {
    pub mean: f64,
    pub median: f64,
    pub stdev: f64,
}

impl MetricSummary {
    fn from_values(mut values: Vec<f64>) -> MetricSummary {
        values.sort_by(|a, b| a.partial_cmp(b).expect("metric values are finite"));
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            values[n / 2]
        } else {
            (values[n / 2 - 1] + values[n / 2]) / 2.0
        };
        let stdev = if n < 2 {
            0.0
        } else {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n as f64 - 1.0)).sqrt()
        };
        MetricSummary {
            mean,
            median,
            stdev,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MethodSummary {
    pub count: usize,
    pub euclidean: MetricSummary,
    pub mae: MetricSummary,
    pub kendall_tau: MetricSummary,
    pub cr_before: MetricSummary,
    pub cr_after: MetricSummary,
}

/// Paired fixed-vs-individualized statistics over participants present
/// under both methods.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairedStats {
    pub pairs: usize,
    /// Mean of (fixed euclidean - individualized euclidean); positive means
    /// the individualized scale landed closer to the truth.
    pub mean_delta_euclidean: f64,
    /// Mean of (cr_before - cr_after) on the individualized records.
    pub mean_delta_cr: f64,
    /// Fraction of participants whose euclidean distance strictly decreased.
    pub fraction_improved: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub methods: BTreeMap<String, MethodSummary>,
    pub paired: Option<PairedStats>,
}

/// Aggregates records into per-method summaries plus paired statistics.
/// Records are sorted canonically first, so the result is independent of
/// input order.
pub fn aggregate(records: &[EvaluationRecord]) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no evaluation records".into()));
    }
    let mut sorted: Vec<&EvaluationRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.participant, a.method.as_str()).cmp(&(&b.participant, b.method.as_str()))
    });

    let mut methods = BTreeMap::new();
    for method in [ScaleMethod::FixedSaaty, ScaleMethod::Bagins] {
        let subset: Vec<&&EvaluationRecord> =
            sorted.iter().filter(|r| r.method == method).collect();
        if subset.is_empty() {
            continue;
        }
        let collect =
            |f: fn(&EvaluationRecord) -> f64| -> Vec<f64> { subset.iter().map(|r| f(r)).collect() };
        methods.insert(
            method.as_str().to_string(),
            MethodSummary {
                count: subset.len(),
                euclidean: MetricSummary::from_values(collect(|r| r.euclidean)),
                mae: MetricSummary::from_values(collect(|r| r.mae)),
                kendall_tau: MetricSummary::from_values(collect(|r| r.kendall_tau)),
                cr_before: MetricSummary::from_values(collect(|r| r.cr_before)),
                cr_after: MetricSummary::from_values(collect(|r| r.cr_after)),
            },
        );
    }

    let mut fixed_by_participant: BTreeMap<&str, &EvaluationRecord> = BTreeMap::new();
    let mut tuned_by_participant: BTreeMap<&str, &EvaluationRecord> = BTreeMap::new();
    for record in &sorted {
        match record.method {
            ScaleMethod::FixedSaaty => {
                fixed_by_participant.insert(record.participant.as_str(), record);
            }
            ScaleMethod::Bagins => {
                tuned_by_participant.insert(record.participant.as_str(), record);
            }
        }
    }
    let mut deltas = Vec::new();
    let mut cr_deltas = Vec::new();
    let mut improved = 0usize;
    for (participant, fixed) in &fixed_by_participant {
        if let Some(tuned) = tuned_by_participant.get(participant) {
            deltas.push(fixed.euclidean - tuned.euclidean);
            cr_deltas.push(tuned.cr_before - tuned.cr_after);
            if tuned.euclidean < fixed.euclidean {
                improved += 1;
            }
        }
    }
    let paired = if deltas.is_empty() {
        None
    } else {
        Some(PairedStats {
            pairs: deltas.len(),
            mean_delta_euclidean: deltas.iter().sum::<f64>() / deltas.len() as f64,
            mean_delta_cr: cr_deltas.iter().sum::<f64>() / cr_deltas.len() as f64,
            fraction_improved: improved as f64 / deltas.len() as f64,
        })
    };

    Ok(Summary { methods, paired })
}

/// Report CSV: `participant,method,euclidean,mae,kendall_tau,cr_before,cr_after`.
pub fn records_to_csv(records: &[EvaluationRecord]) -> String {
    let mut out = String::from("participant,method,euclidean,mae,kendall_tau,cr_before,cr_after\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.participant, r.method, r.euclidean, r.mae, r.kendall_tau, r.cr_before, r.cr_after
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1() -> PriorityVector {
        PriorityVector::normalized(&(1..=9).map(|i| i as f64).collect::<Vec<_>>()).unwrap()
    }

    fn uniform(n: usize) -> PriorityVector {
        PriorityVector::new(vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn identical_vectors_have_zero_distance_and_full_tau() {
        let t = table1();
        let m = distance_metrics(&t, &t).unwrap();
        assert_eq!(m.euclidean, 0.0);
        assert_eq!(m.mae, 0.0);
        assert_eq!(m.kendall_tau, 1.0);
    }

    #[test]
    fn uniform_vs_table1_matches_hand_arithmetic() {
        // Sum over i of (1/9 - i/45)^2 = 60/45^2, so the distance is sqrt(60)/45.
        let m = distance_metrics(&uniform(9), &table1()).unwrap();
        assert!((m.euclidean - 60.0f64.sqrt() / 45.0).abs() < 1e-12);
        assert!((m.mae - 20.0 / 405.0).abs() < 1e-12);
        // The uniform side is all ties: tau-b's denominator vanishes.
        assert_eq!(m.kendall_tau, 0.0);
    }

    #[test]
    fn reversed_truth_gives_tau_minus_one() {
        let t = table1();
        let reversed = PriorityVector::new(t.weights().iter().rev().copied().collect()).unwrap();
        let m = distance_metrics(&reversed, &t).unwrap();
        assert_eq!(m.kendall_tau, -1.0);
    }

    #[test]
    fn metrics_are_symmetric() {
        let a = table1();
        let b = PriorityVector::normalized(&[5.0, 1.0, 2.0, 2.0, 3.0, 9.0, 4.0, 7.0, 6.0]).unwrap();
        let ab = distance_metrics(&a, &b).unwrap();
        let ba = distance_metrics(&b, &a).unwrap();
        assert_eq!(ab.euclidean, ba.euclidean);
        assert_eq!(ab.mae, ba.mae);
        assert_eq!(ab.kendall_tau, ba.kendall_tau);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(distance_metrics(&uniform(4), &uniform(5)).is_err());
    }

    #[test]
    fn tau_handles_partial_ties() {
        // x has one tied pair, y fully ordered.
        let tau = kendall_tau_b(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]);
        // C = 2, D = 0, ties_x = 1: tau = 2 / sqrt(2 * 3).
        assert!((tau - 2.0 / 6.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ground_truth_normalizes_natural_values() {
        let truth = GroundTruth::new(
            Experiment::Visual,
            (1..=9).map(|i| (i * 10) as f64).collect(),
        )
        .unwrap();
        for (w, e) in truth.weights.weights().iter().zip(table1().weights()) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn aggregate_single_record() {
        let record = EvaluationRecord {
            participant: "p1".into(),
            method: ScaleMethod::FixedSaaty,
            euclidean: 0.5,
            mae: 0.1,
            kendall_tau: 0.8,
            cr_before: 0.2,
            cr_after: 0.2,
        };
        let summary = aggregate(std::slice::from_ref(&record)).unwrap();
        let m = &summary.methods["fixed_saaty"];
        assert_eq!(m.count, 1);
        assert_eq!(m.euclidean.mean, 0.5);
        assert_eq!(m.euclidean.median, 0.5);
        assert_eq!(m.euclidean.stdev, 0.0);
        assert!(summary.paired.is_none());
    }

    #[test]
    fn aggregate_identical_records_have_zero_stdev() {
        let record = EvaluationRecord {
            participant: "p1".into(),
            method: ScaleMethod::Bagins,
            euclidean: 0.25,
            mae: 0.05,
            kendall_tau: 1.0,
            cr_before: 0.3,
            cr_after: 0.1,
        };
        let mut two = vec![record.clone(), record];
        two[1].participant = "p2".into();
        let summary = aggregate(&two).unwrap();
        assert_eq!(summary.methods["bagins"].euclidean.stdev, 0.0);
        assert_eq!(summary.methods["bagins"].count, 2);
    }

    #[test]
    fn aggregate_is_order_invariant() {
        let mk = |p: &str, method, e| EvaluationRecord {
            participant: p.into(),
            method,
            euclidean: e,
            mae: e / 2.0,
            kendall_tau: 1.0 - e,
            cr_before: 0.4,
            cr_after: if method == ScaleMethod::Bagins {
                0.2
            } else {
                0.4
            },
        };
        let records = vec![
            mk("a", ScaleMethod::FixedSaaty, 0.3),
            mk("a", ScaleMethod::Bagins, 0.2),
            mk("b", ScaleMethod::FixedSaaty, 0.5),
            mk("b", ScaleMethod::Bagins, 0.6),
        ];
        let mut shuffled = records.clone();
        shuffled.reverse();
        assert_eq!(aggregate(&records).unwrap(), aggregate(&shuffled).unwrap());
        let paired = aggregate(&records).unwrap().paired.unwrap();
        assert_eq!(paired.pairs, 2);
        assert_eq!(paired.fraction_improved, 0.5);
        assert!((paired.mean_delta_euclidean - 0.0).abs() < 1e-12);
        assert!((paired.mean_delta_cr - 0.2).abs() < 1e-12);
    }

    #[test]
    fn aggregate_rejects_empty_input() {
        assert!(matches!(aggregate(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn csv_header_and_tokens_are_stable() {
        let record = EvaluationRecord {
            participant: "p9".into(),
            method: ScaleMethod::Bagins,
            euclidean: 0.125,
            mae: 0.25,
            kendall_tau: 0.5,
            cr_before: 1.0,
            cr_after: 0.5,
        };
        let csv = records_to_csv(&[record]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "participant,method,euclidean,mae,kendall_tau,cr_before,cr_after"
        );
        assert_eq!(lines.next().unwrap(), "p9,bagins,0.125,0.25,0.5,1,0.5");
    }
}
