//! Synthetic dataset generation: ground-truth weight vectors, linguistic
//! discretization of their ratio matrices, and controlled grade noise.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::PcmDoc;
use crate::pcm::{default_item_names, Direction, Grade, Judgment, LinguisticPcm};
use crate::priority::PriorityVector;
use crate::rng::{substream, DOMAIN_PERTURB, DOMAIN_WEIGHTS};
use crate::scale::ScaleAssignment;

/// How ground-truth weight vectors are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightModel {
    /// Flat Dirichlet: normalized unit-exponential draws.
    #[default]
    UniformSimplex,
    /// The fixed ladder w_i = i / (1 + 2 + ... + n); for n = 9 this is i/45.
    Table1Fixed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyConfig {
    pub n: usize,
    pub matrices: usize,
    /// Scale the simulated decision-maker internally verbalizes with.
    pub true_scale: ScaleAssignment,
    /// Probability that a judgment shifts by one grade.
    pub perturb_prob: f64,
    pub weight_model: WeightModel,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            n: 9,
            matrices: 100,
            true_scale: ScaleAssignment::saaty(),
            perturb_prob: 0.0,
            weight_model: WeightModel::UniformSimplex,
            seed: 42,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 alternatives, got {}",
                self.n
            )));
        }
        if self.matrices < 1 {
            return Err(Error::InvalidConfig("matrices must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.perturb_prob) {
            return Err(Error::InvalidConfig(format!(
                "perturb_prob {} outside [0, 1]",
                self.perturb_prob
            )));
        }
        Ok(())
    }
}

/// One generated instance carrying its own ground truth.
#[derive(Debug, Clone)]
pub struct SyntheticInstance {
    pub true_weights: PriorityVector,
    pub pcm: LinguisticPcm,
    pub true_scale: ScaleAssignment,
    pub perturbed_pairs: Vec<(usize, usize)>,
}

/// Draws the ground-truth weight vector for substream `stream_index`.
pub fn sample_weights(cfg: &StudyConfig, stream_index: u64) -> PriorityVector {
    match cfg.weight_model {
        WeightModel::Table1Fixed => {
            let total = (cfg.n * (cfg.n + 1) / 2) as f64;
            let weights: Vec<f64> = (1..=cfg.n).map(|i| i as f64 / total).collect();
            PriorityVector::new(weights).expect("fixed ladder is a valid priority vector")
        }
        WeightModel::UniformSimplex => {
            let mut rng = substream(cfg.seed, DOMAIN_WEIGHTS, stream_index);
            let raw: Vec<f64> = (0..cfg.n)
                .map(|_| {
                    let u: f64 = rng.random();
                    // -ln(1 - u) is a unit-exponential draw; guard the
                    // measure-zero u = 0 case so weights stay positive.
                    (-(1.0 - u).ln()).max(f64::MIN_POSITIVE)
                })
                .collect();
            PriorityVector::normalized(&raw).expect("exponential draws are positive")
        }
    }
}

/// Verbalizes a weight vector as a linguistic PCM under `true_scale`.
///
/// For each pair i < j the dominance ratio r = max(w_i, w_j) / min(w_i, w_j)
/// gets the grade whose scale value is closest to r (ties toward the lower
/// grade; r beyond v_9 saturates at grade 9), directed toward the heavier
/// item.
pub fn discretize(weights: &PriorityVector, true_scale: &ScaleAssignment) -> LinguisticPcm {
    let w = weights.weights();
    let n = w.len();
    let mut judgments = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let ratio = if w[i] >= w[j] {
                w[i] / w[j]
            } else {
                w[j] / w[i]
            };
            let grade = closest_grade(ratio, true_scale);
            let direction = if w[i] >= w[j] {
                Direction::IOverJ
            } else {
                Direction::JOverI
            };
            judgments.push(Judgment::new(i, j, grade, direction).expect("i < j by construction"));
        }
    }
    LinguisticPcm::new("synthetic", n, default_item_names(n), judgments)
}

fn closest_grade(ratio: f64, scale: &ScaleAssignment) -> Grade {
    let mut best = Grade::INDIFFERENCE;
    let mut best_distance = (scale.value(best) - ratio).abs();
    for g in 2..=9u8 {
        let grade = Grade::new(g).expect("grade in range");
        let distance = (scale.value(grade) - ratio).abs();
        if distance < best_distance {
            best = grade;
            best_distance = distance;
        }
    }
    best
}

/// Randomly shifts judgments by one grade with probability `perturb_prob`
/// each, returning the noisy PCM and the perturbed pairs.
///
/// A shift moves the grade up or down with equal odds. At the lattice ends
/// the shift reflects: grade 9 cannot move up so it moves down to 8, and a
/// grade-1 judgment "moving down" crosses indifference, becoming grade 2
/// with the direction flipped.
pub fn perturb(
    pcm: &LinguisticPcm,
    perturb_prob: f64,
    seed: u64,
    stream_index: u64,
) -> (LinguisticPcm, Vec<(usize, usize)>) {
    let mut rng = substream(seed, DOMAIN_PERTURB, stream_index);
    let mut result = pcm.clone();
    let mut perturbed = Vec::new();
    for judgment in &mut result.judgments {
        let selected: f64 = rng.random();
        let upward: bool = rng.random();
        if selected >= perturb_prob {
            continue;
        }
        let g = judgment.grade().get();
        let (new_grade, new_direction) = if upward {
            if g == 9 {
                (8, judgment.direction())
            } else {
                (g + 1, judgment.direction())
            }
        } else if g == 1 {
            (2, judgment.direction().flipped())
        } else {
            (g - 1, judgment.direction())
        };
        let grade = Grade::new(new_grade).expect("shift stays in 1..=9");
        *judgment = Judgment::new(judgment.i(), judgment.j(), grade, new_direction)
            .expect("pair unchanged");
        perturbed.push((judgment.i(), judgment.j()));
    }
    (result, perturbed)
}

/// Generates `cfg.matrices` instances, each from its own substream.
pub fn generate_batch(cfg: &StudyConfig) -> Result<Vec<SyntheticInstance>> {
    cfg.validate()?;
    let mut instances = Vec::with_capacity(cfg.matrices);
    for k in 0..cfg.matrices {
        let true_weights = sample_weights(cfg, k as u64);
        let mut pcm = discretize(&true_weights, &cfg.true_scale);
        pcm.id = format!("synthetic-{k}");
        let (pcm, perturbed_pairs) = perturb(&pcm, cfg.perturb_prob, cfg.seed, k as u64);
        instances.push(SyntheticInstance {
            true_weights,
            pcm,
            true_scale: cfg.true_scale.clone(),
            perturbed_pairs,
        });
    }
    Ok(instances)
}

/// JSON-lines record: the PCM document plus its ground truth.
#[derive(Serialize, Deserialize)]
pub(crate) struct InstanceDoc {
    #[serde(flatten)]
    pub pcm: PcmDoc,
    pub true_weights: Vec<f64>,
    pub true_scale: ScaleAssignment,
}

/// Serializes instances as JSON lines, one instance per line.
pub fn instances_to_jsonl(instances: &[SyntheticInstance]) -> String {
    let mut out = String::new();
    for instance in instances {
        let doc = InstanceDoc {
            pcm: PcmDoc::from_pcm(&instance.pcm),
            true_weights: instance.true_weights.weights().to_vec(),
            true_scale: instance.true_scale.clone(),
        };
        out.push_str(&serde_json::to_string(&doc).expect("instance serializes"));
        out.push('\n');
    }
    out
}
