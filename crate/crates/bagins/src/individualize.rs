//! Per-decision-maker scale individualization.
//!
//! The search keeps grade 1 pinned at 1 and adjusts the values of grades
//! 2..=9 by coordinate descent to minimize the inconsistency of the realized
//! matrix, never returning a scale worse than the fixed baseline v_k = k.
//! A brute-force grid enumeration over the grades a PCM actually uses serves
//! as the validation oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::consistency::{clamp_ci, RandomIndexTable};
use crate::error::{Error, Result};
use crate::pcm::{realize, validate_pcm, LinguisticPcm};
use crate::priority::eigen_priority_default;
use crate::scale::{ScaleAssignment, GRADE_COUNT};

/// Inconsistency measure minimized by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Consistency ratio CI / RI(n).
    #[default]
    Cr,
    /// Consistency index (lambda_max - n) / (n - 1).
    Ci,
    /// lambda_max - n.
    LambdaMaxGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    PreferDefaultScale,
}

/// Tunables of the individualization search.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct IndividualizationConfig {
    pub objective: Objective,
    /// Coarse-to-fine move sizes; the search advances to the next entry when
    /// a full sweep at the current size yields no improvement.
    pub step_schedule: Vec<f64>,
    /// Minimum gap between consecutive grade values.
    pub eps_gap: f64,
    /// Upper bound on the grade-9 value.
    pub v_max: f64,
    /// Cap on the total number of sweeps.
    pub max_passes: usize,
    pub tie_break: TieBreak,
}

impl Default for IndividualizationConfig {
    fn default() -> Self {
        IndividualizationConfig {
            objective: Objective::Cr,
            step_schedule: vec![1.0, 0.5, 0.25, 0.1, 0.05, 0.01],
            eps_gap: 0.01,
            v_max: 9.0,
            max_passes: 50,
            tie_break: TieBreak::PreferDefaultScale,
        }
    }
}

impl IndividualizationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.step_schedule.is_empty() {
            return Err(Error::InvalidConfig("step schedule is empty".into()));
        }
        for step in &self.step_schedule {
            if !step.is_finite() || *step <= 0.0 {
                return Err(Error::InvalidConfig(format!("step {step} is not positive")));
            }
        }
        for pair in self.step_schedule.windows(2) {
            if pair[1] >= pair[0] {
                return Err(Error::InvalidConfig(
                    "step schedule must be strictly decreasing".into(),
                ));
            }
        }
        if !self.eps_gap.is_finite() || self.eps_gap <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "eps_gap must be positive: {}",
                self.eps_gap
            )));
        }
        if self.v_max < 1.0 + (GRADE_COUNT as f64 - 1.0) * self.eps_gap {
            return Err(Error::InvalidConfig(format!(
                "v_max {} leaves no room for 9 grades with eps_gap {}",
                self.v_max, self.eps_gap
            )));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be >= 1".into()));
        }
        Ok(())
    }
}

/// Outcome of [`individualize_scale`].
#[derive(Debug, Clone, Serialize)]
pub struct IndividualizationResult {
    pub scale: ScaleAssignment,
    #[serde(rename = "objective")]
    pub objective_value: f64,
    #[serde(rename = "baseline")]
    pub baseline_objective: f64,
    pub improvement: f64,
    pub evaluations: usize,
    /// (sweep number, objective after the sweep) per completed sweep.
    #[serde(skip)]
    pub trace: Vec<(usize, f64)>,
}

/// The configured inconsistency measure of `realize(pcm, scale)`.
pub fn objective(
    pcm: &LinguisticPcm,
    scale: &ScaleAssignment,
    cfg: &IndividualizationConfig,
    ri: &RandomIndexTable,
) -> Result<f64> {
    let m = realize(pcm, scale)?;
    let n = m.n();
    let solution = eigen_priority_default(&m)?;
    let ci = clamp_ci((solution.lambda_max - n as f64) / (n as f64 - 1.0));
    match cfg.objective {
        Objective::Ci => Ok(ci),
        Objective::LambdaMaxGap => Ok(ci * (n as f64 - 1.0)),
        Objective::Cr => {
            if ci == 0.0 {
                Ok(0.0)
            } else {
                let denom = ri.ri(n).ok_or(Error::MissingRandomIndex { n })?;
                Ok(ci / denom)
            }
        }
    }
}

/// Minimizes the configured objective by coordinate descent from the fixed
/// scale v_k = k.
///
/// Each sweep visits grades 2..=9 in order. For each grade two kinds of
/// candidate move are evaluated: the value moves v_k +- step, clamped into
/// the feasible band [v_(k-1) + eps_gap, v_(k+1) - eps_gap] (v_max bounds
/// grade 9), and the tail shifts that move v_k..v_9 together by up to step
/// (clamped so the gap below v_k and the v_max bound survive). Tail shifts
/// make the compressing descent directions reachable: minimizing an
/// inconsistency ratio typically wants several neighbouring grade values
/// moved jointly, where any single-value move is worse. The best strictly
/// improving candidate is accepted. When a sweep makes no progress the
/// search moves to the next (smaller) step; after the last step it re-runs
/// the schedule until a full cycle brings no improvement, so the returned
/// scale is a fixed point of the whole schedule. Deterministic: no
/// randomness anywhere.
pub fn individualize_scale(
    pcm: &LinguisticPcm,
    cfg: &IndividualizationConfig,
    ri: &RandomIndexTable,
) -> Result<IndividualizationResult> {
    individualize_scale_from(pcm, &ScaleAssignment::saaty(), cfg, ri)
}

/// [`individualize_scale`] from an explicit starting scale. Falls back to
/// the fixed scale if the search cannot beat the baseline from this start.
pub fn individualize_scale_from(
    pcm: &LinguisticPcm,
    start: &ScaleAssignment,
    cfg: &IndividualizationConfig,
    ri: &RandomIndexTable,
) -> Result<IndividualizationResult> {
    cfg.validate()?;
    let report = validate_pcm(pcm);
    if !report.ok() {
        return Err(Error::InvalidPcm(report));
    }
    ScaleAssignment::with_bounds(*start.values(), cfg.eps_gap, cfg.v_max)?;

    let mut evaluations = 0usize;
    let mut eval = |values: &[f64; GRADE_COUNT]| -> Result<f64> {
        evaluations += 1;
        let scale = ScaleAssignment::from_raw(*values)?;
        objective(pcm, &scale, cfg, ri)
    };

    let baseline = if start.is_saaty() {
        None // computed as the starting objective below
    } else {
        Some(eval(ScaleAssignment::saaty().values())?)
    };

    let mut values = *start.values();
    let mut current = eval(&values)?;
    let baseline = baseline.unwrap_or(current);

    let mut trace = Vec::new();
    let mut pass = 0usize;
    'search: loop {
        let mut improved_in_cycle = false;
        for &step in &cfg.step_schedule {
            loop {
                if pass >= cfg.max_passes {
                    break 'search;
                }
                pass += 1;
                let mut improved = false;
                for k in 1..GRADE_COUNT {
                    let mut candidates: Vec<[f64; GRADE_COUNT]> = Vec::with_capacity(4);

                    let lo = values[k - 1] + cfg.eps_gap;
                    let hi = if k == GRADE_COUNT - 1 {
                        cfg.v_max
                    } else {
                        values[k + 1] - cfg.eps_gap
                    };
                    if lo <= hi {
                        for candidate in [values[k] + step, values[k] - step] {
                            let clamped = candidate.clamp(lo, hi);
                            if clamped != values[k] {
                                let mut trial = values;
                                trial[k] = clamped;
                                candidates.push(trial);
                            }
                        }
                    }

                    if k < GRADE_COUNT - 1 {
                        let up = step.min(cfg.v_max - values[GRADE_COUNT - 1]).max(0.0);
                        let down = step.min(values[k] - (values[k - 1] + cfg.eps_gap)).max(0.0);
                        for delta in [up, -down] {
                            if delta == 0.0 {
                                continue;
                            }
                            let mut trial = values;
                            for value in &mut trial[k..] {
                                *value += delta;
                            }
                            candidates.push(trial);
                        }
                    }

                    let mut best = current;
                    let mut best_trial = None;
                    for trial in candidates {
                        let objective_value = eval(&trial)?;
                        if objective_value < best {
                            best = objective_value;
                            best_trial = Some(trial);
                        }
                    }
                    if let Some(trial) = best_trial {
                        values = trial;
                        current = best;
                        improved = true;
                        improved_in_cycle = true;
                    }
                }
                trace.push((pass, current));
                if !improved {
                    break;
                }
            }
        }
        if !improved_in_cycle {
            break;
        }
    }

    // Never return a scale worse than (or merely tied with) the default.
    let (scale, objective_value) = if current < baseline {
        (
            ScaleAssignment::with_bounds(values, cfg.eps_gap, cfg.v_max)?,
            current,
        )
    } else {
        (ScaleAssignment::saaty(), baseline)
    };

    Ok(IndividualizationResult {
        scale,
        objective_value,
        baseline_objective: baseline,
        improvement: baseline - objective_value,
        evaluations,
        trace,
    })
}

/// Maximum distinct grades (above indifference) the grid oracle enumerates.
pub const ORACLE_MAX_GRADES: usize = 4;

/// Minimum lattice spacing accepted by the oracle.
pub const ORACLE_MIN_GRID_STEP: f64 = 0.25;

/// Exhaustive baseline for [`individualize_scale`]: enumerates every
/// monotone assignment of the used grades to lattice points
/// {1, 1 + grid_step, ..., v_max} and returns the minimizer. Unused grades
/// are completed monotonically, each as close to its default value as the
/// neighbouring anchors allow; ties in the objective are broken toward the
/// default scale by the smallest sum of |v_k - k|.
pub fn oracle_grid_search(
    pcm: &LinguisticPcm,
    grid_step: f64,
    cfg: &IndividualizationConfig,
    ri: &RandomIndexTable,
) -> Result<(ScaleAssignment, f64)> {
    cfg.validate()?;
    if grid_step < ORACLE_MIN_GRID_STEP {
        return Err(Error::InvalidConfig(format!(
            "grid_step {grid_step} below minimum {ORACLE_MIN_GRID_STEP}"
        )));
    }
    let report = validate_pcm(pcm);
    if !report.ok() {
        return Err(Error::InvalidPcm(report));
    }

    let used: Vec<usize> = pcm.used_grades().iter().map(|g| g.get() as usize).collect();
    if used.len() > ORACLE_MAX_GRADES {
        return Err(Error::TooManyGrades {
            used: used.len(),
            max: ORACLE_MAX_GRADES,
        });
    }

    let lattice: Vec<f64> = {
        let mut points = Vec::new();
        let mut k = 0u32;
        loop {
            let value = 1.0 + k as f64 * grid_step;
            if value > cfg.v_max + 1e-12 {
                break;
            }
            points.push(value);
            k += 1;
        }
        points
    };

    let mut best: Option<(ScaleAssignment, f64, f64)> = None;
    let mut anchors = BTreeMap::new();
    enumerate_assignments(
        &used,
        0,
        &lattice,
        cfg,
        &mut anchors,
        &mut |anchors: &BTreeMap<usize, f64>| -> Result<()> {
            let values = complete_monotone(anchors, cfg.eps_gap, cfg.v_max);
            let scale = ScaleAssignment::with_bounds(values, cfg.eps_gap, cfg.v_max)?;
            let value = objective(pcm, &scale, cfg, ri)?;
            let distance = scale.distance_from_default();
            let better = match &best {
                None => true,
                Some((_, best_value, best_distance)) => {
                    value < *best_value || (value == *best_value && distance < *best_distance)
                }
            };
            if better {
                best = Some((scale, value, distance));
            }
            Ok(())
        },
    )?;

    let (scale, value, _) = best.expect("lattice always admits the default-completed scale");
    Ok((scale, value))
}

/// Recursively assigns lattice values to `used[depth..]`, pruning choices
/// that leave no room to interpolate the grades in between.
fn enumerate_assignments(
    used: &[usize],
    depth: usize,
    lattice: &[f64],
    cfg: &IndividualizationConfig,
    anchors: &mut BTreeMap<usize, f64>,
    visit: &mut impl FnMut(&BTreeMap<usize, f64>) -> Result<()>,
) -> Result<()> {
    if depth == used.len() {
        return visit(anchors);
    }
    let grade = used[depth];
    let (prev_grade, prev_value) = anchors
        .iter()
        .next_back()
        .map(|(g, v)| (*g, *v))
        .unwrap_or((1, 1.0));
    let min_value = prev_value + (grade - prev_grade) as f64 * cfg.eps_gap;
    let max_value = cfg.v_max - (GRADE_COUNT - grade) as f64 * cfg.eps_gap;
    for &value in lattice {
        if value < min_value - 1e-12 || value > max_value + 1e-12 {
            continue;
        }
        anchors.insert(grade, value);
        enumerate_assignments(used, depth + 1, lattice, cfg, anchors, visit)?;
        anchors.remove(&grade);
    }
    Ok(())
}

/// Fills unanchored grades monotonically, taking each as close to its
/// default value k as the anchors and gaps allow.
fn complete_monotone(
    anchors: &BTreeMap<usize, f64>,
    eps_gap: f64,
    v_max: f64,
) -> [f64; GRADE_COUNT] {
    let mut values = [0.0; GRADE_COUNT];
    values[0] = 1.0;
    for grade in 2..=GRADE_COUNT {
        let idx = grade - 1;
        if let Some(v) = anchors.get(&grade) {
            values[idx] = *v;
            continue;
        }
        let lo = values[idx - 1] + eps_gap;
        let hi = match anchors.range(grade + 1..).next() {
            Some((next_grade, next_value)) => next_value - (next_grade - grade) as f64 * eps_gap,
            None => v_max - (GRADE_COUNT - grade) as f64 * eps_gap,
        };
        values[idx] = (grade as f64).clamp(lo, hi);
    }
    values
}
