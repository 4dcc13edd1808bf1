//! Numerical scale assignments for the nine linguistic intensity grades.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pcm::Grade;

/// Number of linguistic intensity grades.
pub const GRADE_COUNT: usize = 9;

/// Default minimum gap between consecutive grade values.
pub const DEFAULT_EPS_GAP: f64 = 0.01;

/// Default upper bound on the grade-9 value (the fixed scale's own maximum).
pub const DEFAULT_V_MAX: f64 = 9.0;

/// Slack for floating-point comparisons of gap and bound constraints.
const BOUND_TOL: f64 = 1e-12;

/// Maps each grade k = 1..=9 to a positive value v_k.
///
/// Invariants: v_1 = 1 exactly (indifference maps to unity), values are
/// strictly increasing, and bounded constructors additionally require a
/// minimum gap `eps_gap` between neighbours and v_9 <= v_max.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleAssignment {
    values: [f64; GRADE_COUNT],
}

impl ScaleAssignment {
    /// The fixed scale v_k = k used as the baseline everywhere.
    pub fn saaty() -> Self {
        ScaleAssignment {
            values: [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0],
        }
    }

    /// Validates against the default gap and bound.
    pub fn new(values: [f64; GRADE_COUNT]) -> Result<Self> {
        Self::with_bounds(values, DEFAULT_EPS_GAP, DEFAULT_V_MAX)
    }

    /// Validates against explicit `eps_gap` / `v_max` constraints.
    pub fn with_bounds(values: [f64; GRADE_COUNT], eps_gap: f64, v_max: f64) -> Result<Self> {
        let scale = Self::from_raw(values)?;
        for k in 0..GRADE_COUNT - 1 {
            if values[k + 1] - values[k] < eps_gap - BOUND_TOL {
                return Err(Error::InvalidScale(format!(
                    "gap between v{} and v{} is {} (< eps_gap {})",
                    k + 1,
                    k + 2,
                    values[k + 1] - values[k],
                    eps_gap
                )));
            }
        }
        if values[GRADE_COUNT - 1] > v_max + BOUND_TOL {
            return Err(Error::InvalidScale(format!(
                "v9 = {} exceeds v_max {}",
                values[GRADE_COUNT - 1],
                v_max
            )));
        }
        Ok(scale)
    }

    /// Checks only the universal invariants: v_1 = 1, finite, positive,
    /// strictly increasing. Used when the governing gap/bound configuration
    /// is not known, e.g. deserialization.
    pub fn from_raw(values: [f64; GRADE_COUNT]) -> Result<Self> {
        if values[0] != 1.0 {
            return Err(Error::InvalidScale(format!(
                "v1 must be exactly 1, got {}",
                values[0]
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Error::InvalidScale(format!(
                    "v{} = {} is not a positive finite number",
                    k + 1,
                    v
                )));
            }
        }
        for k in 0..GRADE_COUNT - 1 {
            if values[k + 1] <= values[k] {
                return Err(Error::InvalidScale(format!(
                    "values must be strictly increasing: v{} = {} <= v{} = {}",
                    k + 2,
                    values[k + 1],
                    k + 1,
                    values[k]
                )));
            }
        }
        Ok(ScaleAssignment { values })
    }

    /// Numeric value assigned to `grade`.
    pub fn value(&self, grade: Grade) -> f64 {
        self.values[grade.get() as usize - 1]
    }

    pub fn values(&self) -> &[f64; GRADE_COUNT] {
        &self.values
    }

    pub fn is_saaty(&self) -> bool {
        self.values == *Self::saaty().values()
    }

    /// Sum of |v_k - k|, the tie-break distance from the fixed scale.
    pub fn distance_from_default(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| (v - (k as f64 + 1.0)).abs())
            .sum()
    }
}

impl Serialize for ScaleAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScaleAssignment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let values = <[f64; GRADE_COUNT]>::deserialize(deserializer)?;
        ScaleAssignment::from_raw(values).map_err(D::Error::custom)
    }
}
