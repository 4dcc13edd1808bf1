//! Priority derivation from numeric reciprocal matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pcm::NumericPcm;

/// Default max-norm tolerance on successive normalized iterates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default iteration cap; positive matrices converge in far fewer steps.
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Normalized positive weights over alternatives: all > 0, sum = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PriorityVector(Vec<f64>);

impl PriorityVector {
    /// Wraps weights that already sum to 1 (within 1e-9).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyInput("priority vector".into()));
        }
        for w in &weights {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "priority weight {w} is not positive"
                )));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "priority weights sum to {sum}, expected 1"
            )));
        }
        Ok(PriorityVector(weights))
    }

    /// Normalizes raw positive values to sum 1.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput("priority vector".into()));
        }
        for w in raw {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidConfig(format!("weight {w} is not positive")));
            }
        }
        let sum: f64 = raw.iter().sum();
        Ok(PriorityVector(raw.iter().map(|w| w / sum).collect()))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'de> Deserialize<'de> for PriorityVector {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(deserializer)?;
        PriorityVector::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Output of [`eigen_priority`].
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub priorities: PriorityVector,
    pub lambda_max: f64,
    pub iterations: usize,
}

/// Principal right eigenvector by power iteration from the uniform start.
///
/// Each iterate is sum-normalized; iteration stops when successive iterates
/// differ by less than `tol` in max norm. The principal eigenvalue is
/// estimated as the mean of the component-wise Rayleigh ratios (A v)_i / v_i
/// at the converged iterate.
pub fn eigen_priority(m: &NumericPcm, tol: f64, max_iter: usize) -> Result<EigenSolution> {
    if tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("tol must be positive: {tol}")));
    }
    let n = m.n();
    let mut v = vec![1.0 / n as f64; n];
    for iteration in 1..=max_iter {
        let mut w = m.mul_vec(&v);
        let sum: f64 = w.iter().sum();
        for x in &mut w {
            *x /= sum;
        }
        let diff = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if diff < tol {
            let lambda_max = mean_rayleigh(m, &w);
            return Ok(EigenSolution {
                priorities: PriorityVector::new(w)?,
                lambda_max,
                iterations: iteration,
            });
        }
        v = w;
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        last: v,
    })
}

/// [`eigen_priority`] with the default tolerance and iteration cap.
pub fn eigen_priority_default(m: &NumericPcm) -> Result<EigenSolution> {
    eigen_priority(m, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

fn mean_rayleigh(m: &NumericPcm, v: &[f64]) -> f64 {
    let u = m.mul_vec(v);
    let n = v.len() as f64;
    u.iter().zip(v).map(|(a, b)| a / b).sum::<f64>() / n
}

/// Principal eigenvalue estimate without the convergence-failure path:
/// falls back to the Rayleigh estimate of the last iterate. Used where a
/// best-effort lambda is preferable to an error (random-index sampling).
pub(crate) fn lambda_max_estimate(m: &NumericPcm) -> f64 {
    match eigen_priority_default(m) {
        Ok(solution) => solution.lambda_max,
        Err(Error::NonConvergence { last, .. }) => mean_rayleigh(m, &last),
        Err(_) => unreachable!("eigen_priority only fails with NonConvergence for valid input"),
    }
}

/// Row geometric mean prioritization: w_i proportional to (prod_j a_ij)^(1/n).
pub fn geomean_priority(m: &NumericPcm) -> PriorityVector {
    let n = m.n();
    let raw: Vec<f64> = (0..n)
        .map(|i| {
            let log_sum: f64 = (0..n).map(|j| m.get(i, j).ln()).sum();
            (log_sum / n as f64).exp()
        })
        .collect();
    PriorityVector::normalized(&raw).expect("geometric means of positive entries are positive")
}
