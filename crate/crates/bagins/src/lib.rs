//! Priority derivation from linguistic pairwise comparison matrices.
//!
//! A decision-maker compares alternatives two at a time using verbal
//! intensity grades ("Moderately", "Extremely", ...). Realizing those
//! judgments as a numeric reciprocal matrix requires a numerical scale:
//! a map from the nine grades to positive numbers. This crate provides
//! the comparison data model, priority derivation (power iteration and
//! geometric mean), consistency measurement (CI/CR with a simulated
//! random-index table), a coordinate-descent search that individualizes
//! the numerical scale per decision-maker to minimize inconsistency,
//! and generators plus an evaluation harness for benchmarking recovered
//! priorities against known ground truth.

pub mod consistency;
pub mod error;
pub mod eval;
pub mod individualize;
pub mod io;
pub mod pcm;
pub mod priority;
pub mod scale;
pub mod study;

pub(crate) mod rng;

pub use error::{Error, Result};
pub use pcm::{Direction, Grade, Judgment, LinguisticPcm, NumericPcm};
pub use priority::PriorityVector;
pub use scale::ScaleAssignment;
