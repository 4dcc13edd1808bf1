//! The pairwise-comparison data model: grades, judgments, linguistic
//! matrices, and their numeric realization under a scale assignment.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scale::ScaleAssignment;

/// Relative tolerance for the reciprocity check a_ij * a_ji = 1.
pub const RECIPROCITY_TOL: f64 = 1e-12;

/// Linguistic intensity grade: 1 (indifference) through 9 (extreme dominance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade(u8);

impl Grade {
    pub const INDIFFERENCE: Grade = Grade(1);
    pub const MAX: Grade = Grade(9);

    pub fn new(value: u8) -> Result<Self> {
        if (1..=9).contains(&value) {
            Ok(Grade(value))
        } else {
            Err(Error::parse(
                "grade",
                format!("label grade out of range: {value} (must be 1..=9)"),
            ))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A grade together with its display wording.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinguisticLabel {
    pub grade: Grade,
    pub name: String,
}

/// The nine display names attached to grades 1..=9.
///
/// Experiments word their labels around the judged quantity ("Extremely
/// Dense", "Moderately Heavy"); only the grade index enters the algorithms,
/// so wording is configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    names: [String; 9],
}

impl LabelSet {
    pub fn new(names: [String; 9]) -> Result<Self> {
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != 9 {
            return Err(Error::InvalidConfig(
                "label set must contain 9 distinct names".into(),
            ));
        }
        Ok(LabelSet { names })
    }

    /// Default intensity wording, anchored at grade 5 "Moderately" and
    /// grade 9 "Extremely".
    pub fn default_names() -> Self {
        let names = [
            "Equally",
            "Marginally",
            "Slightly",
            "Fairly",
            "Moderately",
            "Considerably",
            "Strongly",
            "Very Strongly",
            "Extremely",
        ]
        .map(String::from);
        LabelSet { names }
    }

    pub fn name(&self, grade: Grade) -> &str {
        &self.names[grade.get() as usize - 1]
    }

    pub fn label(&self, grade: Grade) -> LinguisticLabel {
        LinguisticLabel {
            grade,
            name: self.name(grade).to_string(),
        }
    }
}

/// Which side of the unordered pair dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    IOverJ,
    JOverI,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::IOverJ => Direction::JOverI,
            Direction::JOverI => Direction::IOverJ,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::IOverJ => "i_over_j",
            Direction::JOverI => "j_over_i",
        }
    }

    pub fn parse(token: &str) -> Option<Direction> {
        match token {
            "i_over_j" => Some(Direction::IOverJ),
            "j_over_i" => Some(Direction::JOverI),
            _ => None,
        }
    }
}

/// One elicited comparison for the unordered pair (i, j), i < j.
///
/// Indifference (grade 1) is stored with direction `IOverJ` so PCM equality
/// is well defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Judgment {
    i: usize,
    j: usize,
    grade: Grade,
    direction: Direction,
}

impl Judgment {
    pub fn new(i: usize, j: usize, grade: Grade, direction: Direction) -> Result<Self> {
        if i == j {
            return Err(Error::parse(
                format!("pair ({i},{j})"),
                "diagonal pair not allowed",
            ));
        }
        if i > j {
            return Err(Error::parse(
                format!("pair ({i},{j})"),
                "pair must be upper-triangle (i < j)",
            ));
        }
        let direction = if grade == Grade::INDIFFERENCE {
            Direction::IOverJ
        } else {
            direction
        };
        Ok(Judgment {
            i,
            j,
            grade,
            direction,
        })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn grade(&self) -> Grade {
        self.grade
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Same pair and grade with the dominance side swapped.
    pub fn flipped(&self) -> Judgment {
        Judgment::new(self.i, self.j, self.grade, self.direction.flipped())
            .expect("flipping preserves validity")
    }
}

/// A decision-maker's full set of linguistic judgments over `n` alternatives.
///
/// Structural invariants (pair coverage, uniqueness, n >= 2) are checked by
/// [`validate_pcm`], not at construction, so malformed inputs can be
/// inspected and reported rather than rejected opaquely.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticPcm {
    pub id: String,
    pub n: usize,
    pub items: Vec<String>,
    pub judgments: Vec<Judgment>,
}

impl LinguisticPcm {
    pub fn new(
        id: impl Into<String>,
        n: usize,
        items: Vec<String>,
        judgments: Vec<Judgment>,
    ) -> Self {
        LinguisticPcm {
            id: id.into(),
            n,
            items,
            judgments,
        }
    }

    /// Expected judgment count n(n-1)/2.
    pub fn expected_judgments(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Grades above indifference present in the judgments, ascending.
    pub fn used_grades(&self) -> Vec<Grade> {
        let set: BTreeSet<Grade> = self
            .judgments
            .iter()
            .map(|j| j.grade())
            .filter(|g| *g != Grade::INDIFFERENCE)
            .collect();
        set.into_iter().collect()
    }

    /// Copy with every judgment's dominance side swapped.
    pub fn flipped(&self) -> LinguisticPcm {
        LinguisticPcm {
            id: self.id.clone(),
            n: self.n,
            items: self.items.clone(),
            judgments: self.judgments.iter().map(Judgment::flipped).collect(),
        }
    }
}

/// Default names for alternatives when the input format carries none.
pub fn default_item_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("item-{k}")).collect()
}

/// One structural violation found by [`validate_pcm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewAlternatives { n: usize },
    ItemCountMismatch { n: usize, items: usize },
    IndexOutOfRange { i: usize, j: usize, n: usize },
    DuplicatePair { i: usize, j: usize },
    MissingPair { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewAlternatives { n } => {
                write!(f, "need at least 2 alternatives, got {n}")
            }
            Violation::ItemCountMismatch { n, items } => {
                write!(f, "expected {n} item names, got {items}")
            }
            Violation::IndexOutOfRange { i, j, n } => {
                write!(f, "pair ({i},{j}) out of range for n={n}")
            }
            Violation::DuplicatePair { i, j } => write!(f, "duplicate pair ({i},{j})"),
            Violation::MissingPair { i, j } => write!(f, "missing pair ({i},{j})"),
        }
    }
}

/// Outcome of structural validation; violations are data, not faults.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Checks the structural invariants of a linguistic PCM: n >= 2, item-name
/// count, indices in range, and exactly one judgment per unordered pair.
pub fn validate_pcm(pcm: &LinguisticPcm) -> ValidationReport {
    let mut violations = Vec::new();
    if pcm.n < 2 {
        violations.push(Violation::TooFewAlternatives { n: pcm.n });
    }
    if pcm.items.len() != pcm.n {
        violations.push(Violation::ItemCountMismatch {
            n: pcm.n,
            items: pcm.items.len(),
        });
    }
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for judgment in &pcm.judgments {
        let (i, j) = (judgment.i(), judgment.j());
        if j >= pcm.n {
            violations.push(Violation::IndexOutOfRange { i, j, n: pcm.n });
            continue;
        }
        if !seen.insert((i, j)) {
            violations.push(Violation::DuplicatePair { i, j });
        }
    }
    for i in 0..pcm.n {
        for j in i + 1..pcm.n {
            if !seen.contains(&(i, j)) {
                violations.push(Violation::MissingPair { i, j });
            }
        }
    }
    ValidationReport { violations }
}

/// A positive reciprocal matrix: a_ii = 1, a_ij * a_ji = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPcm {
    n: usize,
    entries: Vec<f64>,
}

impl NumericPcm {
    /// Validates and wraps a row-major n*n entry buffer.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: entries.len(),
            });
        }
        for (idx, a) in entries.iter().enumerate() {
            if !a.is_finite() || *a <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "matrix entry [{},{}] = {} is not positive finite",
                    idx / n,
                    idx % n,
                    a
                )));
            }
        }
        for i in 0..n {
            if (entries[i * n + i] - 1.0).abs() > RECIPROCITY_TOL {
                return Err(Error::InvalidConfig(format!(
                    "diagonal entry [{i},{i}] = {} must be 1",
                    entries[i * n + i]
                )));
            }
            for j in i + 1..n {
                let product = entries[i * n + j] * entries[j * n + i];
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(Error::InvalidConfig(format!(
                        "reciprocity violated at ({i},{j}): a_ij * a_ji = {product}"
                    )));
                }
            }
        }
        Ok(NumericPcm { n, entries })
    }

    /// The exactly consistent matrix a_ij = w_i / w_j.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if n < 2 {
            return Err(Error::InvalidConfig(
                "need at least 2 weights to form a matrix".into(),
            ));
        }
        for w in weights {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidConfig(format!("weight {w} is not positive")));
            }
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = if i == j { 1.0 } else { weights[i] / weights[j] };
            }
        }
        NumericPcm::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, v)| a * v).sum())
            .collect()
    }

    /// Row/column permutation: entry (i, j) of the result is a(perm[i], perm[j]).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: perm.len(),
            });
        }
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        NumericPcm::new(n, entries)
    }

    /// Max deviation of a_ij * a_jk from a_ik over all triples; 0 for a
    /// perfectly consistent matrix.
    pub fn max_triple_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let dev = (self.get(i, j) * self.get(j, k) - self.get(i, k)).abs();
                    worst = worst.max(dev);
                }
            }
        }
        worst
    }
}

/// Realizes a linguistic PCM as a numeric reciprocal matrix under `scale`.
///
/// For a judgment on pair (i, j) with value v = scale(grade): a_ij = v and
/// a_ji = 1/v when the direction is `IOverJ`, mirrored otherwise.
pub fn realize(pcm: &LinguisticPcm, scale: &ScaleAssignment) -> Result<NumericPcm> {
    let report = validate_pcm(pcm);
    if !report.ok() {
        return Err(Error::InvalidPcm(report));
    }
    let n = pcm.n;
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
    }
    for judgment in &pcm.judgments {
        let v = scale.value(judgment.grade());
        let (i, j) = (judgment.i(), judgment.j());
        match judgment.direction() {
            Direction::IOverJ => {
                entries[i * n + j] = v;
                entries[j * n + i] = 1.0 / v;
            }
            Direction::JOverI => {
                entries[j * n + i] = v;
                entries[i * n + j] = 1.0 / v;
            }
        }
    }
    NumericPcm::new(n, entries)
}
