//! Domain types for decision problems and their validation rules.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Default allowance for weights that do not sum to exactly one.
pub const DEFAULT_WEIGHT_SUM_TOLERANCE: f64 = 0.005;

/// Which way a criterion should move to be more desirable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    IncreaseDesired,
    DecreaseDesired,
}

impl Direction {
    /// Token used in criteria files: `max` or `min`.
    pub fn token(self) -> &'static str {
        match self {
            Direction::IncreaseDesired => "max",
            Direction::DecreaseDesired => "min",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token.trim() {
            "max" => Some(Direction::IncreaseDesired),
            "min" => Some(Direction::DecreaseDesired),
            _ => None,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::IncreaseDesired => Direction::DecreaseDesired,
            Direction::DecreaseDesired => Direction::IncreaseDesired,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub name: String,
    pub unit: String,
    pub direction: Direction,
    /// Least/most desirable bounds, in criterion units. `upper > lower`.
    pub lower: f64,
    pub upper: f64,
    pub weight: f64,
}

impl Criterion {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        unit: impl Into<String>,
        direction: Direction,
        lower: f64,
        upper: f64,
        weight: f64,
    ) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            unit: unit.into(),
            direction,
            lower,
            upper,
            weight,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.max(self.lower).min(self.upper)
    }
}

/// One variant under evaluation. `values[i]` belongs to the problem's `i`-th criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: String,
    pub name: String,
    pub values: Vec<f64>,
}

impl Alternative {
    pub fn new(id: impl Into<String>, name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            values,
        }
    }
}

/// Criteria, alternatives and the raw decision matrix they imply.
///
/// Declaration order of both lists is significant: every matrix and report
/// produced from a problem follows it, and it breaks ties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionProblem {
    pub criteria: Vec<Criterion>,
    pub alternatives: Vec<Alternative>,
    pub weight_sum_tolerance: f64,
}

impl DecisionProblem {
    pub fn new(criteria: Vec<Criterion>, alternatives: Vec<Alternative>) -> Self {
        Self {
            criteria,
            alternatives,
            weight_sum_tolerance: DEFAULT_WEIGHT_SUM_TOLERANCE,
        }
    }

    pub fn with_weight_sum_tolerance(mut self, tolerance: f64) -> Self {
        self.weight_sum_tolerance = tolerance;
        self
    }

    /// Raw value of criterion `criterion` for alternative `alternative`.
    pub fn raw(&self, criterion: usize, alternative: usize) -> f64 {
        self.alternatives[alternative].values[criterion]
    }

    pub fn weights(&self) -> Vec<f64> {
        self.criteria.iter().map(|c| c.weight).collect()
    }

    pub fn weight_sum(&self) -> f64 {
        self.criteria.iter().map(|c| c.weight).sum()
    }

    pub fn criterion_index(&self, id: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c.id == id)
    }

    pub fn alternative_index(&self, id: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a.id == id)
    }

    /// Copy of the problem with every weight replaced, in criterion order.
    pub fn with_weights(&self, weights: &[f64]) -> Self {
        let mut out = self.clone();
        for (criterion, &w) in out.criteria.iter_mut().zip(weights) {
            criterion.weight = w;
        }
        out
    }

    /// Snaps every raw value into its criterion's `[lower, upper]` range.
    pub fn clamped(&self) -> Self {
        let mut out = self.clone();
        for alternative in &mut out.alternatives {
            for (value, criterion) in alternative.values.iter_mut().zip(&self.criteria) {
                if criterion.lower <= criterion.upper {
                    *value = criterion.clamp(*value);
                }
            }
        }
        out
    }
}

/// One broken rule found by [`validate_problem`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoCriteria,
    TooFewAlternatives {
        found: usize,
    },
    DuplicateCriterion {
        id: String,
    },
    DuplicateAlternative {
        id: String,
    },
    DegenerateRange {
        criterion: String,
    },
    InvertedRange {
        criterion: String,
        lower: f64,
        upper: f64,
    },
    NonFiniteBound {
        criterion: String,
    },
    NonPositiveWeight {
        criterion: String,
        weight: f64,
    },
    WeightSum {
        sum: f64,
        tolerance: f64,
    },
    ValueCount {
        alternative: String,
        expected: usize,
        found: usize,
    },
    NonFiniteValue {
        criterion: String,
        alternative: String,
    },
    OutOfRange {
        criterion: String,
        alternative: String,
        value: f64,
        lower: f64,
        upper: f64,
    },
}

impl Violation {
    /// Violations that clamping can repair.
    pub fn is_range_only(&self) -> bool {
        matches!(self, Violation::OutOfRange { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoCriteria => write!(f, "at least 1 criterion required"),
            Violation::TooFewAlternatives { found } => {
                write!(f, "at least 2 alternatives required (found {found})")
            }
            Violation::DuplicateCriterion { id } => write!(f, "duplicate criterion id {id}"),
            Violation::DuplicateAlternative { id } => write!(f, "duplicate alternative id {id}"),
            Violation::DegenerateRange { criterion } => {
                write!(f, "degenerate range on {criterion}")
            }
            Violation::InvertedRange { criterion, lower, upper } => {
                write!(f, "inverted range on {criterion}: lower {lower} > upper {upper}")
            }
            Violation::NonFiniteBound { criterion } => {
                write!(f, "non-finite bound on {criterion}")
            }
            Violation::NonPositiveWeight { criterion, weight } => {
                write!(f, "weight of {criterion} must be positive (got {weight})")
            }
            Violation::WeightSum { sum, tolerance } => {
                write!(f, "weights sum to {sum}, not 1 within tolerance {tolerance}")
            }
            Violation::ValueCount { alternative, expected, found } => write!(
                f,
                "alternative {alternative} has {found} values, expected {expected}"
            ),
            Violation::NonFiniteValue { criterion, alternative } => {
                write!(f, "non-finite value at ({criterion}, {alternative})")
            }
            Violation::OutOfRange { criterion, alternative, value, lower, upper } => write!(
                f,
                "value out of range at ({criterion}, {alternative}): {value} not in [{lower}, {upper}]"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn only_range_violations(&self) -> bool {
        self.violations.iter().all(Violation::is_range_only)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, violation) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{violation}")?;
        }
        Ok(())
    }
}

/// Checks every structural and numeric rule a problem must satisfy before ranking.
///
/// Violations are collected, never raised: the report lists all of them.
pub fn validate_problem(problem: &DecisionProblem) -> ValidationReport {
    let mut violations = Vec::new();

    if problem.criteria.is_empty() {
        violations.push(Violation::NoCriteria);
    }
    if problem.alternatives.len() < 2 {
        violations.push(Violation::TooFewAlternatives {
            found: problem.alternatives.len(),
        });
    }

    let mut seen = HashSet::new();
    for criterion in &problem.criteria {
        if !seen.insert(criterion.id.as_str()) {
            violations.push(Violation::DuplicateCriterion {
                id: criterion.id.clone(),
            });
        }
        if !criterion.lower.is_finite() || !criterion.upper.is_finite() {
            violations.push(Violation::NonFiniteBound {
                criterion: criterion.id.clone(),
            });
        } else if criterion.upper == criterion.lower {
            violations.push(Violation::DegenerateRange {
                criterion: criterion.id.clone(),
            });
        } else if criterion.upper < criterion.lower {
            violations.push(Violation::InvertedRange {
                criterion: criterion.id.clone(),
                lower: criterion.lower,
                upper: criterion.upper,
            });
        }
        // NaN fails `> 0` as well
        if !(criterion.weight > 0.0 && criterion.weight.is_finite()) {
            violations.push(Violation::NonPositiveWeight {
                criterion: criterion.id.clone(),
                weight: criterion.weight,
            });
        }
    }

    if !problem.criteria.is_empty() {
        let sum = problem.weight_sum();
        let deviation = (sum - 1.0).abs();
        if deviation.is_nan() || deviation > problem.weight_sum_tolerance {
            violations.push(Violation::WeightSum {
                sum,
                tolerance: problem.weight_sum_tolerance,
            });
        }
    }

    let mut seen = HashSet::new();
    for alternative in &problem.alternatives {
        if !seen.insert(alternative.id.as_str()) {
            violations.push(Violation::DuplicateAlternative {
                id: alternative.id.clone(),
            });
        }
        if alternative.values.len() != problem.criteria.len() {
            violations.push(Violation::ValueCount {
                alternative: alternative.id.clone(),
                expected: problem.criteria.len(),
                found: alternative.values.len(),
            });
            continue;
        }
        for (criterion, &value) in problem.criteria.iter().zip(&alternative.values) {
            if !value.is_finite() {
                violations.push(Violation::NonFiniteValue {
                    criterion: criterion.id.clone(),
                    alternative: alternative.id.clone(),
                });
            } else if !criterion.contains(value) {
                violations.push(Violation::OutOfRange {
                    criterion: criterion.id.clone(),
                    alternative: alternative.id.clone(),
                    value,
                    lower: criterion.lower,
                    upper: criterion.upper,
                });
            }
        }
    }

    ValidationReport { violations }
}
