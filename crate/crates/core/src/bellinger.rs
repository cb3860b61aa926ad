//! Path normalization, weighting and total ratings.
//!
//! A raw value is mapped to the fraction of the way it covers from the least
//! desirable bound of its criterion to the most desirable one. Fractions are
//! multiplied by the criterion weight and summed per alternative; the
//! alternative with the largest sum is the best variant.
//!
//! All arithmetic is carried at full `f64` precision. Rounding happens only
//! when a report is rendered.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Criterion, DecisionProblem, Direction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BellingerError {
    #[error("degenerate criterion range on {criterion}")]
    DegenerateRange { criterion: String },
    #[error("value out of range: {value} not in [{lower}, {upper}] for {criterion}")]
    ValueOutOfRange {
        criterion: String,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("at cell ({criterion}, {alternative}): {source}")]
    Cell {
        criterion: String,
        alternative: String,
        #[source]
        source: Box<BellingerError>,
    },
    #[error("dimension mismatch: expected {expected} {what}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("no alternatives to rank")]
    Empty,
}

/// How totals are reported: `Percent` multiplies the weighted sum by 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Percent,
    Unit,
}

impl Scale {
    pub fn factor(self) -> f64 {
        match self {
            Scale::Percent => 100.0,
            Scale::Unit => 1.0,
        }
    }
}

macro_rules! criterion_matrix {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name {
            entries: Vec<Vec<f64>>,
        }

        impl $name {
            /// Builds a matrix from `[criterion][alternative]` rows.
            pub fn from_rows(entries: Vec<Vec<f64>>) -> Self {
                Self { entries }
            }

            pub fn rows(&self) -> &[Vec<f64>] {
                &self.entries
            }

            pub fn row(&self, criterion: usize) -> &[f64] {
                &self.entries[criterion]
            }

            pub fn get(&self, criterion: usize, alternative: usize) -> f64 {
                self.entries[criterion][alternative]
            }

            pub fn n_criteria(&self) -> usize {
                self.entries.len()
            }

            pub fn n_alternatives(&self) -> usize {
                self.entries.first().map_or(0, Vec::len)
            }

            /// Sum of every criterion's entry for one alternative.
            pub fn column_sum(&self, alternative: usize) -> f64 {
                self.entries.iter().map(|row| row[alternative]).sum()
            }
        }
    };
}

criterion_matrix!(
    /// Path fractions in `[0, 1]`, indexed `[criterion][alternative]`.
    NormalizedMatrix
);
criterion_matrix!(
    /// Path fractions multiplied by their criterion weight.
    WeightedMatrix
);

/// Everything produced by one ranking run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub weights: Vec<f64>,
    pub normalized: NormalizedMatrix,
    pub weighted: WeightedMatrix,
    pub scale: Scale,
    /// Total rating per alternative, in declaration order, on `scale`.
    pub totals: Vec<f64>,
    /// Alternative ids sorted by descending total; ties keep declaration order.
    pub order: Vec<String>,
    pub best: String,
}

impl RankingResult {
    pub fn total(&self, alternative: &str) -> Option<f64> {
        self.alternatives
            .iter()
            .position(|a| a == alternative)
            .map(|j| self.totals[j])
    }
}

/// Fraction of the path from the least to the most desirable bound covered by `value`.
pub fn normalize_value(value: f64, criterion: &Criterion) -> Result<f64, BellingerError> {
    let width = criterion.width();
    if width.is_nan() || width <= 0.0 {
        return Err(BellingerError::DegenerateRange {
            criterion: criterion.id.clone(),
        });
    }
    if !criterion.contains(value) {
        return Err(BellingerError::ValueOutOfRange {
            criterion: criterion.id.clone(),
            value,
            lower: criterion.lower,
            upper: criterion.upper,
        });
    }
    let rising = (value - criterion.lower) / width;
    // (upper - value) / width, written so the two directions are exact complements
    Ok(match criterion.direction {
        Direction::IncreaseDesired => rising,
        Direction::DecreaseDesired => 1.0 - rising,
    })
}

pub fn normalize_matrix(problem: &DecisionProblem) -> Result<NormalizedMatrix, BellingerError> {
    let mut entries = Vec::with_capacity(problem.criteria.len());
    for (i, criterion) in problem.criteria.iter().enumerate() {
        let mut row = Vec::with_capacity(problem.alternatives.len());
        for alternative in &problem.alternatives {
            let value = *alternative
                .values
                .get(i)
                .ok_or(BellingerError::DimensionMismatch {
                    what: "values",
                    expected: problem.criteria.len(),
                    found: alternative.values.len(),
                })?;
            let fraction =
                normalize_value(value, criterion).map_err(|source| BellingerError::Cell {
                    criterion: criterion.id.clone(),
                    alternative: alternative.id.clone(),
                    source: Box::new(source),
                })?;
            row.push(fraction);
        }
        entries.push(row);
    }
    Ok(NormalizedMatrix::from_rows(entries))
}

pub fn apply_weights(
    normalized: &NormalizedMatrix,
    criteria: &[Criterion],
) -> Result<WeightedMatrix, BellingerError> {
    if normalized.n_criteria() != criteria.len() {
        return Err(BellingerError::DimensionMismatch {
            what: "criteria rows",
            expected: criteria.len(),
            found: normalized.n_criteria(),
        });
    }
    let entries = normalized
        .rows()
        .iter()
        .zip(criteria)
        .map(|(row, criterion)| row.iter().map(|x| criterion.weight * x).collect())
        .collect();
    Ok(WeightedMatrix::from_rows(entries))
}

/// Per-alternative totals and the descending order they induce.
#[derive(Debug, Clone, PartialEq)]
pub struct Totals {
    pub values: Vec<f64>,
    /// Alternative indices, best first.
    pub order: Vec<usize>,
}

pub fn total_ratings(
    weighted: &WeightedMatrix,
    n_alternatives: usize,
    scale: Scale,
) -> Result<Totals, BellingerError> {
    if n_alternatives == 0 {
        return Err(BellingerError::Empty);
    }
    if let Some(row) = weighted
        .rows()
        .iter()
        .find(|row| row.len() != n_alternatives)
    {
        return Err(BellingerError::DimensionMismatch {
            what: "alternatives",
            expected: n_alternatives,
            found: row.len(),
        });
    }
    let values: Vec<f64> = (0..n_alternatives)
        .map(|j| scale.factor() * weighted.column_sum(j))
        .collect();
    let mut order: Vec<usize> = (0..n_alternatives).collect();
    // stable: equal totals keep declaration order
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(Ordering::Equal));
    Ok(Totals { values, order })
}

/// Id of the highest total; the earliest-declared alternative wins exact ties.
pub fn best_variant(ranking: &RankingResult) -> &str {
    let mut best = 0;
    for (j, &total) in ranking.totals.iter().enumerate() {
        if total > ranking.totals[best] {
            best = j;
        }
    }
    &ranking.alternatives[best]
}

pub fn rank(problem: &DecisionProblem) -> Result<RankingResult, BellingerError> {
    rank_with_scale(problem, Scale::Percent)
}

pub fn rank_with_scale(
    problem: &DecisionProblem,
    scale: Scale,
) -> Result<RankingResult, BellingerError> {
    let normalized = normalize_matrix(problem)?;
    let weighted = apply_weights(&normalized, &problem.criteria)?;
    let totals = total_ratings(&weighted, problem.alternatives.len(), scale)?;
    let alternatives: Vec<String> = problem.alternatives.iter().map(|a| a.id.clone()).collect();
    let order: Vec<String> = totals
        .order
        .iter()
        .map(|&j| alternatives[j].clone())
        .collect();
    let mut ranking = RankingResult {
        criteria: problem.criteria.iter().map(|c| c.id.clone()).collect(),
        alternatives,
        weights: problem.weights(),
        normalized,
        weighted,
        scale,
        totals: totals.values,
        order,
        best: String::new(),
    };
    ranking.best = best_variant(&ranking).to_string();
    Ok(ranking)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Alternative;

    fn increasing(lower: f64, upper: f64) -> Criterion {
        Criterion::new("c", "c", "u", Direction::IncreaseDesired, lower, upper, 1.0)
    }

    #[test]
    fn salary_row_matches_published_fraction() {
        let c2 = Criterion::new(
            "c2",
            "",
            "",
            Direction::IncreaseDesired,
            2502.87,
            3238.53,
            0.105,
        );
        let x = normalize_value(3000.0, &c2).unwrap();
        assert!((x - 0.6758).abs() < 5e-5, "{x}");
    }

    #[test]
    fn distance_at_zero_is_fully_desirable() {
        let c10 = Criterion::new(
            "c10",
            "",
            "km",
            Direction::DecreaseDesired,
            0.0,
            762.4,
            0.083,
        );
        assert_eq!(normalize_value(0.0, &c10).unwrap(), 1.0);
        assert_eq!(normalize_value(762.4, &c10).unwrap(), 0.0);
    }

    #[test]
    fn lower_bound_is_zero_and_benefits_truncated_value() {
        assert_eq!(normalize_value(1.0, &increasing(1.0, 5.0)).unwrap(), 0.0);
        let x = normalize_value(300.0, &increasing(200.0, 800.0)).unwrap();
        assert!((x - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(
            normalize_value(3.0, &increasing(3.0, 3.0)),
            Err(BellingerError::DegenerateRange {
                criterion: "c".into()
            })
        );
        assert!(matches!(
            normalize_value(0.5, &increasing(1.0, 2.0)),
            Err(BellingerError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn matrix_errors_carry_cell() {
        let problem = DecisionProblem::new(
            vec![increasing(0.0, 1.0)],
            vec![
                Alternative::new("a", "", vec![0.5]),
                Alternative::new("b", "", vec![2.0]),
            ],
        );
        let err = normalize_matrix(&problem).unwrap_err();
        assert!(
            err.to_string()
                .starts_with("at cell (c, b): value out of range"),
            "{err}"
        );
    }

    #[test]
    fn bounds_map_to_zero_and_one() {
        let problem = DecisionProblem::new(
            vec![increasing(2.0, 4.0)],
            vec![
                Alternative::new("a", "", vec![2.0]),
                Alternative::new("b", "", vec![4.0]),
            ],
        );
        let m = normalize_matrix(&problem).unwrap();
        assert_eq!(m.rows(), &[vec![0.0, 1.0]]);
        let ranking = rank(&problem).unwrap();
        assert_eq!(ranking.totals, vec![0.0, 100.0]);
        assert_eq!(ranking.order, vec!["b", "a"]);
        assert_eq!(ranking.best, "b");
    }

    #[test]
    fn weights_scale_each_row() {
        let c3 = Criterion::new("c3", "", "", Direction::IncreaseDesired, 1.0, 5.0, 0.101);
        let c2 = Criterion::new("c2", "", "", Direction::IncreaseDesired, 0.0, 1.0, 0.105);
        let m = NormalizedMatrix::from_rows(vec![vec![0.25, 0.0], vec![0.0, 1.0]]);
        let w = apply_weights(&m, &[c3, c2]).unwrap();
        assert!((w.get(0, 0) - 0.02525).abs() < 1e-15);
        assert_eq!(w.get(1, 1), 0.105);
        assert!(matches!(
            apply_weights(&m, &[increasing(0.0, 1.0)]),
            Err(BellingerError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identity_weight_keeps_fraction() {
        let m = NormalizedMatrix::from_rows(vec![vec![0.3, 0.7]]);
        let w = apply_weights(&m, &[increasing(0.0, 1.0)]).unwrap();
        assert_eq!(w.rows(), m.rows());
        let totals = total_ratings(&w, 2, Scale::Percent).unwrap();
        assert_eq!(totals.values, vec![30.0, 70.0]);
        assert_eq!(totals.order, vec![1, 0]);
    }

    #[test]
    fn zero_matrix_totals_are_zero() {
        let w = WeightedMatrix::from_rows(vec![vec![0.0; 3]; 4]);
        let totals = total_ratings(&w, 3, Scale::Unit).unwrap();
        assert_eq!(totals.values, vec![0.0; 3]);
        assert_eq!(totals.order, vec![0, 1, 2]);
        assert_eq!(
            total_ratings(&w, 0, Scale::Unit),
            Err(BellingerError::Empty)
        );
        assert!(total_ratings(&w, 2, Scale::Unit).is_err());
    }

    #[test]
    fn identical_alternatives_keep_declaration_order() {
        let problem = DecisionProblem::new(
            vec![increasing(0.0, 10.0)],
            vec![
                Alternative::new("first", "", vec![6.0]),
                Alternative::new("second", "", vec![6.0]),
                Alternative::new("low", "", vec![1.0]),
            ],
        );
        let ranking = rank(&problem).unwrap();
        assert_eq!(ranking.best, "first");
        assert_eq!(ranking.order, vec!["first", "second", "low"]);
    }

    #[test]
    fn unit_scale_reports_raw_sum() {
        let problem = DecisionProblem::new(
            vec![increasing(0.0, 4.0)],
            vec![
                Alternative::new("a", "", vec![1.0]),
                Alternative::new("b", "", vec![3.0]),
            ],
        );
        let ranking = rank_with_scale(&problem, Scale::Unit).unwrap();
        assert_eq!(ranking.totals, vec![0.25, 0.75]);
        assert_eq!(ranking.total("b"), Some(0.75));
        assert_eq!(ranking.total("zz"), None);
    }
}
