#![allow(dead_code)]

use std::path::PathBuf;

use decision_kit::io::{load_problem, ProblemFiles};
use decision_kit::matching::PreferenceProfile;
use decision_kit::model::{Alternative, Criterion, DecisionProblem, Direction};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_files() -> ProblemFiles {
    let dir = fixture_dir();
    ProblemFiles::new(
        dir.join("career2019.criteria.csv"),
        dir.join("career2019.alternatives.csv"),
    )
}

pub fn fixture() -> DecisionProblem {
    load_problem(&fixture_files(), false).expect("bundled fixture loads")
}

pub const ALTERNATIVES: [&str; 5] = ["p1", "p2", "p3", "p4", "p5"];

/// Published path fractions, printed with two decimals (some truncated).
pub const PUBLISHED_NORMALIZED: [[f64; 5]; 11] = [
    [1.0, 0.75, 0.5, 0.75, 0.0],
    [0.0, 0.67, 1.0, 0.53, 0.26],
    [0.25, 0.0, 0.25, 0.0, 0.0],
    [0.0, 0.5, 0.75, 0.75, 0.5],
    [0.25, 0.0, 0.75, 1.0, 0.5],
    [1.0, 0.0, 0.0, 1.0, 0.0],
    [1.0, 0.75, 0.0, 0.75, 0.75],
    [1.0, 0.75, 0.5, 0.75, 0.0],
    [0.5, 0.33, 1.0, 0.0, 0.16],
    [1.0, 0.93, 0.83, 0.0, 0.73],
    [0.0, 1.0, 0.66, 0.66, 0.66],
];

/// Published weighted values, printed with three decimals.
pub const PUBLISHED_WEIGHTED: [[f64; 5]; 11] = [
    [0.107, 0.080, 0.053, 0.080, 0.0],
    [0.0, 0.070, 0.105, 0.056, 0.028],
    [0.025, 0.0, 0.025, 0.0, 0.0],
    [0.0, 0.05, 0.075, 0.075, 0.05],
    [0.023, 0.0, 0.071, 0.095, 0.047],
    [0.092, 0.0, 0.0, 0.092, 0.0],
    [0.088, 0.066, 0.0, 0.066, 0.066],
    [0.086, 0.064, 0.043, 0.064, 0.0],
    [0.042, 0.028, 0.085, 0.0, 0.014],
    [0.083, 0.077, 0.069, 0.0, 0.061],
    [0.0, 0.059, 0.039, 0.039, 0.039],
];

/// Published totals on the percent scale.
pub const PUBLISHED_TOTALS: [f64; 5] = [54.75, 49.65, 56.67, 56.87, 30.63];

/// Published matching, criterion to job position.
pub const PUBLISHED_MATCHING: [(&str, &str); 5] = [
    ("c1", "p4"),
    ("c2", "p3"),
    ("c3", "p1"),
    ("c4", "p2"),
    ("c5", "p5"),
];

/// Naive recomputation of the totals, straight from raw values.
///
/// Decrease-desired fractions use `(upper - v) / (upper - lower)` directly,
/// not the complement the library computes.
pub fn oracle_totals(problem: &DecisionProblem) -> Vec<f64> {
    let mut totals = vec![0.0; problem.alternatives.len()];
    for (j, alternative) in problem.alternatives.iter().enumerate() {
        for (i, c) in problem.criteria.iter().enumerate() {
            let v = alternative.values[i];
            let covered = match c.direction {
                Direction::IncreaseDesired => v - c.lower,
                Direction::DecreaseDesired => c.upper - v,
            };
            totals[j] += c.weight * covered / (c.upper - c.lower);
        }
        totals[j] *= 100.0;
    }
    totals
}

/// Random valid problem: bounds anywhere in [-1000, 1000], weights summing to 1.
pub fn random_problem<R: Rng>(
    rng: &mut R,
    n_criteria: usize,
    n_alternatives: usize,
) -> DecisionProblem {
    let raw: Vec<f64> = (0..n_criteria).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    let criteria: Vec<Criterion> = raw
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let lower = rng.gen_range(-1000.0..1000.0);
            let upper = lower + rng.gen_range(0.01..500.0);
            let direction = if rng.gen_bool(0.5) {
                Direction::IncreaseDesired
            } else {
                Direction::DecreaseDesired
            };
            Criterion::new(
                format!("c{}", i + 1),
                "",
                "",
                direction,
                lower,
                upper,
                w / sum,
            )
        })
        .collect();
    let alternatives = (0..n_alternatives)
        .map(|j| {
            let values = criteria
                .iter()
                .map(|c| rng.gen_range(c.lower..=c.upper))
                .collect();
            Alternative::new(format!("p{}", j + 1), "", values)
        })
        .collect();
    DecisionProblem::new(criteria, alternatives)
}

pub fn random_profile<R: Rng>(rng: &mut R, n: usize) -> PreferenceProfile {
    let a: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let b: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let mut ranking = || {
        let mut r: Vec<usize> = (0..n).collect();
        r.shuffle(rng);
        r
    };
    let prefs_a = (0..n).map(|_| ranking()).collect();
    let prefs_b = (0..n).map(|_| ranking()).collect();
    PreferenceProfile::new(a, b, prefs_a, prefs_b).expect("permutations form a valid profile")
}

/// Blocking pairs by direct definition: scan every (a, b) and look up ranks by search.
pub fn naive_blocking_pairs(
    profile: &PreferenceProfile,
    partner_of_a: &[usize],
) -> Vec<(usize, usize)> {
    let n = profile.size();
    let pos = |list: &[usize], x: usize| list.iter().position(|&y| y == x).unwrap();
    let partner_of_b = |b: usize| partner_of_a.iter().position(|&x| x == b).unwrap();
    let mut out = Vec::new();
    for (a, &current) in partner_of_a.iter().enumerate() {
        for b in 0..n {
            let a_list = &profile.prefs_a()[a];
            let b_list = &profile.prefs_b()[b];
            let a_wants = pos(a_list, b) < pos(a_list, current);
            let b_wants = pos(b_list, a) < pos(b_list, partner_of_b(b));
            if a_wants && b_wants {
                out.push((a, b));
            }
        }
    }
    out
}

/// Random problem whose ranges are wide relative to their offsets
/// (|bound| / width stays below ~30), so `v - lower` loses at most a few ulps.
pub fn well_conditioned_problem<R: Rng>(
    rng: &mut R,
    n_criteria: usize,
    n_alternatives: usize,
) -> DecisionProblem {
    let mut problem = random_problem(rng, n_criteria, n_alternatives);
    for (i, c) in problem.criteria.iter_mut().enumerate() {
        c.lower = rng.gen_range(-100.0..100.0);
        c.upper = c.lower + rng.gen_range(10.0..200.0);
        for a in problem.alternatives.iter_mut() {
            a.values[i] = rng.gen_range(c.lower..=c.upper);
        }
    }
    problem
}

/// Re-expresses every criterion in new units `scale * x + shift`.
pub fn affine_moved(problem: &DecisionProblem, scale: f64, shift: f64) -> DecisionProblem {
    let mut moved = problem.clone();
    for c in &mut moved.criteria {
        c.lower = scale * c.lower + shift;
        c.upper = scale * c.upper + shift;
    }
    for a in &mut moved.alternatives {
        for v in &mut a.values {
            *v = scale * *v + shift;
        }
    }
    moved
}
