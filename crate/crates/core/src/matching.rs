//! Deferred-acceptance (Gale-Shapley) matching between criteria and alternatives.
//!
//! Side A holds criteria and side B holds alternatives. Both sides carry
//! complete strict rankings of the other side, stored as index lists.
//! Besides the proposal loop this module verifies stability by listing
//! blocking pairs, and brute-forces every stable matching for small
//! instances so the proposal loop can be checked against it.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bellinger::RankingResult;
use crate::model::DecisionProblem;

/// Largest side size accepted by [`enumerate_stable`] (7! = 5040 permutations).
pub const MAX_ENUMERATION_SIZE: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("empty preference profile")]
    Empty,
    #[error("sides differ in size: {a} criteria vs {b} alternatives")]
    UnequalSides { a: usize, b: usize },
    #[error("ranking of {agent} is not a permutation of the opposite side")]
    NotAPermutation { agent: String },
    #[error("expected {expected} rankings for side {side}, found {found}")]
    RankingCount {
        side: Side,
        expected: usize,
        found: usize,
    },
    #[error("duplicate agent id {0}")]
    DuplicateAgent(String),
    #[error("matching references unknown agent {0}")]
    UnknownAgent(String),
    #[error("matching is not perfect: {0}")]
    NotPerfect(String),
    #[error("instance too large for enumeration ({size} > {max})")]
    TooLarge { size: usize, max: usize },
    #[error("ranking does not match problem: {0}")]
    RankingMismatch(String),
}

/// Selects one side of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Side A: criteria.
    Criteria,
    /// Side B: alternatives (positions).
    Alternatives,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Criteria => "criteria",
            Side::Alternatives => "alternatives",
        })
    }
}

/// How preference lists are derived from a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Criteria rank alternatives by total rating; alternatives rank criteria by weight.
    #[default]
    RatingsByWeight,
    /// Each criterion ranks alternatives by its own weighted row; alternatives rank
    /// criteria by weight.
    RowValue,
}

/// Two equally sized sides with complete strict rankings of each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    side_a: Vec<String>,
    side_b: Vec<String>,
    /// `prefs_a[a]` lists side-B indices, most preferred first.
    prefs_a: Vec<Vec<usize>>,
    prefs_b: Vec<Vec<usize>>,
    /// `rank_a[a][b]` is the position of `b` in `prefs_a[a]`.
    rank_a: Vec<Vec<usize>>,
    rank_b: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    pub fn new(
        side_a: Vec<String>,
        side_b: Vec<String>,
        prefs_a: Vec<Vec<usize>>,
        prefs_b: Vec<Vec<usize>>,
    ) -> Result<Self, MatchingError> {
        let n = side_a.len();
        if n == 0 && side_b.is_empty() {
            return Err(MatchingError::Empty);
        }
        if side_b.len() != n {
            return Err(MatchingError::UnequalSides {
                a: n,
                b: side_b.len(),
            });
        }
        for ids in [&side_a, &side_b] {
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = ids.iter().find(|id| !seen.insert(id.as_str())) {
                return Err(MatchingError::DuplicateAgent(dup.clone()));
            }
        }
        let rank_a = inverse_rankings(&side_a, &prefs_a, n, Side::Criteria)?;
        let rank_b = inverse_rankings(&side_b, &prefs_b, n, Side::Alternatives)?;
        Ok(Self {
            side_a,
            side_b,
            prefs_a,
            prefs_b,
            rank_a,
            rank_b,
        })
    }

    /// Builds a profile from rankings written with agent ids.
    pub fn from_ids<S: AsRef<str>>(
        side_a: &[S],
        side_b: &[S],
        prefs_a: &[Vec<S>],
        prefs_b: &[Vec<S>],
    ) -> Result<Self, MatchingError> {
        let a: Vec<String> = side_a.iter().map(|s| s.as_ref().to_string()).collect();
        let b: Vec<String> = side_b.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup = |ids: &[String], list: &[Vec<S>]| -> Result<Vec<Vec<usize>>, MatchingError> {
            list.iter()
                .map(|ranking| {
                    ranking
                        .iter()
                        .map(|id| {
                            ids.iter()
                                .position(|x| x == id.as_ref())
                                .ok_or_else(|| MatchingError::UnknownAgent(id.as_ref().to_string()))
                        })
                        .collect()
                })
                .collect()
        };
        let pa = lookup(&b, prefs_a)?;
        let pb = lookup(&a, prefs_b)?;
        Self::new(a, b, pa, pb)
    }

    pub fn size(&self) -> usize {
        self.side_a.len()
    }

    pub fn side_a(&self) -> &[String] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[String] {
        &self.side_b
    }

    pub fn prefs_a(&self) -> &[Vec<usize>] {
        &self.prefs_a
    }

    pub fn prefs_b(&self) -> &[Vec<usize>] {
        &self.prefs_b
    }

    /// Position of `b` in `a`'s ranking (0 = favourite).
    pub fn rank_of_b(&self, a: usize, b: usize) -> usize {
        self.rank_a[a][b]
    }

    /// Position of `a` in `b`'s ranking (0 = favourite).
    pub fn rank_of_a(&self, b: usize, a: usize) -> usize {
        self.rank_b[b][a]
    }

    pub fn ranking_ids(&self, side: Side, agent: usize) -> Vec<&str> {
        match side {
            Side::Criteria => self.prefs_a[agent]
                .iter()
                .map(|&b| self.side_b[b].as_str())
                .collect(),
            Side::Alternatives => self.prefs_b[agent]
                .iter()
                .map(|&a| self.side_a[a].as_str())
                .collect(),
        }
    }
}

fn inverse_rankings(
    ids: &[String],
    prefs: &[Vec<usize>],
    n: usize,
    side: Side,
) -> Result<Vec<Vec<usize>>, MatchingError> {
    if prefs.len() != n {
        return Err(MatchingError::RankingCount {
            side,
            expected: n,
            found: prefs.len(),
        });
    }
    prefs
        .iter()
        .zip(ids)
        .map(|(ranking, id)| {
            let mut inverse = vec![usize::MAX; n];
            if ranking.len() != n {
                return Err(MatchingError::NotAPermutation { agent: id.clone() });
            }
            for (pos, &other) in ranking.iter().enumerate() {
                if other >= n || inverse[other] != usize::MAX {
                    return Err(MatchingError::NotAPermutation { agent: id.clone() });
                }
                inverse[other] = pos;
            }
            Ok(inverse)
        })
        .collect()
}

/// A perfect matching, stored as the side-B partner of every side-A agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    partner_of_a: Vec<usize>,
    /// Side that proposed, when produced by [`gale_shapley`].
    pub proposer_side: Option<Side>,
}

impl Matching {
    /// `partner_of_a[a]` is the side-B index matched with `a`.
    pub fn new(partner_of_a: Vec<usize>, proposer_side: Option<Side>) -> Self {
        Self {
            partner_of_a,
            proposer_side,
        }
    }

    /// Builds a matching from `(criterion id, alternative id)` pairs.
    pub fn from_id_pairs<S: AsRef<str>>(
        profile: &PreferenceProfile,
        pairs: &[(S, S)],
    ) -> Result<Self, MatchingError> {
        let n = profile.size();
        let mut partner = vec![usize::MAX; n];
        for (a_id, b_id) in pairs {
            let a = profile
                .side_a
                .iter()
                .position(|x| x == a_id.as_ref())
                .ok_or_else(|| MatchingError::UnknownAgent(a_id.as_ref().to_string()))?;
            let b = profile
                .side_b
                .iter()
                .position(|x| x == b_id.as_ref())
                .ok_or_else(|| MatchingError::UnknownAgent(b_id.as_ref().to_string()))?;
            if partner[a] != usize::MAX {
                return Err(MatchingError::NotPerfect(format!(
                    "{} matched twice",
                    a_id.as_ref()
                )));
            }
            partner[a] = b;
        }
        let matching = Self::new(partner, None);
        matching.check_perfect(profile)?;
        Ok(matching)
    }

    pub fn partner_of_a(&self) -> &[usize] {
        &self.partner_of_a
    }

    /// `(a, b)` index pairs ordered by `a`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner_of_a.iter().copied().enumerate()
    }

    pub fn id_pairs<'p>(&self, profile: &'p PreferenceProfile) -> Vec<(&'p str, &'p str)> {
        self.pairs()
            .map(|(a, b)| (profile.side_a[a].as_str(), profile.side_b[b].as_str()))
            .collect()
    }

    /// True when both matchings pair the same agents, regardless of who proposed.
    pub fn same_pairs(&self, other: &Matching) -> bool {
        self.partner_of_a == other.partner_of_a
    }

    fn check_perfect(&self, profile: &PreferenceProfile) -> Result<Vec<usize>, MatchingError> {
        let n = profile.size();
        if self.partner_of_a.len() != n {
            return Err(MatchingError::NotPerfect(format!(
                "{} pairs for {n} agents per side",
                self.partner_of_a.len()
            )));
        }
        let mut partner_of_b = vec![usize::MAX; n];
        for (a, &b) in self.partner_of_a.iter().enumerate() {
            if b == usize::MAX {
                return Err(MatchingError::NotPerfect(format!(
                    "{} unmatched",
                    profile.side_a[a]
                )));
            }
            if b >= n {
                return Err(MatchingError::UnknownAgent(format!("alternative #{b}")));
            }
            if partner_of_b[b] != usize::MAX {
                return Err(MatchingError::NotPerfect(format!(
                    "{} matched twice",
                    profile.side_b[b]
                )));
            }
            partner_of_b[b] = a;
        }
        Ok(partner_of_b)
    }
}

/// Builds two-sided preferences from a ranking of `problem`.
///
/// When one side is larger it is truncated: only the top criteria by weight, or
/// the top alternatives by total rating, are kept. Kept agents stay in
/// declaration order. Ties anywhere are broken by declaration order.
pub fn build_preferences(
    problem: &DecisionProblem,
    ranking: &RankingResult,
    strategy: Strategy,
) -> Result<PreferenceProfile, MatchingError> {
    let n_criteria = problem.criteria.len();
    let n_alternatives = problem.alternatives.len();
    if n_criteria == 0 || n_alternatives == 0 {
        return Err(MatchingError::Empty);
    }
    if ranking.totals.len() != n_alternatives || ranking.weighted.n_criteria() != n_criteria {
        return Err(MatchingError::RankingMismatch(format!(
            "ranking covers {}x{}, problem is {n_criteria}x{n_alternatives}",
            ranking.weighted.n_criteria(),
            ranking.totals.len()
        )));
    }
    let n = n_criteria.min(n_alternatives);

    let weights = problem.weights();
    let by_weight = descending_indices(&weights);
    let by_total = descending_indices(&ranking.totals);

    let mut kept_criteria: Vec<usize> = by_weight[..n].to_vec();
    kept_criteria.sort_unstable();
    let mut kept_alternatives: Vec<usize> = by_total[..n].to_vec();
    kept_alternatives.sort_unstable();

    // position of an original index inside the kept list
    let local = |kept: &[usize], original: usize| kept.iter().position(|&k| k == original);

    let alternative_ranking_by_weight: Vec<usize> = by_weight
        .iter()
        .filter_map(|&i| local(&kept_criteria, i))
        .collect();

    let prefs_a: Vec<Vec<usize>> = kept_criteria
        .iter()
        .map(|&i| {
            let order = match strategy {
                Strategy::RatingsByWeight => by_total.clone(),
                Strategy::RowValue => descending_indices(ranking.weighted.row(i)),
            };
            order
                .iter()
                .filter_map(|&j| local(&kept_alternatives, j))
                .collect()
        })
        .collect();
    let prefs_b = vec![alternative_ranking_by_weight; n];

    PreferenceProfile::new(
        kept_criteria
            .iter()
            .map(|&i| problem.criteria[i].id.clone())
            .collect(),
        kept_alternatives
            .iter()
            .map(|&j| problem.alternatives[j].id.clone())
            .collect(),
        prefs_a,
        prefs_b,
    )
}

/// Indices sorted by descending value; equal values keep index order.
fn descending_indices(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&x, &y| values[y].partial_cmp(&values[x]).unwrap_or(Ordering::Equal));
    idx
}

/// Runs deferred acceptance with `proposers` proposing.
pub fn gale_shapley(profile: &PreferenceProfile, proposers: Side) -> Matching {
    gale_shapley_counted(profile, proposers).0
}

/// Like [`gale_shapley`], also returning the number of proposals made.
pub fn gale_shapley_counted(profile: &PreferenceProfile, proposers: Side) -> (Matching, usize) {
    let (proposer_prefs, receiver_rank) = match proposers {
        Side::Criteria => (&profile.prefs_a, &profile.rank_b),
        Side::Alternatives => (&profile.prefs_b, &profile.rank_a),
    };
    let n = profile.size();
    let mut next_choice = vec![0usize; n];
    let mut holder: Vec<Option<usize>> = vec![None; n];
    // lowest index proposes first; a rejected proposer re-enters the stack
    let mut free: Vec<usize> = (0..n).rev().collect();
    let mut proposals = 0usize;

    while let Some(p) = free.pop() {
        let r = proposer_prefs[p][next_choice[p]];
        next_choice[p] += 1;
        proposals += 1;
        match holder[r] {
            None => holder[r] = Some(p),
            Some(current) if receiver_rank[r][p] < receiver_rank[r][current] => {
                holder[r] = Some(p);
                free.push(current);
            }
            Some(_) => free.push(p),
        }
    }

    let mut partner_of_a = vec![usize::MAX; n];
    for (r, p) in holder.into_iter().enumerate() {
        let p = p.expect("complete preferences leave nobody unmatched");
        match proposers {
            Side::Criteria => partner_of_a[p] = r,
            Side::Alternatives => partner_of_a[r] = p,
        }
    }
    (Matching::new(partner_of_a, Some(proposers)), proposals)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Every `(a, b)` pair that strictly prefer each other to their partners,
    /// ordered by `a` then by `b`.
    pub blocking_pairs: Vec<(usize, usize)>,
}

pub fn is_stable(
    profile: &PreferenceProfile,
    matching: &Matching,
) -> Result<StabilityReport, MatchingError> {
    let partner_of_b = matching.check_perfect(profile)?;
    let n = profile.size();
    let mut blocking_pairs = Vec::new();
    for a in 0..n {
        let current = profile.rank_a[a][matching.partner_of_a[a]];
        // only partners `a` ranks above its own can block
        for &b in &profile.prefs_a[a][..current] {
            if profile.rank_b[b][a] < profile.rank_b[b][partner_of_b[b]] {
                blocking_pairs.push((a, b));
            }
        }
    }
    blocking_pairs.sort_unstable();
    Ok(StabilityReport {
        stable: blocking_pairs.is_empty(),
        blocking_pairs,
    })
}

/// Every stable matching, ordered lexicographically by the side-A partner vector.
pub fn enumerate_stable(profile: &PreferenceProfile) -> Result<Vec<Matching>, MatchingError> {
    let n = profile.size();
    if n > MAX_ENUMERATION_SIZE {
        return Err(MatchingError::TooLarge {
            size: n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    permute(profile, &mut current, &mut used, &mut out)?;
    Ok(out)
}

fn permute(
    profile: &PreferenceProfile,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Matching>,
) -> Result<(), MatchingError> {
    let n = used.len();
    if current.len() == n {
        let candidate = Matching::new(current.clone(), None);
        if is_stable(profile, &candidate)?.stable {
            out.push(candidate);
        }
        return Ok(());
    }
    for b in 0..n {
        if !used[b] {
            used[b] = true;
            current.push(b);
            permute(profile, current, used, out)?;
            current.pop();
            used[b] = false;
        }
    }
    Ok(())
}
