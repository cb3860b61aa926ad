//! Text, JSON and CSV rendering of rankings, matchings and sensitivity studies.
//!
//! Output is locale independent: `.` decimal separator, `\n` line endings,
//! and numbers rounded half-up on their shortest round-trip decimal form.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::bellinger::{RankingResult, Scale};
use crate::matching::{Matching, PreferenceProfile, Side};
use crate::sensitivity::SensitivityReport;

pub const DEFAULT_PRECISION: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

/// A rendered report: one file for `table` and `json`, one per table for `csv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub files: Vec<RenderedFile>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedFile {
    pub name: String,
    pub contents: String,
}

impl Rendered {
    fn single(name: &str, contents: String) -> Self {
        Self {
            files: vec![RenderedFile {
                name: name.to_string(),
                contents,
            }],
        }
    }

    /// Concatenated output for a single stream. Multi-file reports get a
    /// `# <name>` line before each file.
    pub fn to_text(&self) -> String {
        if let [only] = self.files.as_slice() {
            return only.contents.clone();
        }
        self.files
            .iter()
            .map(|f| format!("# {}\n{}", f.name, f.contents))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Rounds half away from zero at `precision` decimals, working on the
/// shortest decimal representation of `x` (so `1.005` becomes `1.01`).
pub fn round_half_up(x: f64, precision: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let repr = x.abs().to_string();
    let (int_part, frac_part) = repr.split_once('.').unwrap_or((&repr, ""));
    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(
            frac_part
                .bytes()
                .chain(std::iter::repeat(b'0'))
                .take(precision),
        )
        .map(|b| b - b'0')
        .collect();
    if frac_part
        .as_bytes()
        .get(precision)
        .is_some_and(|&d| d >= b'5')
    {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - precision;
    let mut out = String::with_capacity(digits.len() + 2);
    if x < 0.0 && digits.iter().any(|&d| d != 0) {
        out.push('-');
    }
    out.extend(digits[..split].iter().map(|d| char::from(b'0' + d)));
    if precision > 0 {
        out.push('.');
        out.extend(digits[split..].iter().map(|d| char::from(b'0' + d)));
    }
    out
}

/// Monospace table. Columns whose cells are all numbers are right aligned,
/// the rest left aligned.
pub fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let n = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let numeric: Vec<bool> = (0..n)
        .map(|i| {
            !rows.is_empty()
                && rows.iter().all(|row| {
                    row.get(i)
                        .is_none_or(|c| c.is_empty() || c.parse::<f64>().is_ok())
                })
        })
        .collect();
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate().take(n) {
            let pad = " ".repeat(widths[i] - cell.chars().count());
            if i > 0 {
                s.push_str("  ");
            }
            if numeric[i] {
                s.push_str(&pad);
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.push_str(&pad);
            }
        }
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(&rule));
    for row in rows {
        out.push_str(&line(row));
    }
    out
}

fn strings<'a>(items: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    items.into_iter().map(str::to_string).collect()
}

/// One row of the matching table: criterion with its weight, partner with its total.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub criterion: String,
    pub alternative: String,
}

/// Matched pairs listed by descending criterion weight.
fn matched_rows(
    ranking: &RankingResult,
    profile: &PreferenceProfile,
    matching: &Matching,
) -> Vec<MatchedPair> {
    let weight_of = |id: &str| {
        ranking
            .criteria
            .iter()
            .position(|c| c == id)
            .map_or(0.0, |i| ranking.weights[i])
    };
    let mut pairs: Vec<MatchedPair> = matching
        .id_pairs(profile)
        .into_iter()
        .map(|(c, a)| MatchedPair {
            criterion: c.to_string(),
            alternative: a.to_string(),
        })
        .collect();
    pairs.sort_by(|x, y| {
        weight_of(&y.criterion)
            .partial_cmp(&weight_of(&x.criterion))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    pairs
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonMatching {
    pub proposers: Option<Side>,
    pub pairs: Vec<MatchedPair>,
}

/// Machine-readable report; numbers are written at full precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub scale: Scale,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub weights: Vec<f64>,
    pub normalized: Vec<Vec<f64>>,
    pub weighted: Vec<Vec<f64>>,
    pub totals: IndexMap<String, f64>,
    pub order: Vec<String>,
    pub best: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<JsonMatching>,
}

impl JsonReport {
    pub fn new(ranking: &RankingResult, matching: Option<(&PreferenceProfile, &Matching)>) -> Self {
        Self {
            scale: ranking.scale,
            criteria: ranking.criteria.clone(),
            alternatives: ranking.alternatives.clone(),
            weights: ranking.weights.clone(),
            normalized: ranking.normalized.rows().to_vec(),
            weighted: ranking.weighted.rows().to_vec(),
            totals: ranking
                .alternatives
                .iter()
                .cloned()
                .zip(ranking.totals.iter().copied())
                .collect(),
            order: ranking.order.clone(),
            best: ranking.best.clone(),
            matching: matching.map(|(profile, m)| JsonMatching {
                proposers: m.proposer_side,
                pairs: matched_rows(ranking, profile, m),
            }),
        }
    }
}

pub fn write_report(
    ranking: &RankingResult,
    matching: Option<(&PreferenceProfile, &Matching)>,
    format: Format,
    precision: usize,
) -> Rendered {
    let num = |x: f64| round_half_up(x, precision);
    let alt_header = |first: &[&str]| -> Vec<String> {
        strings(
            first
                .iter()
                .copied()
                .chain(ranking.alternatives.iter().map(String::as_str)),
        )
    };
    let normalized_rows: Vec<Vec<String>> = ranking
        .criteria
        .iter()
        .zip(ranking.normalized.rows())
        .map(|(c, row)| {
            std::iter::once(c.clone())
                .chain(row.iter().map(|&x| num(x)))
                .collect()
        })
        .collect();
    let weighted_rows: Vec<Vec<String>> = ranking
        .criteria
        .iter()
        .zip(&ranking.weights)
        .zip(ranking.weighted.rows())
        .map(|((c, w), row)| {
            [c.clone(), w.to_string()]
                .into_iter()
                .chain(row.iter().map(|&x| num(x)))
                .collect()
        })
        .collect();
    let total_rows: Vec<Vec<String>> = ranking
        .order
        .iter()
        .enumerate()
        .map(|(i, id)| {
            vec![
                (i + 1).to_string(),
                id.clone(),
                num(ranking.total(id).expect("order lists ranked ids")),
            ]
        })
        .collect();
    let match_rows: Option<Vec<Vec<String>>> = matching.map(|(profile, m)| {
        matched_rows(ranking, profile, m)
            .into_iter()
            .map(|pair| {
                let weight = ranking
                    .criteria
                    .iter()
                    .position(|c| *c == pair.criterion)
                    .map_or_else(String::new, |i| ranking.weights[i].to_string());
                let total = ranking
                    .total(&pair.alternative)
                    .map_or_else(String::new, num);
                vec![pair.criterion, weight, pair.alternative, total]
            })
            .collect()
    });
    let match_header = strings(["criterion", "weight", "alternative", "total rating"]);
    let totals_header = strings(["rank", "alternative", "total rating"]);

    match format {
        Format::Json => {
            let doc = JsonReport::new(ranking, matching);
            let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
            text.push('\n');
            Rendered::single("report.json", text)
        }
        Format::Table => {
            let mut out = String::new();
            out.push_str("Normalized values (fraction of path)\n");
            out.push_str(&render_table(&alt_header(&["criterion"]), &normalized_rows));
            out.push_str("\nWeighted values\n");
            out.push_str(&render_table(
                &alt_header(&["criterion", "weight"]),
                &weighted_rows,
            ));
            let scale = match ranking.scale {
                Scale::Percent => "percent",
                Scale::Unit => "unit",
            };
            out.push_str(&format!("\nTotal rating ({scale} scale)\n"));
            out.push_str(&render_table(&totals_header, &total_rows));
            out.push_str(&format!("\nBest variant: {}\n", ranking.best));
            if let (Some(rows), Some((_, m))) = (&match_rows, matching) {
                let title = match m.proposer_side {
                    Some(side) => format!("\nStable matching ({side} propose)\n"),
                    None => "\nMatching\n".to_string(),
                };
                out.push_str(&title);
                out.push_str(&render_table(&match_header, rows));
            }
            Rendered::single("report.txt", out)
        }
        Format::Csv => {
            let mut files = vec![
                RenderedFile {
                    name: "normalized.csv".into(),
                    contents: csv_text(&alt_header(&["criterion"]), &normalized_rows),
                },
                RenderedFile {
                    name: "weighted.csv".into(),
                    contents: csv_text(&alt_header(&["criterion", "weight"]), &weighted_rows),
                },
                RenderedFile {
                    name: "totals.csv".into(),
                    contents: csv_text(&totals_header, &total_rows),
                },
            ];
            if let Some(rows) = &match_rows {
                files.push(RenderedFile {
                    name: "matching.csv".into(),
                    contents: csv_text(&match_header, rows),
                });
            }
            Rendered { files }
        }
    }
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Side-by-side view of the ranking and the matching, ending with whether the
/// highest-weight criterion was matched to the best variant.
pub fn render_comparison(
    ranking: &RankingResult,
    profile: &PreferenceProfile,
    matching: &Matching,
    precision: usize,
) -> String {
    let pairs = matched_rows(ranking, profile, matching);
    let weight_of = |id: &str| {
        ranking
            .criteria
            .iter()
            .position(|c| c == id)
            .map(|i| ranking.weights[i].to_string())
            .unwrap_or_default()
    };
    let rows: Vec<Vec<String>> = (0..ranking.order.len().max(pairs.len()))
        .map(|i| {
            let mut row = vec![(i + 1).to_string()];
            match ranking.order.get(i) {
                Some(id) => {
                    row.push(id.clone());
                    row.push(round_half_up(ranking.total(id).unwrap_or(0.0), precision));
                }
                None => row.extend([String::new(), String::new()]),
            }
            match pairs.get(i) {
                Some(pair) => {
                    row.push(pair.criterion.clone());
                    row.push(weight_of(&pair.criterion));
                    row.push(pair.alternative.clone());
                }
                None => row.extend([String::new(), String::new(), String::new()]),
            }
            row
        })
        .collect();
    let proposers = matching
        .proposer_side
        .map_or_else(|| "given".to_string(), |s| format!("{s} propose"));
    let header = strings([
        "rank",
        "variant",
        "total rating",
        "criterion",
        "weight",
        "matched with",
    ]);

    let mut out = format!("Weighted ranking vs stable matching ({proposers})\n");
    out.push_str(&render_table(&header, &rows));
    out.push('\n');
    out.push_str(&format!("Best variant: {}\n", ranking.best));
    if let Some(top) = pairs.first() {
        out.push_str(&format!(
            "Top pair: {}-{}\n",
            top.criterion, top.alternative
        ));
        let verdict = if top.alternative == ranking.best {
            format!(
                "The highest-weight criterion {} is matched with the best variant {}.\n",
                top.criterion, ranking.best
            )
        } else {
            format!(
                "The highest-weight criterion {} is matched with {}, not with the best variant {}.\n",
                top.criterion, top.alternative, ranking.best
            )
        };
        out.push_str(&verdict);
    }
    out
}

/// Perturbation levels are `delta * k / steps`; hide the last-bit noise of that product.
fn display_delta(delta: f64) -> String {
    round_half_up(delta, 12)
        .parse::<f64>()
        .map_or_else(|_| delta.to_string(), |d| d.to_string())
}

pub fn render_sensitivity(report: &SensitivityReport, precision: usize) -> String {
    let mut out = String::from("Weight sensitivity\n");
    out.push_str(&format!("delta: {}\n", display_delta(report.delta)));
    out.push_str(&format!("samples: {}\n", report.samples));
    out.push_str(&format!("seed: {}\n", report.seed));
    out.push_str(&format!("base order: {}\n", report.base_order.join(" > ")));
    out.push_str(&format!("base best: {}\n\n", report.base_best));

    let rows: Vec<Vec<String>> = report
        .winner_histogram
        .iter()
        .map(|(id, &count)| {
            vec![
                id.clone(),
                count.to_string(),
                round_half_up(100.0 * count as f64 / report.samples as f64, precision),
            ]
        })
        .collect();
    out.push_str(&render_table(
        &strings(["winner", "samples", "share %"]),
        &rows,
    ));
    out.push('\n');

    let flip = report
        .min_flip_delta
        .map_or_else(|| "none found".to_string(), display_delta);
    out.push_str(&format!("smallest flipping delta: {flip}\n"));
    let tested: Vec<String> = report
        .tested_deltas
        .iter()
        .copied()
        .map(display_delta)
        .collect();
    out.push_str(&format!("tested deltas: {}\n", tested.join(", ")));
    let min = report
        .rank_correlations
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    out.push_str(&format!(
        "pairwise rank agreement: mean {}, min {}\n",
        round_half_up(report.mean_rank_correlation(), precision + 2),
        round_half_up(min, precision + 2)
    ));
    out
}
