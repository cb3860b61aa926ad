//! CSV carriers for decision problems.
//!
//! `criteria.csv` has the header `id,name,unit,direction,lower,upper,weight`
//! with `direction` one of `max` / `min`. `alternatives.csv` has `id,name`
//! followed by one column per criterion id, in any order. Lines starting with
//! `#` are comments. Numbers use `.` as the decimal separator.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{
    validate_problem, Alternative, Criterion, DecisionProblem, Direction, ValidationReport,
};

pub const CRITERIA_COLUMNS: [&str; 7] = [
    "id",
    "name",
    "unit",
    "direction",
    "lower",
    "upper",
    "weight",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFiles {
    pub criteria_path: PathBuf,
    pub alternatives_path: PathBuf,
}

impl ProblemFiles {
    pub fn new(criteria_path: impl Into<PathBuf>, alternatives_path: impl Into<PathBuf>) -> Self {
        Self {
            criteria_path: criteria_path.into(),
            alternatives_path: alternatives_path.into(),
        }
    }
}

/// Where in an input a problem was found. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub file: String,
    pub line: u64,
    pub column: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(column) => write!(f, "{}:{}:{}", self.file, self.line, column),
            None => write!(f, "{}:{}", self.file, self.line),
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{location}: malformed CSV: {message}")]
    Csv { location: Location, message: String },
    #[error("{file}: missing column {column}")]
    MissingColumn { file: String, column: String },
    #[error("{location}: column {column} does not name a criterion")]
    UnknownColumn { location: Location, column: String },
    #[error("{location}: duplicate id {id}")]
    DuplicateId { location: Location, id: String },
    #[error("{location}: non-numeric value {value:?} in column {column}")]
    NonNumeric {
        location: Location,
        column: String,
        value: String,
    },
    #[error("{location}: unknown direction {token:?} (expected max or min)")]
    UnknownDirection { location: Location, token: String },
    #[error("invalid problem:\n{0}")]
    Invalid(ValidationReport),
}

pub fn load_problem(files: &ProblemFiles, clamp: bool) -> Result<DecisionProblem, LoadError> {
    let read = |path: &Path| {
        fs::read_to_string(path).map_err(|source| LoadError::Read {
            path: path.display().to_string(),
            source,
        })
    };
    let criteria = read(&files.criteria_path)?;
    let alternatives = read(&files.alternatives_path)?;
    parse_problem(
        &criteria,
        &files.criteria_path.display().to_string(),
        &alternatives,
        &files.alternatives_path.display().to_string(),
        clamp,
    )
}

/// Parses and validates a problem from in-memory CSV text.
///
/// With `clamp` set, out-of-range values are snapped to the nearest bound;
/// any other violation is still an error.
pub fn parse_problem(
    criteria_csv: &str,
    criteria_name: &str,
    alternatives_csv: &str,
    alternatives_name: &str,
    clamp: bool,
) -> Result<DecisionProblem, LoadError> {
    let criteria = parse_criteria(criteria_csv, criteria_name)?;
    let alternatives = parse_alternatives(alternatives_csv, alternatives_name, &criteria)?;
    let mut problem = DecisionProblem::new(criteria, alternatives);
    if clamp {
        problem = problem.clamped();
    }
    let report = validate_problem(&problem);
    if report.is_ok() {
        Ok(problem)
    } else {
        Err(LoadError::Invalid(report))
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_error(file: &str, err: csv::Error) -> LoadError {
    let line = err.position().map_or(0, |p| p.line());
    LoadError::Csv {
        location: Location {
            file: file.to_string(),
            line,
            column: None,
        },
        message: err.to_string(),
    }
}

struct Header {
    index: HashMap<String, usize>,
}

impl Header {
    fn read(rdr: &mut csv::Reader<&[u8]>, file: &str) -> Result<(Self, Vec<String>), LoadError> {
        let names: Vec<String> = rdr
            .headers()
            .map_err(|e| csv_error(file, e))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LoadError::DuplicateId {
                    location: Location {
                        file: file.to_string(),
                        line: 1,
                        column: Some(i + 1),
                    },
                    id: name.clone(),
                });
            }
        }
        Ok((Self { index }, names))
    }

    fn require(&self, file: &str, column: &str) -> Result<usize, LoadError> {
        self.index
            .get(column)
            .copied()
            .ok_or_else(|| LoadError::MissingColumn {
                file: file.to_string(),
                column: column.to_string(),
            })
    }
}

fn location(file: &str, record: &csv::StringRecord, column: usize) -> Location {
    Location {
        file: file.to_string(),
        line: record.position().map_or(0, |p| p.line()),
        column: Some(column + 1),
    }
}

fn number(
    file: &str,
    record: &csv::StringRecord,
    column: usize,
    name: &str,
) -> Result<f64, LoadError> {
    let raw = record.get(column).unwrap_or("");
    raw.parse::<f64>().map_err(|_| LoadError::NonNumeric {
        location: location(file, record, column),
        column: name.to_string(),
        value: raw.to_string(),
    })
}

fn parse_criteria(text: &str, file: &str) -> Result<Vec<Criterion>, LoadError> {
    let mut rdr = reader(text);
    let (header, _) = Header::read(&mut rdr, file)?;
    let cols: Vec<usize> = CRITERIA_COLUMNS
        .iter()
        .map(|c| header.require(file, c))
        .collect::<Result<_, _>>()?;
    let [id, name, unit, direction, lower, upper, weight] = cols[..] else {
        unreachable!()
    };

    let mut criteria: Vec<Criterion> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(file, e))?;
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let crit_id = field(id);
        if criteria.iter().any(|c| c.id == crit_id) {
            return Err(LoadError::DuplicateId {
                location: location(file, &record, id),
                id: crit_id,
            });
        }
        let token = field(direction);
        let dir = Direction::from_token(&token).ok_or_else(|| LoadError::UnknownDirection {
            location: location(file, &record, direction),
            token,
        })?;
        criteria.push(Criterion {
            id: crit_id,
            name: field(name),
            unit: field(unit),
            direction: dir,
            lower: number(file, &record, lower, "lower")?,
            upper: number(file, &record, upper, "upper")?,
            weight: number(file, &record, weight, "weight")?,
        });
    }
    Ok(criteria)
}

fn parse_alternatives(
    text: &str,
    file: &str,
    criteria: &[Criterion],
) -> Result<Vec<Alternative>, LoadError> {
    if text
        .lines()
        .all(|l| l.trim().is_empty() || l.trim_start().starts_with('#'))
    {
        return Ok(Vec::new());
    }
    let mut rdr = reader(text);
    let (header, names) = Header::read(&mut rdr, file)?;
    let id = header.require(file, "id")?;
    let name = header.require(file, "name")?;
    let value_cols: Vec<usize> = criteria
        .iter()
        .map(|c| header.require(file, &c.id))
        .collect::<Result<_, _>>()?;
    if let Some((i, extra)) = names
        .iter()
        .enumerate()
        .find(|(i, _)| *i != id && *i != name && !value_cols.contains(i))
    {
        return Err(LoadError::UnknownColumn {
            location: Location {
                file: file.to_string(),
                line: 1,
                column: Some(i + 1),
            },
            column: extra.clone(),
        });
    }

    let mut alternatives: Vec<Alternative> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(file, e))?;
        let alt_id = record.get(id).unwrap_or("").to_string();
        if alternatives.iter().any(|a| a.id == alt_id) {
            return Err(LoadError::DuplicateId {
                location: location(file, &record, id),
                id: alt_id,
            });
        }
        let values = value_cols
            .iter()
            .zip(criteria)
            .map(|(&col, c)| number(file, &record, col, &c.id))
            .collect::<Result<_, _>>()?;
        alternatives.push(Alternative {
            id: alt_id,
            name: record.get(name).unwrap_or("").to_string(),
            values,
        });
    }
    Ok(alternatives)
}

/// Renders a problem back into `(criteria.csv, alternatives.csv)` text.
pub fn write_problem(problem: &DecisionProblem) -> (String, String) {
    let mut criteria = csv::Writer::from_writer(Vec::new());
    criteria
        .write_record(CRITERIA_COLUMNS)
        .expect("in-memory write");
    for c in &problem.criteria {
        criteria
            .write_record([
                c.id.clone(),
                c.name.clone(),
                c.unit.clone(),
                c.direction.token().to_string(),
                c.lower.to_string(),
                c.upper.to_string(),
                c.weight.to_string(),
            ])
            .expect("in-memory write");
    }

    let mut alternatives = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = ["id", "name"]
        .into_iter()
        .chain(problem.criteria.iter().map(|c| c.id.as_str()))
        .collect();
    alternatives.write_record(&header).expect("in-memory write");
    for a in &problem.alternatives {
        let row: Vec<String> = [a.id.clone(), a.name.clone()]
            .into_iter()
            .chain(a.values.iter().map(f64::to_string))
            .collect();
        alternatives.write_record(&row).expect("in-memory write");
    }

    let finish = |w: csv::Writer<Vec<u8>>| {
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    };
    (finish(criteria), finish(alternatives))
}
