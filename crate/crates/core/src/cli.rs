//! Command-line front end. Every subcommand renders to a string so the same
//! code path serves the binary and the tests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bellinger::{rank_with_scale, BellingerError, Scale};
use crate::combinatorics::{count_subsets, CombinatoricsError};
use crate::io::{load_problem, LoadError, ProblemFiles};
use crate::matching::{build_preferences, gale_shapley, MatchingError, Side, Strategy};
use crate::report::{
    self, render_comparison, render_sensitivity, write_report, Format, DEFAULT_PRECISION,
};
use crate::sensitivity::{perturb_weights, SensitivityError};

/// Exit status for data and validation errors. Usage errors exit with 2.
pub const EXIT_DATA_ERROR: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Ranking(#[from] BellingerError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Sensitivity(#[from] SensitivityError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

#[derive(Debug, Parser)]
#[command(
    name = "decision-kit",
    version,
    about = "Weighted multi-criteria ranking and stable matching"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize, weight and total a decision matrix.
    Rank(RankArgs),
    /// Rank, then match criteria with alternatives by deferred acceptance.
    Match(MatchArgs),
    /// Show the best variant next to the stable matching.
    Compare(ProblemArgs),
    /// Count k-element subsets of an n-element set.
    Subsets {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// Perturb weights at random and tally the winners.
    Sensitivity(SensitivityArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub criteria: PathBuf,
    #[arg(long)]
    pub alternatives: PathBuf,
    /// Snap out-of-range values to the nearest bound instead of failing.
    #[arg(long)]
    pub clamp: bool,
}

impl ProblemArgs {
    fn files(&self) -> ProblemFiles {
        ProblemFiles::new(&self.criteria, &self.alternatives)
    }
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Percent)]
    pub scale: ScaleArg,
}

#[derive(Debug, Args)]
pub struct MatchArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::RatingsByWeight)]
    pub strategy: StrategyArg,
    #[arg(long, value_enum, default_value_t = SideArg::Criteria)]
    pub proposers: SideArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Percent,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    RatingsByWeight,
    RowValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Criteria,
    Alternatives,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Self {
        match s {
            ScaleArg::Percent => Scale::Percent,
            ScaleArg::Unit => Scale::Unit,
        }
    }
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::RatingsByWeight => Strategy::RatingsByWeight,
            StrategyArg::RowValue => Strategy::RowValue,
        }
    }
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Criteria => Side::Criteria,
            SideArg::Alternatives => Side::Alternatives,
        }
    }
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Rank(args) => {
            let problem = load_problem(&args.problem.files(), args.problem.clamp)?;
            let ranking = rank_with_scale(&problem, args.scale.into())?;
            Ok(write_report(&ranking, None, args.format.into(), args.precision).to_text())
        }
        Command::Match(args) => {
            let problem = load_problem(&args.problem.files(), args.problem.clamp)?;
            let ranking = rank_with_scale(&problem, Scale::Percent)?;
            let profile = build_preferences(&problem, &ranking, args.strategy.into())?;
            let matching = gale_shapley(&profile, args.proposers.into());
            Ok(write_report(
                &ranking,
                Some((&profile, &matching)),
                args.format.into(),
                args.precision,
            )
            .to_text())
        }
        Command::Compare(args) => {
            let problem = load_problem(&args.files(), args.clamp)?;
            let ranking = rank_with_scale(&problem, Scale::Percent)?;
            let profile = build_preferences(&problem, &ranking, Strategy::RatingsByWeight)?;
            let matching = gale_shapley(&profile, Side::Criteria);
            Ok(render_comparison(
                &ranking,
                &profile,
                &matching,
                report::DEFAULT_PRECISION,
            ))
        }
        Command::Subsets { n, k } => Ok(format!("{}\n", count_subsets(*n, *k)?)),
        Command::Sensitivity(args) => {
            let problem = load_problem(&args.problem.files(), args.problem.clamp)?;
            let report = perturb_weights(&problem, args.delta, args.samples, args.seed)?;
            Ok(render_sensitivity(&report, report::DEFAULT_PRECISION))
        }
    }
}
