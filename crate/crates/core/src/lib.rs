//! Multi-criteria decision support built around weighted path normalization.
//!
//! Every raw value of a decision matrix is expressed as the fraction of the
//! "path" it covers between a criterion's least and most desirable bound,
//! multiplied by the criterion weight and summed per alternative. The
//! resulting ratings can then feed a deferred-acceptance matching between
//! criteria and alternatives, and a seeded perturbation study measures how
//! much the winner depends on the chosen weights.
//!
//! ```
//! use decision_kit::model::{Alternative, Criterion, DecisionProblem, Direction};
//! use decision_kit::bellinger::rank;
//!
//! let problem = DecisionProblem::new(
//!     vec![
//!         Criterion::new("salary", "salary", "PLN", Direction::IncreaseDesired, 2000.0, 4000.0, 0.6),
//!         Criterion::new("commute", "commute", "km", Direction::DecreaseDesired, 0.0, 50.0, 0.4),
//!     ],
//!     vec![
//!         Alternative::new("a", "offer a", vec![3000.0, 10.0]),
//!         Alternative::new("b", "offer b", vec![3500.0, 45.0]),
//!     ],
//! );
//! let ranking = rank(&problem).unwrap();
//! assert_eq!(ranking.best, "a");
//! ```

pub mod bellinger;
pub mod cli;
pub mod combinatorics;
pub mod io;
pub mod matching;
pub mod model;
pub mod report;
pub mod sensitivity;

pub use bellinger::{rank, RankingResult, Scale};
pub use matching::{gale_shapley, is_stable, Matching, PreferenceProfile, Side, Strategy};
pub use model::{validate_problem, Alternative, Criterion, DecisionProblem, Direction};
