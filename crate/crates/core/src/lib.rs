//! Exact enumeration of statistics on colored Dyck paths.
//!
//! Every count is computed in arbitrary precision by up to four independent
//! routes: brute-force enumeration ([`paths`]), closed-form sums
//! ([`formulas`]), Riordan-array extraction ([`riordan`] on top of the
//! truncated power series in [`series`]) and convolution recurrences
//! ([`verify::recurrence_table`]). The [`verify`] module checks that the
//! routes agree and that the identities relating them hold on finite grids.

pub mod cli;
pub mod error;
pub mod exact;
pub mod formulas;
pub mod paths;
pub mod riordan;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{binom, binom_gen, BigInt, Rational};
pub use paths::{Family, Path, StatKind, Statistic, Step, StepKind};
pub use riordan::RiordanArray;
pub use series::TruncSeries;
