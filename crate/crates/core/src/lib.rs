//! Exact counts of `m x n` circled-letter arrays: all of them, those fixed by
//! each symmetry of the rectangle, and the number of classes up to symmetry.
//!
//! Every count has up to three independent routes: exponential generating
//! functions ([`egf`]), explicit multi-index sums ([`sums`]) and brute-force
//! enumeration ([`oracle`]). [`report`] bundles them per shape and [`verify`]
//! sweeps them against each other.

pub mod cli;
pub mod egf;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod report;
pub mod series;
pub mod sums;
pub mod table;
pub mod verify;

pub use egf::GridShape;
pub use error::{Error, Result};
pub use exact::{Natural, Rational};
pub use report::{count_report, CountReport, Method, MethodPolicy, Quantity, Settings};
pub use series::TruncatedSeries;
