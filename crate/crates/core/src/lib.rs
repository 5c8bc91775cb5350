//! Right-bound interval weakening for Metric Temporal Logic.
//!
//! Given a formula split into a context `C` and a temporal target `ψ U_I ψ′`
//! (or `ψ R_I ψ′`) together with a lasso trace on which `C[target]` fails,
//! [`weaken::weaken`] computes the strongest right-bound extension (for `U`) or
//! contraction (for `R`) of `I` that makes the formula hold on the trace, or
//! reports that none exists.
//!
//! The crate is `no_std` and only needs `alloc`. Model checking, file formats
//! and the command-line front end live in the `cegiw` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod context;
pub mod eval;
pub mod formula;
pub mod interval;
pub mod lasso;
pub mod ltl;
pub mod parse;
pub mod weaken;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use context::{extract, substitute, Context, Step, Target, TargetSelection};
pub use eval::{eval, SatTable};
pub use formula::{Formula, TemporalKind};
pub use interval::{Interval, IntervalError, ModificationKind, UpperBound};
pub use lasso::{LassoTrace, State};
pub use ltl::to_ltl;
pub use parse::{parse_formula, parse_property, ParseError, Property};
pub use weaken::{weaken, WeakenOutcome};
