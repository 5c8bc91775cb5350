//! Counterexample-guided interval weakening for finite-state models.
//!
//! This crate adds the parts that need `std` to [`cegiw_core`]: a model
//! language and explicit-state bounded checker, an adapter for an external
//! SMV model checker, the iterative weakening loop, logs and the command line.

#![forbid(unsafe_code)]

pub mod check;
pub mod cli;
pub mod driver;
pub mod external;
pub mod fretish;
pub mod json;
pub mod model;
pub mod smv;

pub use check::{check_bounded, enumerate_lassos, CheckVerdict, Checker};
pub use driver::{run_cegiw, run_cegiw_with, CegiwResult, IterationRecord};
pub use external::parse_external_counterexample;
pub use fretish::{timing_to_mtl, FretishTiming};
pub use model::{parse_model, Model, ModelError};
pub use smv::emit_external_problem;
