//! The check/weaken loop.
//!
//! Each round model-checks `C[ψ △_I ψ′]`. If it holds up to the bound, `I`
//! is the answer. Otherwise every counterexample is weakened against; if one
//! admits no weakening the loop stops with that trace as witness, else the
//! weakest of the per-trace optima becomes the next `I`.

use std::time::Instant;

use cegiw_core::weaken::weakest_of;
use cegiw_core::{
    eval, weaken, Context, Interval, LassoTrace, ModificationKind, Target, WeakenOutcome,
};
use serde_json::json;

use crate::check::{CheckError, CheckVerdict, Checker, InternalChecker};
use crate::json::{interval_json, lasso_json, outcome_json};
use crate::model::Model;

pub const DEFAULT_MAX_ITERATIONS: usize = 64;
pub const DEFAULT_MAX_COUNTEREXAMPLES: usize = 8;

/// What the checker reported in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictSummary {
    HoldsUpToBound(usize),
    Violated { counterexamples: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub interval_before: Interval,
    pub counterexamples_used: Vec<LassoTrace>,
    pub per_trace_outcomes: Vec<WeakenOutcome>,
    /// `None` when the round ended the loop without a new interval.
    pub interval_after: Option<Interval>,
    pub verdict: VerdictSummary,
    pub wall_time_ms: f64,
}

impl IterationRecord {
    pub fn to_json(&self) -> serde_json::Value {
        let verdict = match &self.verdict {
            VerdictSummary::HoldsUpToBound(b) => json!({"holds_up_to_bound": b}),
            VerdictSummary::Violated { counterexamples } => json!({"violated": counterexamples}),
        };
        json!({
            "iteration": self.iteration,
            "interval_before": interval_json(&self.interval_before),
            "counterexamples_used": self.counterexamples_used.iter().map(lasso_json).collect::<Vec<_>>(),
            "per_trace_outcomes": self.per_trace_outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
            "interval_after": self.interval_after.as_ref().map(interval_json),
            "verdict": verdict,
            "wall_time_ms": self.wall_time_ms,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CegiwResult {
    Weakened {
        interval: Interval,
        log: Vec<IterationRecord>,
    },
    NoWeakening {
        witness: LassoTrace,
        log: Vec<IterationRecord>,
    },
    BoundOrIterationExhausted {
        log: Vec<IterationRecord>,
    },
}

impl CegiwResult {
    pub fn log(&self) -> &[IterationRecord] {
        match self {
            CegiwResult::Weakened { log, .. }
            | CegiwResult::NoWeakening { log, .. }
            | CegiwResult::BoundOrIterationExhausted { log } => log,
        }
    }

    pub fn interval(&self) -> Option<Interval> {
        match self {
            CegiwResult::Weakened { interval, .. } => Some(*interval),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DriverError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("internal error: counterexample {trace} satisfies {formula}")]
    SpuriousCounterexample { trace: String, formula: String },
    #[error("max_iterations must be at least 1")]
    ZeroIterations,
}

/// Runs the loop with the built-in explicit-state checker.
pub fn run_cegiw(
    m: &Model,
    c: &Context,
    target: &Target,
    bound: usize,
    max_iterations: usize,
    max_counterexamples: usize,
) -> Result<CegiwResult, DriverError> {
    let mut checker = InternalChecker {
        model: m,
        bound,
        max_counterexamples,
    };
    run_cegiw_with(&mut checker, c, target, max_iterations)
}

/// Runs the loop with any checker.
pub fn run_cegiw_with<C: Checker>(
    checker: &mut C,
    c: &Context,
    target: &Target,
    max_iterations: usize,
) -> Result<CegiwResult, DriverError> {
    if max_iterations == 0 {
        return Err(DriverError::ZeroIterations);
    }
    let kind = ModificationKind::of(target.kind);
    let mut current = target.interval;
    let mut retained: Vec<LassoTrace> = Vec::new();
    let mut log = Vec::new();
    for iteration in 1..=max_iterations {
        let started = Instant::now();
        let phi = c.substitute(target.with_interval(current));
        // Earlier counterexamples that still fail spare a checker call.
        let stale: Vec<LassoTrace> = retained
            .iter()
            .filter(|pi| !eval(pi, 0, &phi))
            .cloned()
            .collect();
        let verdict = if stale.is_empty() {
            checker.check(&phi)?
        } else {
            CheckVerdict::Violated(stale)
        };
        let elapsed = |s: Instant| s.elapsed().as_secs_f64() * 1e3;
        let counterexamples = match verdict {
            CheckVerdict::HoldsUpToBound(b) => {
                log.push(IterationRecord {
                    iteration,
                    interval_before: current,
                    counterexamples_used: vec![],
                    per_trace_outcomes: vec![],
                    interval_after: None,
                    verdict: VerdictSummary::HoldsUpToBound(b),
                    wall_time_ms: elapsed(started),
                });
                return Ok(CegiwResult::Weakened {
                    interval: current,
                    log,
                });
            }
            CheckVerdict::Violated(cex) => cex,
        };
        let here_target = Target {
            interval: current,
            ..target.clone()
        };
        let mut outcomes = Vec::with_capacity(counterexamples.len());
        let mut witness = None;
        for pi in &counterexamples {
            if eval(pi, 0, &phi) {
                return Err(DriverError::SpuriousCounterexample {
                    trace: pi.to_string(),
                    formula: phi.to_string(),
                });
            }
            let outcome = weaken(c, &here_target, pi, 0);
            if outcome == WeakenOutcome::NoneExists && witness.is_none() {
                witness = Some(pi.clone());
            }
            outcomes.push(outcome);
        }
        let summary = VerdictSummary::Violated {
            counterexamples: counterexamples.len(),
        };
        let next = match witness {
            Some(_) => None,
            None => Some(
                weakest_of(outcomes.iter().filter_map(|o| o.interval()), kind)
                    .expect("at least one counterexample"),
            ),
        };
        log.push(IterationRecord {
            iteration,
            interval_before: current,
            counterexamples_used: counterexamples.clone(),
            per_trace_outcomes: outcomes,
            interval_after: next,
            verdict: summary,
            wall_time_ms: elapsed(started),
        });
        match (witness, next) {
            (Some(witness), _) => return Ok(CegiwResult::NoWeakening { witness, log }),
            (None, Some(next)) => current = next,
            (None, None) => unreachable!(),
        }
        retained.extend(counterexamples);
    }
    Ok(CegiwResult::BoundOrIterationExhausted { log })
}

/// `(iteration, lo, hi)` rows with the interval checked in each round; `hi`
/// is `inf` for unbounded intervals.
pub fn csv_log(log: &[IterationRecord]) -> String {
    let mut out = String::from("iteration,lo,hi\n");
    for r in log {
        let i = r.interval_before;
        out.push_str(&format!("{},{},{}\n", r.iteration, i.lo(), i.hi()));
    }
    out
}

/// One JSON object per line.
pub fn jsonl_log(log: &[IterationRecord]) -> String {
    log.iter().map(|r| format!("{}\n", r.to_json())).collect()
}
