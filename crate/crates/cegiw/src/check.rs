//! Explicit-state bounded checking over lasso-shaped model runs.
//!
//! A run of raw length `n` is a path `s0 … s(n-1)` from an initial state plus a
//! loop-back edge `s(n-1) → sk`. Runs are projected onto atom sets and
//! canonicalized, so the resulting lasso may be shorter than `n`. The bound
//! limits the raw length.

use std::collections::HashSet;

use cegiw_core::{Formula, LassoTrace, SatTable, State};

use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckVerdict {
    HoldsUpToBound(usize),
    Violated(Vec<LassoTrace>),
}

impl CheckVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, CheckVerdict::HoldsUpToBound(_))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("external checker: {0}")]
    External(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// A source of bounded verdicts for one fixed model and bound.
pub trait Checker {
    fn check(&mut self, phi: &Formula) -> Result<CheckVerdict, CheckError>;

    fn bound(&self) -> usize;
}

/// Deterministic order: shorter lassos first, then by atom sequence, then by
/// suffix length.
pub fn lasso_order_key(t: &LassoTrace) -> (usize, Vec<&State>, usize) {
    let seq = t.prefix().iter().chain(t.suffix()).collect();
    (t.len(), seq, t.suffix().len())
}

fn sort_lassos(v: &mut [LassoTrace]) {
    v.sort_by(|a, b| lasso_order_key(a).cmp(&lasso_order_key(b)));
}

/// Lassos first produced by runs of raw length exactly `n`, in
/// [`lasso_order_key`] order. `seen` carries the lassos of earlier levels.
fn level(m: &Model, n: usize, seen: &mut HashSet<LassoTrace>) -> Vec<LassoTrace> {
    let g = m.graph();
    let mut found = Vec::new();
    let mut path: Vec<usize> = Vec::with_capacity(n);
    fn dfs(
        g: &crate::model::StateGraph,
        n: usize,
        path: &mut Vec<usize>,
        seen: &mut HashSet<LassoTrace>,
        found: &mut Vec<LassoTrace>,
    ) {
        let last = *path.last().expect("non-empty path");
        if path.len() == n {
            for k in 0..n {
                if g.has_edge(last, path[k]) {
                    let labels =
                        |r: &[usize]| r.iter().map(|s| g.labels[*s].clone()).collect::<Vec<_>>();
                    let lasso = LassoTrace::canonicalize(labels(&path[..k]), labels(&path[k..]))
                        .expect("suffix contains at least the last state");
                    if seen.insert(lasso.clone()) {
                        found.push(lasso);
                    }
                }
            }
            return;
        }
        for &s in &g.successors[last] {
            path.push(s);
            dfs(g, n, path, seen, found);
            path.pop();
        }
    }
    for &s0 in &g.initial {
        path.push(s0);
        dfs(g, n, &mut path, seen, &mut found);
        path.pop();
    }
    sort_lassos(&mut found);
    found
}

/// Every distinct canonical lasso from runs of raw length `1..=bound`,
/// grouped by raw length and ordered within each group.
pub fn enumerate_lassos(m: &Model, bound: usize) -> impl Iterator<Item = LassoTrace> + '_ {
    let mut seen = HashSet::new();
    (1..=bound).flat_map(move |n| level(m, n, &mut seen))
}

/// Evaluates `phi` at position 0 of every lasso up to `bound`.
///
/// Levels are explored in increasing raw length and exploration stops after
/// the first level at which `max_counterexamples` violations have been found.
/// The violations returned are the first `max_counterexamples` in
/// [`lasso_order_key`] order.
pub fn check_bounded(
    m: &Model,
    phi: &Formula,
    bound: usize,
    max_counterexamples: usize,
) -> CheckVerdict {
    assert!(bound >= 1 && max_counterexamples >= 1);
    let mut seen = HashSet::new();
    let mut violations = Vec::new();
    for n in 1..=bound {
        for lasso in level(m, n, &mut seen) {
            if !SatTable::new(&lasso, phi).holds_at(0) {
                violations.push(lasso);
            }
        }
        if violations.len() >= max_counterexamples {
            break;
        }
    }
    if violations.is_empty() {
        return CheckVerdict::HoldsUpToBound(bound);
    }
    sort_lassos(&mut violations);
    violations.truncate(max_counterexamples);
    CheckVerdict::Violated(violations)
}

/// [`check_bounded`] behind the [`Checker`] interface.
pub struct InternalChecker<'m> {
    pub model: &'m Model,
    pub bound: usize,
    pub max_counterexamples: usize,
}

impl Checker for InternalChecker<'_> {
    fn check(&mut self, phi: &Formula) -> Result<CheckVerdict, CheckError> {
        Ok(check_bounded(
            self.model,
            phi,
            self.bound,
            self.max_counterexamples,
        ))
    }

    fn bound(&self) -> usize {
        self.bound
    }
}
