//! Pointwise satisfaction `π, t ⊨ φ` over lasso traces.
//!
//! Quantifiers over an interval `I` only ever visit the offsets of the
//! covering interval `C_π(I)`; beyond `end_π(lo)` every position repeats one
//! already visited, so unbounded intervals never need unbounded iteration.

use alloc::vec::Vec;

use crate::formula::Formula;
use crate::lasso::LassoTrace;

/// `π, t ⊨ φ`, evaluated top-down.
pub fn eval(trace: &LassoTrace, t: usize, phi: &Formula) -> bool {
    match phi {
        Formula::Atom(p) => trace.holds_at(t, p),
        Formula::True => true,
        Formula::Not(a) => !eval(trace, t, a),
        Formula::And(a, b) => eval(trace, t, a) && eval(trace, t, b),
        Formula::Or(a, b) => eval(trace, t, a) || eval(trace, t, b),
        Formula::Until(a, interval, b) => {
            for i in trace.covering(interval).offsets() {
                if eval(trace, t + i, b) {
                    return true;
                }
                if !eval(trace, t + i, a) {
                    return false;
                }
            }
            false
        }
        Formula::Release(a, interval, b) => {
            for i in trace.covering(interval).offsets() {
                if !eval(trace, t + i, b) {
                    return false;
                }
                if eval(trace, t + i, a) {
                    return true;
                }
            }
            true
        }
    }
}

/// Truth values of one formula at every representative position of a trace.
///
/// Built bottom-up in `O(|φ| · |π|²)`; used where many positions of the same
/// formula are queried (model checking, brute-force oracles).
#[derive(Debug, Clone)]
pub struct SatTable<'a> {
    trace: &'a LassoTrace,
    values: Vec<bool>,
}

impl<'a> SatTable<'a> {
    pub fn new(trace: &'a LassoTrace, phi: &Formula) -> Self {
        SatTable {
            trace,
            values: label(trace, phi),
        }
    }

    pub fn holds_at(&self, t: usize) -> bool {
        self.values[self.trace.normalize(t)]
    }
}

fn label(trace: &LassoTrace, phi: &Formula) -> Vec<bool> {
    let n = trace.len();
    match phi {
        Formula::Atom(p) => (0..n).map(|t| trace.holds_at(t, p)).collect(),
        Formula::True => alloc::vec![true; n],
        Formula::Not(a) => label(trace, a).into_iter().map(|v| !v).collect(),
        Formula::And(a, b) => {
            let (a, b) = (label(trace, a), label(trace, b));
            a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
        }
        Formula::Or(a, b) => {
            let (a, b) = (label(trace, a), label(trace, b));
            a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
        }
        Formula::Until(a, interval, b) => {
            let (a, b) = (label(trace, a), label(trace, b));
            let cover = trace.covering(interval);
            (0..n)
                .map(|t| {
                    for i in cover.offsets() {
                        let p = trace.normalize(t + i);
                        if b[p] {
                            return true;
                        }
                        if !a[p] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
        Formula::Release(a, interval, b) => {
            let (a, b) = (label(trace, a), label(trace, b));
            let cover = trace.covering(interval);
            (0..n)
                .map(|t| {
                    for i in cover.offsets() {
                        let p = trace.normalize(t + i);
                        if !b[p] {
                            return false;
                        }
                        if a[p] {
                            return true;
                        }
                    }
                    true
                })
                .collect()
        }
    }
}
