//! Brute-force reference implementations and random instance generators for
//! test suites. Nothing here is used by the algorithms themselves.
//!
//! [`naive_eval`] unrolls quantifiers over a generous fixed horizon instead of
//! the covering interval, and [`weaken_bruteforce`] enumerates right-bound
//! modifications from strongest to weakest, so both stay independent of the
//! code they are compared against.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::context::{Context, Target};
use crate::eval::eval;
use crate::formula::{Formula, TemporalKind};
use crate::interval::{Interval, UpperBound};
use crate::lasso::{LassoTrace, State};
use crate::weaken::WeakenOutcome;

/// `π, t ⊨ φ` with every quantifier unrolled up to `lo + 2·|π| + 1` offsets.
pub fn naive_eval(trace: &LassoTrace, t: usize, phi: &Formula) -> bool {
    let horizon = |i: &Interval| {
        let cap = i.lo() + 2 * trace.len() + 1;
        i.hi().min_with(cap)
    };
    match phi {
        Formula::Atom(p) => trace.state_at(t).contains(p.as_str()),
        Formula::True => true,
        Formula::Not(a) => !naive_eval(trace, t, a),
        Formula::And(a, b) => naive_eval(trace, t, a) && naive_eval(trace, t, b),
        Formula::Or(a, b) => naive_eval(trace, t, a) || naive_eval(trace, t, b),
        Formula::Until(a, i, b) => (i.lo()..=horizon(i)).any(|k| {
            naive_eval(trace, t + k, b) && (i.lo()..k).all(|j| naive_eval(trace, t + j, a))
        }),
        Formula::Release(a, i, b) => {
            let window = i.lo()..=horizon(i);
            window.clone().all(|k| naive_eval(trace, t + k, b))
                || window.into_iter().any(|k| {
                    naive_eval(trace, t + k, a) && (i.lo()..=k).all(|j| naive_eval(trace, t + j, b))
                })
        }
    }
}

/// Every right-bound modification of `orig` that can behave differently on
/// `trace`, strongest first.
///
/// Upper bounds at or beyond `end_π(lo)` are indistinguishable from each
/// other, so extensions stop at `hi + end_π(lo)` and contractions of an
/// unbounded interval restart from `end_π(lo) + 1`.
pub fn modifications(orig: &Interval, kind: TemporalKind, trace: &LassoTrace) -> Vec<Interval> {
    let lo = orig.lo();
    let end = trace.end_index(lo);
    match (kind, orig.hi()) {
        (TemporalKind::Until, UpperBound::Infinity) => alloc::vec![*orig],
        (TemporalKind::Until, UpperBound::Finite(hi)) => {
            (hi..=hi + end).map(|h| Interval::bounded(lo, h)).collect()
        }
        (TemporalKind::Release, UpperBound::Finite(hi)) => {
            (lo..=hi).rev().map(|h| Interval::bounded(lo, h)).collect()
        }
        (TemporalKind::Release, UpperBound::Infinity) => core::iter::once(*orig)
            .chain((lo..=end + 1).rev().map(|h| Interval::bounded(lo, h)))
            .collect(),
    }
}

/// The first modification (strongest first) that makes `C[target]` hold at
/// `(trace, t)` under [`naive_eval`].
pub fn weaken_bruteforce(
    c: &Context,
    target: &Target,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    modifications(&target.interval, target.kind, trace)
        .into_iter()
        .find(|cand| naive_eval(trace, t, &c.substitute(target.with_interval(*cand))))
        .map_or(WeakenOutcome::NoneExists, WeakenOutcome::Found)
}

/// Samples `φ ⊑ φ′`: every sampled `(π, t)` with `t ≤ horizon` that satisfies
/// `phi` also satisfies `phi2`. A `false` answer is a genuine refutation.
pub fn is_weaker_bruteforce(
    phi: &Formula,
    phi2: &Formula,
    traces: &[LassoTrace],
    horizon: usize,
) -> bool {
    traces
        .iter()
        .all(|pi| (0..=horizon).all(|t| !eval(pi, t, phi) || eval(pi, t, phi2)))
}

/// Shape limits for random instances.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub atoms: Vec<String>,
    pub max_trace_len: usize,
    pub max_lo: usize,
    pub max_hi: usize,
    /// Probability of an unbounded upper bound.
    pub infinite_bias: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            atoms: ["p", "q", "r"].iter().map(|s| String::from(*s)).collect(),
            max_trace_len: 10,
            max_lo: 2,
            max_hi: 6,
            infinite_bias: 0.15,
        }
    }
}

pub fn random_state<R: Rng>(rng: &mut R, cfg: &GenConfig) -> State {
    cfg.atoms
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}

/// A canonical lasso with `|π| ≤ max_trace_len`.
pub fn random_trace<R: Rng>(rng: &mut R, cfg: &GenConfig) -> LassoTrace {
    let total = rng.gen_range(1..=cfg.max_trace_len.max(1));
    let pre = rng.gen_range(0..total);
    let states: Vec<State> = (0..total).map(|_| random_state(rng, cfg)).collect();
    let (prefix, suffix) = states.split_at(pre);
    LassoTrace::canonicalize(prefix.to_vec(), suffix.to_vec()).expect("non-empty suffix")
}

pub fn random_interval<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Interval {
    let lo = rng.gen_range(0..=cfg.max_lo);
    if rng.gen_bool(cfg.infinite_bias) {
        Interval::unbounded(lo)
    } else {
        Interval::bounded(lo, rng.gen_range(lo..=cfg.max_hi.max(lo)))
    }
}

/// A random formula with temporal depth at most `depth` and at most `size`
/// binary connectives.
pub fn random_formula<R: Rng>(rng: &mut R, cfg: &GenConfig, depth: usize, size: usize) -> Formula {
    let leaf = |rng: &mut R| -> Formula {
        match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::ff(),
            _ => Formula::atom(cfg.atoms[rng.gen_range(0..cfg.atoms.len())].clone()),
        }
    };
    if size == 0 {
        return leaf(rng);
    }
    let choice = rng.gen_range(0..if depth > 0 { 7 } else { 4 });
    let split = |rng: &mut R| {
        let l = rng.gen_range(0..size);
        (l, size - 1 - l)
    };
    match choice {
        0 => leaf(rng),
        1 => Formula::not(random_formula(rng, cfg, depth, size - 1)),
        2 => {
            let (l, r) = split(rng);
            Formula::and(
                random_formula(rng, cfg, depth, l),
                random_formula(rng, cfg, depth, r),
            )
        }
        3 => {
            let (l, r) = split(rng);
            Formula::or(
                random_formula(rng, cfg, depth, l),
                random_formula(rng, cfg, depth, r),
            )
        }
        4 => Formula::eventually(
            random_interval(rng, cfg),
            random_formula(rng, cfg, depth - 1, size - 1),
        ),
        _ => {
            let (l, r) = split(rng);
            let i = random_interval(rng, cfg);
            let a = random_formula(rng, cfg, depth - 1, l);
            let b = random_formula(rng, cfg, depth - 1, r);
            if choice == 5 {
                Formula::until(a, i, b)
            } else {
                Formula::release(a, i, b)
            }
        }
    }
}

/// A random context whose hole lies under at most `depth` temporal operators.
/// Side operands have temporal depth at most `side_depth`.
pub fn random_context<R: Rng>(
    rng: &mut R,
    cfg: &GenConfig,
    depth: usize,
    side_depth: usize,
    steps: usize,
) -> Context {
    if steps == 0 || rng.gen_bool(0.2) {
        return Context::Hole;
    }
    let side = |rng: &mut R| {
        let size = rng.gen_range(0..=2);
        random_formula(rng, cfg, side_depth, size)
    };
    let pick = rng.gen_range(0..if depth > 0 { 8 } else { 4 });
    let temporal = pick >= 4;
    let inner_depth = if temporal { depth - 1 } else { depth };
    let inner = Box::new(random_context(rng, cfg, inner_depth, side_depth, steps - 1));
    let f = side(rng);
    match pick {
        0 => Context::AndL(inner, f),
        1 => Context::AndR(f, inner),
        2 => Context::OrL(inner, f),
        3 => Context::OrR(f, inner),
        4 => Context::UntilL(inner, random_interval(rng, cfg), f),
        5 => Context::UntilR(f, random_interval(rng, cfg), inner),
        6 => Context::ReleaseL(inner, random_interval(rng, cfg), f),
        _ => Context::ReleaseR(f, random_interval(rng, cfg), inner),
    }
}

/// A random weakening target `ψ △_I ψ′` with non-temporal operands.
pub fn random_target<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Target {
    let kind = if rng.gen_bool(0.5) {
        TemporalKind::Until
    } else {
        TemporalKind::Release
    };
    let size_l = rng.gen_range(0..=1);
    let size_r = rng.gen_range(0..=1);
    let left = random_formula(rng, cfg, 0, size_l);
    let right = random_formula(rng, cfg, 0, size_r);
    Target::new(left, kind, random_interval(rng, cfg), right)
}
