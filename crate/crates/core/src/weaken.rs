//! Optimal right-bound weakening of one interval against one lasso trace.
//!
//! `weaken(C, ψ △_I ψ′, π, t)` returns the strongest right-bound modification
//! `I′` of `I` (an extension when `△ = U`, a contraction when `△ = R`) with
//! `π, t ⊨ C[ψ △_{I′} ψ′]`, or [`WeakenOutcome::NoneExists`] when no
//! modification works.
//!
//! Satisfaction of `C[ψ △_{I′} ψ′]` is monotone in `I′` along the weakening
//! order, so each position `t` has one minimal requirement. The recursion
//! follows the context: positions quantified universally (left of `U`, right
//! of `R`) combine their requirements with [`weakest_of`], positions chosen
//! existentially combine them with [`strongest_of`].

use core::cmp::Ordering;

use crate::context::{Context, Target};
use crate::eval::eval;
use crate::formula::{Formula, TemporalKind};
use crate::interval::{Interval, ModificationKind, UpperBound};
use crate::lasso::LassoTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeakenOutcome {
    Found(Interval),
    NoneExists,
}

impl WeakenOutcome {
    pub fn interval(self) -> Option<Interval> {
        match self {
            WeakenOutcome::Found(i) => Some(i),
            WeakenOutcome::NoneExists => None,
        }
    }
}

impl From<Option<Interval>> for WeakenOutcome {
    fn from(value: Option<Interval>) -> Self {
        value.map_or(WeakenOutcome::NoneExists, WeakenOutcome::Found)
    }
}

/// Work counters of one weakening call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WeakenStats {
    /// Trace positions scanned across all recursion levels.
    pub visited: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("cannot choose from an empty set of intervals")]
pub struct EmptyIntervalSet;

/// The weakest interval of a set of right-bound modifications of one interval:
/// largest upper bound for extensions, smallest for contractions.
pub fn weakest_of<I>(intervals: I, kind: ModificationKind) -> Result<Interval, EmptyIntervalSet>
where
    I: IntoIterator<Item = Interval>,
{
    intervals
        .into_iter()
        .max_by(|a, b| kind.compare_strength(a, b))
        .ok_or(EmptyIntervalSet)
}

/// The strongest interval of a set of right-bound modifications of one interval.
pub fn strongest_of<I>(intervals: I, kind: ModificationKind) -> Result<Interval, EmptyIntervalSet>
where
    I: IntoIterator<Item = Interval>,
{
    intervals
        .into_iter()
        .min_by(|a, b| kind.compare_strength(a, b))
        .ok_or(EmptyIntervalSet)
}

/// Entry point: dispatch on the outermost context constructor.
pub fn weaken(c: &Context, target: &Target, trace: &LassoTrace, t: usize) -> WeakenOutcome {
    weaken_with_stats(c, target, trace, t).0
}

pub fn weaken_with_stats(
    c: &Context,
    target: &Target,
    trace: &LassoTrace,
    t: usize,
) -> (WeakenOutcome, WeakenStats) {
    let mut w = Weakener::new(target, trace);
    let out = w.within(c, t);
    (out.into(), WeakenStats { visited: w.visited })
}

/// Weakens `ψ_l U_I ψ_r` directly: scan for the first `ψ_r` position while
/// `ψ_l` keeps holding.
pub fn weaken_u_direct(
    psi_l: &Formula,
    psi_r: &Formula,
    interval: Interval,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    let target = Target::new(psi_l.clone(), TemporalKind::Until, interval, psi_r.clone());
    Weakener::new(&target, trace).until_direct(t).into()
}

/// Weakens `ψ_l R_I ψ_r` directly: cut the interval just before the first
/// unreleased `ψ_r` failure.
pub fn weaken_r_direct(
    psi_l: &Formula,
    psi_r: &Formula,
    interval: Interval,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    let target = Target::new(
        psi_l.clone(),
        TemporalKind::Release,
        interval,
        psi_r.clone(),
    );
    Weakener::new(&target, trace).release_direct(t).into()
}

/// Target inside the left operand of `C U_J φ`.
pub fn weaken_u_left(
    c: &Context,
    phi: &Formula,
    j: Interval,
    target: &Target,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    Weakener::new(target, trace)
        .until_left(c, phi, &j, t)
        .into()
}

/// Target inside the right operand of `φ U_J C`.
pub fn weaken_u_right(
    phi: &Formula,
    c: &Context,
    j: Interval,
    target: &Target,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    Weakener::new(target, trace)
        .until_right(phi, c, &j, t)
        .into()
}

/// Target inside the left (releasing) operand of `C R_J φ`.
pub fn weaken_r_left(
    c: &Context,
    phi: &Formula,
    j: Interval,
    target: &Target,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    Weakener::new(target, trace)
        .release_left(c, phi, &j, t)
        .into()
}

/// Target inside the right (invariant) operand of `φ R_J C`.
pub fn weaken_r_right(
    phi: &Formula,
    c: &Context,
    j: Interval,
    target: &Target,
    trace: &LassoTrace,
    t: usize,
) -> WeakenOutcome {
    Weakener::new(target, trace)
        .release_right(phi, c, &j, t)
        .into()
}

struct Weakener<'a> {
    target: &'a Target,
    trace: &'a LassoTrace,
    kind: ModificationKind,
    visited: usize,
}

impl<'a> Weakener<'a> {
    fn new(target: &'a Target, trace: &'a LassoTrace) -> Self {
        Weakener {
            target,
            trace,
            kind: ModificationKind::of(target.kind),
            visited: 0,
        }
    }

    fn orig(&self) -> Interval {
        self.target.interval
    }

    fn holds(&mut self, t: usize, phi: &Formula) -> bool {
        eval(self.trace, t, phi)
    }

    fn weaker(&self, acc: Option<Interval>, next: Interval) -> Interval {
        match acc {
            Some(a) if self.kind.compare_strength(&a, &next) == Ordering::Greater => a,
            _ => next,
        }
    }

    fn stronger(&self, acc: Option<Interval>, next: Interval) -> Interval {
        match acc {
            Some(a) if self.kind.compare_strength(&a, &next) != Ordering::Greater => a,
            _ => next,
        }
    }

    fn within(&mut self, c: &Context, t: usize) -> Option<Interval> {
        match c {
            Context::Hole => match self.target.kind {
                TemporalKind::Until => self.until_direct(t),
                TemporalKind::Release => self.release_direct(t),
            },
            Context::AndL(c, phi) | Context::AndR(phi, c) => {
                self.visited += 1;
                if self.holds(t, phi) {
                    self.within(c, t)
                } else {
                    None
                }
            }
            Context::OrL(c, phi) | Context::OrR(phi, c) => {
                self.visited += 1;
                if self.holds(t, phi) {
                    Some(self.orig())
                } else {
                    self.within(c, t)
                }
            }
            Context::UntilL(c, j, phi) => self.until_left(c, phi, j, t),
            Context::UntilR(phi, j, c) => self.until_right(phi, c, j, t),
            Context::ReleaseL(c, j, phi) => self.release_left(c, phi, j, t),
            Context::ReleaseR(phi, j, c) => self.release_right(phi, c, j, t),
        }
    }

    fn until_direct(&mut self, t: usize) -> Option<Interval> {
        let orig = self.orig();
        let a = orig.lo();
        for i in a..=self.trace.end_index(a) {
            self.visited += 1;
            if self.holds(t + i, &self.target.right) {
                return orig.with_hi(orig.hi().max(UpperBound::Finite(i))).ok();
            }
            if !self.holds(t + i, &self.target.left) {
                break;
            }
        }
        None
    }

    fn release_direct(&mut self, t: usize) -> Option<Interval> {
        let orig = self.orig();
        for i in self.trace.covering(&orig).offsets() {
            self.visited += 1;
            if !self.holds(t + i, &self.target.right) {
                // Nothing released before `i`, so only intervals ending before it work.
                return if i == orig.lo() {
                    None
                } else {
                    orig.with_hi(UpperBound::Finite(i - 1)).ok()
                };
            }
            if self.holds(t + i, &self.target.left) {
                return Some(orig);
            }
        }
        Some(orig)
    }

    fn until_left(
        &mut self,
        c: &Context,
        phi: &Formula,
        j: &Interval,
        t: usize,
    ) -> Option<Interval> {
        let mut acc = None;
        for i in self.trace.covering(j).offsets() {
            self.visited += 1;
            if self.holds(t + i, phi) {
                return Some(acc.unwrap_or(self.orig()));
            }
            let needed = self.within(c, t + i)?;
            acc = Some(self.weaker(acc, needed));
        }
        None
    }

    fn until_right(
        &mut self,
        phi: &Formula,
        c: &Context,
        j: &Interval,
        t: usize,
    ) -> Option<Interval> {
        let orig = self.orig();
        let mut best = None;
        for i in self.trace.covering(j).offsets() {
            self.visited += 1;
            if let Some(found) = self.within(c, t + i) {
                let b = self.stronger(best, found);
                if b == orig {
                    return Some(b);
                }
                best = Some(b);
            }
            if !self.holds(t + i, phi) {
                break;
            }
        }
        best
    }

    fn release_left(
        &mut self,
        c: &Context,
        phi: &Formula,
        j: &Interval,
        t: usize,
    ) -> Option<Interval> {
        let orig = self.orig();
        let cover = self.trace.covering(j);
        let mut first_failure = None;
        for i in cover.offsets() {
            self.visited += 1;
            if !self.holds(t + i, phi) {
                first_failure = Some(i);
                break;
            }
        }
        let Some(f) = first_failure else {
            return Some(orig);
        };
        let mut best = None;
        for k in cover.lo..f {
            self.visited += 1;
            if let Some(found) = self.within(c, t + k) {
                let b = self.stronger(best, found);
                if b == orig {
                    return Some(b);
                }
                best = Some(b);
            }
        }
        best
    }

    fn release_right(
        &mut self,
        phi: &Formula,
        c: &Context,
        j: &Interval,
        t: usize,
    ) -> Option<Interval> {
        // Requirements accumulate over [lo, k]; the first releasing `k` gives the
        // strongest release branch, and the full cover gives the invariant branch.
        let mut acc = None;
        for i in self.trace.covering(j).offsets() {
            self.visited += 1;
            let needed = self.within(c, t + i)?;
            acc = Some(self.weaker(acc, needed));
            if self.holds(t + i, phi) {
                return acc;
            }
        }
        acc
    }
}
