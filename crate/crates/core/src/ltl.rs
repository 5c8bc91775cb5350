//! Expansion of bounded intervals into `X` chains.
//!
//! The result only uses `U`/`R` over `[0,∞]`, `X` (encoded as `◇_[1,1]`) and
//! propositional connectives, so it can be handed to an ordinary LTL checker.

use crate::formula::Formula;
use crate::interval::{Interval, UpperBound};

/// Translates an MTL formula into an equivalent LTL formula.
pub fn to_ltl(phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(_) | Formula::True => phi.clone(),
        Formula::Not(a) => Formula::not(to_ltl(a)),
        Formula::And(a, b) => Formula::and(to_ltl(a), to_ltl(b)),
        Formula::Or(a, b) => Formula::or(to_ltl(a), to_ltl(b)),
        Formula::Until(a, interval, b) => expand_until(&to_ltl(a), interval, &to_ltl(b)),
        Formula::Release(a, interval, b) => expand_release(&to_ltl(a), interval, &to_ltl(b)),
    }
}

fn with_next_prefix(steps: usize, phi: Formula) -> Formula {
    (0..steps).fold(phi, |acc, _| Formula::next(acc))
}

fn expand_until(a: &Formula, interval: &Interval, b: &Formula) -> Formula {
    let shift = interval.lo();
    let body = match interval.hi() {
        UpperBound::Infinity => Formula::until(a.clone(), Interval::full(), b.clone()),
        // a U_[0,0] b = b;  a U_[0,n] b = b ∨ (a ∧ X(a U_[0,n-1] b))
        UpperBound::Finite(hi) => (0..hi - shift).fold(b.clone(), |acc, _| {
            or_simplified(b.clone(), and_simplified(a.clone(), Formula::next(acc)))
        }),
    };
    with_next_prefix(shift, body)
}

fn expand_release(a: &Formula, interval: &Interval, b: &Formula) -> Formula {
    let shift = interval.lo();
    let body = match interval.hi() {
        UpperBound::Infinity => Formula::release(a.clone(), Interval::full(), b.clone()),
        // a R_[0,0] b = b;  a R_[0,n] b = b ∧ (a ∨ X(a R_[0,n-1] b))
        UpperBound::Finite(hi) => (0..hi - shift).fold(b.clone(), |acc, _| {
            and_simplified(b.clone(), or_simplified(a.clone(), Formula::next(acc)))
        }),
    };
    with_next_prefix(shift, body)
}

fn and_simplified(a: Formula, b: Formula) -> Formula {
    match (a, b) {
        (Formula::True, x) | (x, Formula::True) => x,
        (a, b) => Formula::and(a, b),
    }
}

fn or_simplified(a: Formula, b: Formula) -> Formula {
    if a.is_false() {
        b
    } else if b.is_false() {
        a
    } else {
        Formula::or(a, b)
    }
}
