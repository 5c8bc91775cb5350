//! MTL abstract syntax.
//!
//! The core grammar is `p | ⊤ | ¬φ | φ ∧ φ | φ ∨ φ | φ U_I φ | φ R_I φ`.
//! Everything else (`false`, `→`, `◇_I`, `□_I`, `X`) is a constructor that
//! expands into the core grammar, so structurally equal formulas are exactly the
//! ones with the same core tree.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;

use crate::context::Step;
use crate::interval::Interval;

/// The binary temporal operator a weakening target is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemporalKind {
    Until,
    Release,
}

impl TemporalKind {
    pub fn dual(self) -> Self {
        match self {
            TemporalKind::Until => TemporalKind::Release,
            TemporalKind::Release => TemporalKind::Until,
        }
    }
}

impl fmt::Display for TemporalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TemporalKind::Until => "U",
            TemporalKind::Release => "R",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    True,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Box<Formula>, Interval, Box<Formula>),
    Release(Box<Formula>, Interval, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn ff() -> Self {
        Formula::Not(Box::new(Formula::True))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(phi: Formula) -> Self {
        Formula::Not(Box::new(phi))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a → b`, i.e. `¬a ∨ b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn until(a: Formula, interval: Interval, b: Formula) -> Self {
        Formula::Until(Box::new(a), interval, Box::new(b))
    }

    pub fn release(a: Formula, interval: Interval, b: Formula) -> Self {
        Formula::Release(Box::new(a), interval, Box::new(b))
    }

    pub fn temporal(kind: TemporalKind, a: Formula, interval: Interval, b: Formula) -> Self {
        match kind {
            TemporalKind::Until => Formula::until(a, interval, b),
            TemporalKind::Release => Formula::release(a, interval, b),
        }
    }

    /// `◇_I φ ≡ ⊤ U_I φ`.
    pub fn eventually(interval: Interval, phi: Formula) -> Self {
        Formula::until(Formula::True, interval, phi)
    }

    /// `□_I φ ≡ ⊥ R_I φ`.
    pub fn globally(interval: Interval, phi: Formula) -> Self {
        Formula::release(Formula::ff(), interval, phi)
    }

    /// `X φ ≡ ◇_[1,1] φ`.
    pub fn next(phi: Formula) -> Self {
        Formula::eventually(Interval::bounded(1, 1), phi)
    }

    /// Negation that cancels an existing outer negation instead of stacking.
    pub fn negated(self) -> Self {
        match self {
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        }
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Formula::Not(inner) if **inner == Formula::True)
    }

    /// Maximum number of nested `U`/`R` nodes on any root-to-leaf path.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::True => 0,
            Formula::Not(a) => a.temporal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) => a.temporal_depth().max(b.temporal_depth()),
            Formula::Until(a, _, b) | Formula::Release(a, _, b) => {
                1 + a.temporal_depth().max(b.temporal_depth())
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::True => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, _, b)
            | Formula::Release(a, _, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::True => {}
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, _, b)
            | Formula::Release(a, _, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Negation normal form: negations only directly above atoms and `⊤`.
    pub fn nnf(&self) -> Formula {
        self.push_negation(false)
    }

    fn push_negation(&self, negate: bool) -> Formula {
        match (self, negate) {
            (Formula::Atom(_) | Formula::True, false) => self.clone(),
            (Formula::Atom(_) | Formula::True, true) => Formula::not(self.clone()),
            (Formula::Not(a), _) => a.push_negation(!negate),
            (Formula::And(a, b), false) => Formula::and(a.nnf(), b.nnf()),
            (Formula::And(a, b), true) => Formula::or(a.push_negation(true), b.push_negation(true)),
            (Formula::Or(a, b), false) => Formula::or(a.nnf(), b.nnf()),
            (Formula::Or(a, b), true) => Formula::and(a.push_negation(true), b.push_negation(true)),
            (Formula::Until(a, i, b), false) => Formula::until(a.nnf(), *i, b.nnf()),
            (Formula::Until(a, i, b), true) => {
                Formula::release(a.push_negation(true), *i, b.push_negation(true))
            }
            (Formula::Release(a, i, b), false) => Formula::release(a.nnf(), *i, b.nnf()),
            (Formula::Release(a, i, b), true) => {
                Formula::until(a.push_negation(true), *i, b.push_negation(true))
            }
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::True => true,
            Formula::Not(a) => matches!(**a, Formula::Atom(_) | Formula::True),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, _, b)
            | Formula::Release(a, _, b) => a.is_nnf() && b.is_nnf(),
        }
    }

    /// The child reached by one step; `Not` has its operand on the left.
    pub fn child(&self, step: Step) -> Option<&Formula> {
        match (self, step) {
            (Formula::Not(a), Step::Left) => Some(a),
            (
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Until(a, _, b)
                | Formula::Release(a, _, b),
                step,
            ) => Some(if step == Step::Left { a } else { b }),
            _ => None,
        }
    }

    pub fn at_path(&self, path: &[Step]) -> Option<&Formula> {
        path.iter().try_fold(self, |node, step| node.child(*step))
    }

    /// Replaces the interval of the temporal node at `path`.
    pub fn with_interval_at(&self, path: &[Step], interval: Interval) -> Option<Formula> {
        let Some((step, rest)) = path.split_first() else {
            return match self {
                Formula::Until(a, _, b) => Some(Formula::Until(a.clone(), interval, b.clone())),
                Formula::Release(a, _, b) => Some(Formula::Release(a.clone(), interval, b.clone())),
                _ => None,
            };
        };
        let rebuilt = |a: &Formula, b: &Formula| -> Option<(Formula, Formula)> {
            match step {
                Step::Left => Some((a.with_interval_at(rest, interval)?, b.clone())),
                Step::Right => Some((a.clone(), b.with_interval_at(rest, interval)?)),
            }
        };
        Some(match self {
            Formula::Not(a) if *step == Step::Left => {
                Formula::not(a.with_interval_at(rest, interval)?)
            }
            Formula::And(a, b) => {
                let (a, b) = rebuilt(a, b)?;
                Formula::and(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = rebuilt(a, b)?;
                Formula::or(a, b)
            }
            Formula::Until(a, i, b) => {
                let (a, b) = rebuilt(a, b)?;
                Formula::until(a, *i, b)
            }
            Formula::Release(a, i, b) => {
                let (a, b) = rebuilt(a, b)?;
                Formula::release(a, *i, b)
            }
            _ => return None,
        })
    }
}

// Printing precedence, loosest first.
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_TEMPORAL: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_ATOM: u8 = 6;

fn interval_suffix(i: &Interval) -> String {
    if *i == Interval::full() {
        String::new()
    } else {
        alloc::format!("{i}")
    }
}

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Atom(_) | Formula::True => PREC_ATOM,
            Formula::Not(inner) if **inner == Formula::True => PREC_ATOM,
            Formula::Not(_) => PREC_UNARY,
            Formula::Or(a, _) if matches!(**a, Formula::Not(_)) => PREC_IMPLIES,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            Formula::Until(a, _, _) if **a == Formula::True => PREC_UNARY,
            Formula::Release(a, _, _) if a.is_false() => PREC_UNARY,
            Formula::Until(..) | Formula::Release(..) => PREC_TEMPORAL,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min_prec {
            f.write_str("(")?;
            self.fmt_bare(f)?;
            return f.write_str(")");
        }
        self.fmt_bare(f)
    }

    fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => f.write_str(p),
            Formula::True => f.write_str("true"),
            Formula::Not(inner) if **inner == Formula::True => f.write_str("false"),
            Formula::Not(a) => {
                f.write_str("!")?;
                a.fmt_at(f, PREC_UNARY)
            }
            Formula::Or(a, b) if matches!(**a, Formula::Not(_)) => {
                let Formula::Not(premise) = &**a else {
                    unreachable!()
                };
                premise.fmt_at(f, PREC_IMPLIES + 1)?;
                f.write_str(" -> ")?;
                b.fmt_at(f, PREC_IMPLIES)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, PREC_OR)?;
                f.write_str(" | ")?;
                b.fmt_at(f, PREC_OR + 1)
            }
            Formula::And(a, b) => {
                a.fmt_at(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.fmt_at(f, PREC_AND + 1)
            }
            Formula::Until(a, i, b) if **a == Formula::True => {
                if *i == Interval::bounded(1, 1) {
                    f.write_str("X ")?;
                } else {
                    write!(f, "F{} ", interval_suffix(i))?;
                }
                b.fmt_at(f, PREC_UNARY)
            }
            Formula::Release(a, i, b) if a.is_false() => {
                write!(f, "G{} ", interval_suffix(i))?;
                b.fmt_at(f, PREC_UNARY)
            }
            Formula::Until(a, i, b) | Formula::Release(a, i, b) => {
                let op = if matches!(self, Formula::Until(..)) {
                    "U"
                } else {
                    "R"
                };
                a.fmt_at(f, PREC_TEMPORAL + 1)?;
                write!(f, " {op}{} ", interval_suffix(i))?;
                b.fmt_at(f, PREC_TEMPORAL)
            }
        }
    }
}

/// Prints in the concrete property syntax, re-sugaring `F`, `G`, `X`, `->` and
/// `false`. The output parses back to an equal formula.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl From<&str> for Formula {
    fn from(name: &str) -> Self {
        Formula::Atom(name.to_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::string::ToString;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn nnf_de_morgan() {
        let f = Formula::not(Formula::and(p(), q()));
        assert_eq!(f.nnf(), Formula::or(Formula::not(p()), Formula::not(q())));
    }

    #[test]
    fn nnf_until_duality() {
        let i = Interval::bounded(0, 3);
        let f = Formula::not(Formula::until(p(), i, q()));
        assert_eq!(
            f.nnf(),
            Formula::release(Formula::not(p()), i, Formula::not(q()))
        );
    }

    #[test]
    fn nnf_double_negation() {
        assert_eq!(Formula::not(Formula::not(p())).nnf(), p());
    }

    #[test]
    fn temporal_depth_examples() {
        assert_eq!(Formula::and(p(), q()).temporal_depth(), 0);
        let g = Formula::globally(
            Interval::full(),
            Formula::implies(p(), Formula::eventually(Interval::bounded(1, 3), q())),
        );
        assert_eq!(g.temporal_depth(), 2);
        let nested = Formula::until(
            p(),
            Interval::bounded(0, 2),
            Formula::release(
                q(),
                Interval::bounded(0, 4),
                Formula::until(
                    Formula::atom("r"),
                    Interval::bounded(1, 1),
                    Formula::atom("s"),
                ),
            ),
        );
        assert_eq!(nested.temporal_depth(), 3);
    }

    #[test]
    fn printing_resugars() {
        let g = Formula::globally(
            Interval::full(),
            Formula::implies(
                Formula::atom("resting"),
                Formula::eventually(Interval::bounded(1, 3), Formula::atom("resting")),
            ),
        );
        assert_eq!(g.to_string(), "G (resting -> F[1,3] resting)");
        assert_eq!(Formula::next(Formula::not(p())).to_string(), "X !p");
        assert_eq!(
            Formula::until(p(), Interval::full(), q()).to_string(),
            "p U q"
        );
        assert_eq!(Formula::ff().to_string(), "false");
    }

    #[test]
    fn interval_replacement_by_path() {
        let f = Formula::and(p(), Formula::eventually(Interval::bounded(0, 1), q()));
        let g = f
            .with_interval_at(&[Step::Right], Interval::bounded(0, 4))
            .unwrap();
        assert_eq!(
            g,
            Formula::and(p(), Formula::eventually(Interval::bounded(0, 4), q()))
        );
        assert!(f
            .with_interval_at(&[Step::Left], Interval::bounded(0, 4))
            .is_none());
    }
}
