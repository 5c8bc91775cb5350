//! Formulas with a single hole, and extraction of a designated temporal
//! subformula into a context.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, TemporalKind};
use crate::interval::Interval;

/// One step from a node to a child. `Not` keeps its operand on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Left,
    Right,
}

/// Address of a node in a formula, as a sequence of child steps from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TargetSelection {
    pub path: Vec<Step>,
}

impl TargetSelection {
    pub fn new(path: Vec<Step>) -> Self {
        TargetSelection { path }
    }

    pub fn root() -> Self {
        TargetSelection::default()
    }
}

/// A formula with exactly one hole and no negation between the root and the
/// hole. Operands beside the path are arbitrary formulas.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Context {
    Hole,
    AndL(Box<Context>, Formula),
    AndR(Formula, Box<Context>),
    OrL(Box<Context>, Formula),
    OrR(Formula, Box<Context>),
    UntilL(Box<Context>, Interval, Formula),
    UntilR(Formula, Interval, Box<Context>),
    ReleaseL(Box<Context>, Interval, Formula),
    ReleaseR(Formula, Interval, Box<Context>),
}

/// The subformula `ψ △_I ψ′` whose interval is being weakened.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Target {
    pub left: Formula,
    pub kind: TemporalKind,
    pub interval: Interval,
    pub right: Formula,
}

impl Target {
    pub fn new(left: Formula, kind: TemporalKind, interval: Interval, right: Formula) -> Self {
        Target {
            left,
            kind,
            interval,
            right,
        }
    }

    pub fn from_formula(phi: &Formula) -> Option<Self> {
        match phi {
            Formula::Until(a, i, b) => Some(Target::new(
                (**a).clone(),
                TemporalKind::Until,
                *i,
                (**b).clone(),
            )),
            Formula::Release(a, i, b) => Some(Target::new(
                (**a).clone(),
                TemporalKind::Release,
                *i,
                (**b).clone(),
            )),
            _ => None,
        }
    }

    /// `ψ △_I ψ′` with the target's own interval.
    pub fn formula(&self) -> Formula {
        self.with_interval(self.interval)
    }

    /// `ψ △_J ψ′` for another interval `J`.
    pub fn with_interval(&self, interval: Interval) -> Formula {
        Formula::temporal(self.kind, self.left.clone(), interval, self.right.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("path step {depth} leaves the formula")]
    InvalidPath { depth: usize },
    #[error("selected node is not an Until or Release operator")]
    NotTemporal,
}

impl Context {
    /// `C[ψ]`.
    pub fn substitute(&self, psi: Formula) -> Formula {
        match self {
            Context::Hole => psi,
            Context::AndL(c, f) => Formula::and(c.substitute(psi), f.clone()),
            Context::AndR(f, c) => Formula::and(f.clone(), c.substitute(psi)),
            Context::OrL(c, f) => Formula::or(c.substitute(psi), f.clone()),
            Context::OrR(f, c) => Formula::or(f.clone(), c.substitute(psi)),
            Context::UntilL(c, i, f) => Formula::until(c.substitute(psi), *i, f.clone()),
            Context::UntilR(f, i, c) => Formula::until(f.clone(), *i, c.substitute(psi)),
            Context::ReleaseL(c, i, f) => Formula::release(c.substitute(psi), *i, f.clone()),
            Context::ReleaseR(f, i, c) => Formula::release(f.clone(), *i, c.substitute(psi)),
        }
    }

    /// Number of temporal operators on the path from the root to the hole.
    pub fn hole_depth(&self) -> usize {
        match self {
            Context::Hole => 0,
            Context::AndL(c, _) | Context::AndR(_, c) | Context::OrL(c, _) | Context::OrR(_, c) => {
                c.hole_depth()
            }
            Context::UntilL(c, ..)
            | Context::UntilR(.., c)
            | Context::ReleaseL(c, ..)
            | Context::ReleaseR(.., c) => 1 + c.hole_depth(),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Printed by substituting a placeholder atom for the hole.
        write!(f, "{}", self.substitute(Formula::atom("[-]")))
    }
}

/// `C[ψ]`.
pub fn substitute(c: &Context, psi: Formula) -> Formula {
    c.substitute(psi)
}

/// Splits `phi` into a context and the temporal node addressed by `sel`.
///
/// Negations met on the way are pushed inward, so when the selected node sits
/// under an odd number of negations the returned target has the dual operator
/// and negated operands (`¬(ψ U_I ψ′)` becomes `¬ψ R_I ¬ψ′`).
pub fn extract(phi: &Formula, sel: &TargetSelection) -> Result<(Context, Target), ExtractError> {
    let node = phi
        .at_path(&sel.path)
        .ok_or_else(|| ExtractError::InvalidPath {
            depth: first_bad_step(phi, &sel.path),
        })?;
    if !matches!(node, Formula::Until(..) | Formula::Release(..)) {
        return Err(ExtractError::NotTemporal);
    }
    Ok(walk(phi, &sel.path, false))
}

fn first_bad_step(phi: &Formula, path: &[Step]) -> usize {
    let mut node = phi;
    for (k, step) in path.iter().enumerate() {
        match node.child(*step) {
            Some(next) => node = next,
            None => return k,
        }
    }
    path.len()
}

fn side(f: &Formula, negated: bool) -> Formula {
    if negated {
        f.clone().negated()
    } else {
        f.clone()
    }
}

// The path has been validated; every step exists and the last node is temporal.
fn walk(phi: &Formula, path: &[Step], negated: bool) -> (Context, Target) {
    let Some((step, rest)) = path.split_first() else {
        let target = Target::from_formula(phi).expect("validated temporal node");
        return if negated {
            let Target {
                left,
                kind,
                interval,
                right,
            } = target;
            (
                Context::Hole,
                Target::new(left.negated(), kind.dual(), interval, right.negated()),
            )
        } else {
            (Context::Hole, target)
        };
    };
    let left = *step == Step::Left;
    match phi {
        Formula::Not(a) => walk(a, rest, !negated),
        Formula::And(a, b) | Formula::Or(a, b) => {
            // ¬(a ∧ b) = ¬a ∨ ¬b and ¬(a ∨ b) = ¬a ∧ ¬b
            let conjunction = matches!(phi, Formula::And(..)) != negated;
            let (inner, other) = if left { (a, b) } else { (b, a) };
            let (c, target) = walk(inner, rest, negated);
            let other = side(other, negated);
            let c = Box::new(c);
            let ctx = match (conjunction, left) {
                (true, true) => Context::AndL(c, other),
                (true, false) => Context::AndR(other, c),
                (false, true) => Context::OrL(c, other),
                (false, false) => Context::OrR(other, c),
            };
            (ctx, target)
        }
        Formula::Until(a, i, b) | Formula::Release(a, i, b) => {
            // ¬(a U b) = ¬a R ¬b and vice versa
            let until = matches!(phi, Formula::Until(..)) != negated;
            let (inner, other) = if left { (a, b) } else { (b, a) };
            let (c, target) = walk(inner, rest, negated);
            let other = side(other, negated);
            let c = Box::new(c);
            let ctx = match (until, left) {
                (true, true) => Context::UntilL(c, *i, other),
                (true, false) => Context::UntilR(other, *i, c),
                (false, true) => Context::ReleaseL(c, *i, other),
                (false, false) => Context::ReleaseR(other, *i, c),
            };
            (ctx, target)
        }
        Formula::Atom(_) | Formula::True => unreachable!("validated path"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(Context::Hole.substitute(q()), q());
        assert_eq!(
            Context::AndL(Box::new(Context::Hole), p()).substitute(q()),
            Formula::and(q(), p())
        );
        let i = Interval::bounded(0, 3);
        assert_eq!(
            Context::UntilR(p(), i, Box::new(Context::Hole)).substitute(q()),
            Formula::until(p(), i, q())
        );
    }

    #[test]
    fn extract_through_globally_and_implication() {
        let r = Formula::atom("r");
        let phi = Formula::globally(
            Interval::full(),
            Formula::implies(
                r.clone(),
                Formula::eventually(Interval::bounded(1, 3), r.clone()),
            ),
        );
        let (c, target) =
            extract(&phi, &TargetSelection::new(vec![Step::Right, Step::Right])).unwrap();
        assert_eq!(
            c,
            Context::ReleaseR(
                Formula::ff(),
                Interval::full(),
                Box::new(Context::OrR(
                    Formula::not(r.clone()),
                    Box::new(Context::Hole)
                ))
            )
        );
        assert_eq!(
            target,
            Target::new(
                Formula::True,
                TemporalKind::Until,
                Interval::bounded(1, 3),
                r
            )
        );
        assert_eq!(c.substitute(target.formula()), phi);
    }

    #[test]
    fn extract_flips_under_negation() {
        let i = Interval::bounded(0, 3);
        let phi = Formula::not(Formula::until(p(), i, q()));
        let (c, target) = extract(&phi, &TargetSelection::new(vec![Step::Left])).unwrap();
        assert_eq!(c, Context::Hole);
        assert_eq!(
            target,
            Target::new(
                Formula::not(p()),
                TemporalKind::Release,
                i,
                Formula::not(q())
            )
        );
    }

    #[test]
    fn extract_identity() {
        let i = Interval::bounded(0, 3);
        let phi = Formula::until(p(), i, q());
        let (c, target) = extract(&phi, &TargetSelection::root()).unwrap();
        assert_eq!(c, Context::Hole);
        assert_eq!(target.formula(), phi);
    }

    #[test]
    fn extract_errors() {
        let phi = Formula::and(p(), q());
        assert_eq!(
            extract(&phi, &TargetSelection::root()),
            Err(ExtractError::NotTemporal)
        );
        assert_eq!(
            extract(&phi, &TargetSelection::new(vec![Step::Left, Step::Left])),
            Err(ExtractError::InvalidPath { depth: 1 })
        );
    }
}
