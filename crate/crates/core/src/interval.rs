//! Closed natural-number intervals with a possibly infinite upper bound.

use core::cmp::Ordering;
use core::fmt;

use crate::formula::TemporalKind;

/// Upper end of an [`Interval`]. Every finite bound is below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpperBound {
    Finite(usize),
    Infinity,
}

impl UpperBound {
    pub fn finite(self) -> Option<usize> {
        match self {
            UpperBound::Finite(n) => Some(n),
            UpperBound::Infinity => None,
        }
    }

    /// `min(self, n)` as a natural number.
    pub fn min_with(self, n: usize) -> usize {
        match self {
            UpperBound::Finite(b) => b.min(n),
            UpperBound::Infinity => n,
        }
    }
}

impl From<usize> for UpperBound {
    fn from(n: usize) -> Self {
        UpperBound::Finite(n)
    }
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBound::Finite(n) => write!(f, "{n}"),
            UpperBound::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval lower bound {lo} exceeds upper bound {hi}")]
    Inverted { lo: usize, hi: usize },
}

/// A closed interval `[lo, hi]` over the naturals, `hi` possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: usize,
    hi: UpperBound,
}

impl Interval {
    pub fn new(lo: usize, hi: UpperBound) -> Result<Self, IntervalError> {
        match hi {
            UpperBound::Finite(h) if h < lo => Err(IntervalError::Inverted { lo, hi: h }),
            _ => Ok(Interval { lo, hi }),
        }
    }

    /// `[lo, hi]`.
    ///
    /// # Panics
    ///
    /// If `lo > hi`.
    pub fn bounded(lo: usize, hi: usize) -> Self {
        Self::new(lo, UpperBound::Finite(hi)).expect("inverted interval")
    }

    /// `[lo, ∞]`.
    pub fn unbounded(lo: usize) -> Self {
        Interval {
            lo,
            hi: UpperBound::Infinity,
        }
    }

    /// `[0, ∞]`, the interval of plain LTL operators.
    pub fn full() -> Self {
        Self::unbounded(0)
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> UpperBound {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.hi, UpperBound::Finite(_))
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.lo && UpperBound::Finite(n) <= self.hi
    }

    /// Same lower bound, new upper bound.
    pub fn with_hi(&self, hi: UpperBound) -> Result<Self, IntervalError> {
        Self::new(self.lo, hi)
    }

    /// True when `self` is a right-bound extension of `orig`
    /// (same lower bound, upper bound not smaller).
    pub fn is_extension_of(&self, orig: &Interval) -> bool {
        self.lo == orig.lo && self.hi >= orig.hi
    }

    /// True when `self` is a right-bound contraction of `orig`.
    pub fn is_contraction_of(&self, orig: &Interval) -> bool {
        self.lo == orig.lo && self.hi <= orig.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Direction in which an interval is weakened.
///
/// Extending the interval of `U` and contracting the interval of `R` both make
/// the enclosing formula weaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModificationKind {
    Extension,
    Contraction,
}

impl ModificationKind {
    pub fn of(kind: TemporalKind) -> Self {
        match kind {
            TemporalKind::Until => ModificationKind::Extension,
            TemporalKind::Release => ModificationKind::Contraction,
        }
    }

    /// Compares two right-bound modifications of a common interval by logical
    /// strength: `Less` means `a` yields the stronger formula.
    pub fn compare_strength(self, a: &Interval, b: &Interval) -> Ordering {
        match self {
            ModificationKind::Extension => a.hi.cmp(&b.hi),
            ModificationKind::Contraction => b.hi.cmp(&a.hi),
        }
    }

    /// True when `modified` moves in this direction from `orig`.
    pub fn admits(self, orig: &Interval, modified: &Interval) -> bool {
        match self {
            ModificationKind::Extension => modified.is_extension_of(orig),
            ModificationKind::Contraction => modified.is_contraction_of(orig),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_bounds() {
        assert_eq!(
            Interval::new(3, UpperBound::Finite(1)),
            Err(IntervalError::Inverted { lo: 3, hi: 1 })
        );
        assert!(Interval::new(3, UpperBound::Infinity).is_ok());
        assert!(Interval::new(2, UpperBound::Finite(2)).is_ok());
    }

    #[test]
    fn infinity_dominates_naturals() {
        assert!(UpperBound::Finite(usize::MAX) < UpperBound::Infinity);
        assert_eq!(UpperBound::Infinity.min_with(7), 7);
        assert_eq!(UpperBound::Finite(3).min_with(7), 3);
        assert!(Interval::unbounded(2).contains(1_000_000));
        assert!(!Interval::unbounded(2).contains(1));
    }

    #[test]
    fn strength_order_follows_direction() {
        let a = Interval::bounded(0, 3);
        let b = Interval::bounded(0, 7);
        assert_eq!(
            ModificationKind::Extension.compare_strength(&a, &b),
            Ordering::Less
        );
        assert_eq!(
            ModificationKind::Contraction.compare_strength(&a, &b),
            Ordering::Greater
        );
        assert!(ModificationKind::Extension.admits(&a, &b));
        assert!(!ModificationKind::Contraction.admits(&a, &b));
    }

    #[test]
    fn display() {
        use std::string::ToString;
        assert_eq!(Interval::bounded(1, 20).to_string(), "[1,20]");
        assert_eq!(Interval::full().to_string(), "[0,inf]");
    }
}
