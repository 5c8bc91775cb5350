//! Lasso traces `π = π_pre (π_suf)^ω` and suffix-covering intervals.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::interval::Interval;

/// The set of atoms that hold in one position of a trace.
pub type State = BTreeSet<String>;

/// Builds a [`State`] from atom names.
pub fn state<I, S>(atoms: I) -> State
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    atoms.into_iter().map(Into::into).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LassoError {
    #[error("lasso suffix must contain at least one state")]
    EmptySuffix,
}

/// An ultimately periodic trace in canonical form.
///
/// The suffix is primitive (not a power of a shorter word) and the prefix
/// cannot be shortened by rotating its last state into the loop. Two lassos
/// denote the same infinite trace iff they are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoTrace {
    prefix: Vec<State>,
    suffix: Vec<State>,
}

/// `C_π([a,b])`: a finite interval that decides quantifiers over `[a,b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverInterval {
    pub lo: usize,
    pub hi: usize,
}

impl CoverInterval {
    pub fn offsets(&self) -> core::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl LassoTrace {
    /// Builds the canonical lasso for `prefix · suffix^ω`.
    pub fn canonicalize(
        mut prefix: Vec<State>,
        mut suffix: Vec<State>,
    ) -> Result<Self, LassoError> {
        if suffix.is_empty() {
            return Err(LassoError::EmptySuffix);
        }
        let period = smallest_period(&suffix);
        suffix.truncate(period);
        while let Some(last) = prefix.last() {
            if *last != suffix[suffix.len() - 1] {
                break;
            }
            prefix.pop();
            suffix.rotate_right(1);
        }
        Ok(LassoTrace { prefix, suffix })
    }

    /// A trace that repeats `suffix` from the start.
    pub fn looping(suffix: Vec<State>) -> Result<Self, LassoError> {
        Self::canonicalize(Vec::new(), suffix)
    }

    pub fn prefix(&self) -> &[State] {
        &self.prefix
    }

    pub fn suffix(&self) -> &[State] {
        &self.suffix
    }

    /// `|π| = |π_pre| + |π_suf|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.suffix.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The representative position in `0..len()` that has the same future as `t`.
    pub fn normalize(&self, t: usize) -> usize {
        let pre = self.prefix.len();
        if t < pre {
            t
        } else {
            pre + (t - pre) % self.suffix.len()
        }
    }

    /// `π(t)`.
    pub fn state_at(&self, t: usize) -> &State {
        let pre = self.prefix.len();
        if t < pre {
            &self.prefix[t]
        } else {
            &self.suffix[(t - pre) % self.suffix.len()]
        }
    }

    pub fn holds_at(&self, t: usize, atom: &str) -> bool {
        self.state_at(t).contains(atom)
    }

    /// `end_π(a)`: `|π|` if `a` lies in the prefix, else `a + |π_suf| − 1`.
    pub fn end_index(&self, a: usize) -> usize {
        if a < self.prefix.len() {
            self.len()
        } else {
            a + self.suffix.len() - 1
        }
    }

    /// `[a, min(b, end_π(a))]` for `I = [a,b]`.
    pub fn covering(&self, interval: &Interval) -> CoverInterval {
        let lo = interval.lo();
        CoverInterval {
            lo,
            hi: interval.hi().min_with(self.end_index(lo)),
        }
    }

    /// All atoms mentioned anywhere in the trace.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.prefix
            .iter()
            .chain(&self.suffix)
            .flatten()
            .cloned()
            .collect()
    }
}

fn smallest_period(word: &[State]) -> usize {
    let n = word.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| word[i] == word[i - p]))
        .unwrap_or(n)
}

fn fmt_state(f: &mut fmt::Formatter<'_>, s: &State) -> fmt::Result {
    f.write_str("{")?;
    for (k, atom) in s.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        f.write_str(atom)?;
    }
    f.write_str("}")
}

/// `{a}{b}({c}{d})^ω`
impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.prefix {
            fmt_state(f, s)?;
        }
        f.write_str("(")?;
        for s in &self.suffix {
            fmt_state(f, s)?;
        }
        f.write_str(")^w")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s(name: &str) -> State {
        state([name])
    }

    fn sample() -> LassoTrace {
        LassoTrace::canonicalize(vec![s("s0"), s("s1")], vec![s("s2"), s("s3"), s("s4")]).unwrap()
    }

    #[test]
    fn state_at_wraps_into_suffix() {
        let pi = sample();
        assert_eq!(pi.state_at(1), &s("s1"));
        assert_eq!(pi.state_at(4), &s("s4"));
        assert_eq!(pi.state_at(7), &s("s4"));
        assert_eq!(pi.state_at(5), &s("s2"));
    }

    #[test]
    fn end_index_cases() {
        let pi = sample();
        assert_eq!(pi.end_index(1), 5);
        assert_eq!(pi.end_index(3), 5);
        let single = LassoTrace::looping(vec![s("p")]).unwrap();
        assert_eq!(single.end_index(0), 0);
    }

    #[test]
    fn covering_cases() {
        let pi = sample();
        let c = pi.covering(&Interval::unbounded(1));
        assert_eq!((c.lo, c.hi), (1, 5));
        let c = pi.covering(&Interval::bounded(0, 3));
        assert_eq!((c.lo, c.hi), (0, 3));
        let single = LassoTrace::looping(vec![s("p")]).unwrap();
        let c = single.covering(&Interval::full());
        assert_eq!((c.lo, c.hi), (0, 0));
    }

    #[test]
    fn canonicalize_primitive_suffix() {
        let pi = LassoTrace::canonicalize(vec![], vec![s("s"), s("s")]).unwrap();
        assert_eq!(pi.prefix(), &[] as &[State]);
        assert_eq!(pi.suffix(), &[s("s")]);
    }

    #[test]
    fn canonicalize_rotates_prefix_into_loop() {
        let pi = LassoTrace::canonicalize(vec![s("a"), s("s")], vec![s("t"), s("s")]).unwrap();
        assert_eq!(pi.prefix(), &[s("a")]);
        assert_eq!(pi.suffix(), &[s("s"), s("t")]);
        let raw_prefix = [s("a"), s("s")];
        let raw_suffix = [s("t"), s("s")];
        for t in 0..=10 {
            let raw = if t < 2 {
                &raw_prefix[t]
            } else {
                &raw_suffix[(t - 2) % 2]
            };
            assert_eq!(pi.state_at(t), raw, "t = {t}");
        }
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let pi = sample();
        let again = LassoTrace::canonicalize(pi.prefix().to_vec(), pi.suffix().to_vec()).unwrap();
        assert_eq!(pi, again);
    }

    #[test]
    fn empty_suffix_rejected() {
        assert_eq!(
            LassoTrace::canonicalize(vec![s("a")], vec![]),
            Err(LassoError::EmptySuffix)
        );
    }
}
