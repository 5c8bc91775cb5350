//! Timing clauses of structured natural-language requirements.

use std::num::NonZeroUsize;

use cegiw_core::{Formula, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FretishTiming {
    /// "within n": the response happens in `[0,n]`.
    Within(usize),
    /// "for n": the response holds throughout `[1,n]`.
    For(NonZeroUsize),
    Eventually,
    Always,
}

pub fn timing_to_mtl(timing: FretishTiming, response: Formula) -> Formula {
    match timing {
        FretishTiming::Within(n) => Formula::eventually(Interval::bounded(0, n), response),
        FretishTiming::For(n) => Formula::globally(Interval::bounded(1, n.get()), response),
        FretishTiming::Eventually => Formula::eventually(Interval::full(), response),
        FretishTiming::Always => Formula::globally(Interval::full(), response),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognised timing `{0}`; use `within N`, `for N` (N >= 1), `eventually` or `always`")]
pub struct TimingParseError(String);

impl std::str::FromStr for FretishTiming {
    type Err = TimingParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || TimingParseError(s.to_string());
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["eventually"] => Ok(FretishTiming::Eventually),
            ["always"] => Ok(FretishTiming::Always),
            ["within", n] => n.parse().map(FretishTiming::Within).map_err(|_| err()),
            ["for", n] => n.parse().map(FretishTiming::For).map_err(|_| err()),
            _ => Err(err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translations() {
        let p = Formula::atom("ControlLoopFinish");
        assert_eq!(
            timing_to_mtl(FretishTiming::Within(12), p.clone()).to_string(),
            "F[0,12] ControlLoopFinish"
        );
        let off = Formula::not(Formula::atom("off"));
        let n = NonZeroUsize::new(120).unwrap();
        assert_eq!(
            timing_to_mtl(FretishTiming::For(n), off).to_string(),
            "G[1,120] !off"
        );
        assert_eq!(
            timing_to_mtl(FretishTiming::Eventually, p.clone()).to_string(),
            "F ControlLoopFinish"
        );
        assert_eq!(
            timing_to_mtl(FretishTiming::Always, p).to_string(),
            "G ControlLoopFinish"
        );
    }

    #[test]
    fn within_zero_is_the_current_step() {
        let p = Formula::atom("p");
        let f = timing_to_mtl(FretishTiming::Within(0), p.clone());
        assert_eq!(cegiw_core::to_ltl(&f), p);
    }

    #[test]
    fn parsing() {
        assert_eq!("within 12".parse(), Ok(FretishTiming::Within(12)));
        assert_eq!("always".parse(), Ok(FretishTiming::Always));
        assert!("for 0".parse::<FretishTiming>().is_err());
        assert!("sometime".parse::<FretishTiming>().is_err());
    }
}
