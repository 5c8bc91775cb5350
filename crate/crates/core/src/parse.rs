//! Concrete syntax for formulas and properties.
//!
//! ```text
//! φ ::= p | true | false | ( φ ) | ! φ
//!     | F I? φ | G I? φ | X φ
//!     | φ U I? φ | φ R I? φ
//!     | φ & φ | φ | φ | φ -> φ
//! I ::= [ n , n ] | [ n , inf ]
//! ```
//!
//! Binding is tightest for the prefix operators, then `U`/`R` (right
//! associative), `&`, `|` and finally `->` (right associative). A missing
//! interval means `[0,inf]`.
//!
//! A property is a formula in which exactly one temporal operator carries a
//! `?` right after its interval, e.g. `G (resting -> F[1,3]? resting)`. The
//! mark selects the interval to weaken.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::context::{Step, TargetSelection};
use crate::formula::Formula;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line of the offending token.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub column: usize,
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
    /// Tokens that would have been accepted, if that is meaningful here.
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl core::error::Error for ParseError {}

/// A formula with one marked temporal operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub formula: Formula,
    /// Path to the marked `U`/`R` node in `formula`.
    pub selection: TargetSelection,
    /// Byte range of the marked operator's interval text in `source`. Empty
    /// (positioned after the operator) when the interval was omitted; the
    /// operator itself for `X`, which is spliced back as `F`.
    pub interval_span: Range<usize>,
    /// Byte range of the `?` itself.
    pub mark_span: Range<usize>,
    pub source: String,
}

impl Property {
    /// The original text with the marked interval replaced by `interval` and
    /// the `?` removed, so user formatting is preserved.
    pub fn splice(&self, interval: &Interval) -> String {
        let src = &self.source;
        let mut out = String::with_capacity(src.len() + 8);
        out.push_str(&src[..self.interval_span.start]);
        if &src[self.interval_span.clone()] == "X" {
            out.push('F');
        }
        out.push_str(&interval.to_string());
        out.push_str(&src[self.interval_span.end..self.mark_span.start]);
        out.push_str(&src[self.mark_span.end..]);
        out
    }

    /// The interval currently attached to the marked operator.
    pub fn marked_interval(&self) -> Interval {
        match self.formula.at_path(&self.selection.path) {
            Some(Formula::Until(_, i, _) | Formula::Release(_, i, _)) => *i,
            _ => unreachable!("selection always addresses a temporal node"),
        }
    }
}

/// Parses a formula. `?` marks are rejected.
pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    let parsed = Parser::new(input)?.parse_all()?;
    if let Some(mark) = parsed.mark {
        return Err(error_at(
            input,
            mark.mark_span.start,
            "unexpected `?` outside a property",
            vec![],
        ));
    }
    Ok(parsed.formula)
}

/// Parses a property: a formula with exactly one `?`-marked temporal operator.
pub fn parse_property(input: &str) -> Result<Property, ParseError> {
    let parsed = Parser::new(input)?.parse_all()?;
    let Some(mark) = parsed.mark else {
        return Err(error_at(
            input,
            input.len(),
            "property has no `?` mark; put `?` after the interval to weaken, e.g. F[1,3]?",
            vec![],
        ));
    };
    let mut path = mark.path_rev;
    path.reverse();
    Ok(Property {
        formula: parsed.formula,
        selection: TargetSelection::new(path),
        interval_span: mark.interval_span,
        mark_span: mark.mark_span,
        source: input.to_owned(),
    })
}

fn error_at(
    input: &str,
    offset: usize,
    message: impl Into<String>,
    expected: Vec<&'static str>,
) -> ParseError {
    let before = &input[..offset.min(input.len())];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let column = before[line_start..].chars().count() + 1;
    ParseError {
        line,
        column,
        offset,
        message: message.into(),
        expected,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LBrack,
    RBrack,
    Comma,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Question,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Question => "`?`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self, Tok::Ident(s) if s == kw)
    }
}

const KEYWORDS: [&str; 8] = ["U", "R", "F", "G", "X", "true", "false", "inf"];
const START_OF_FORMULA: [&str; 8] = [
    "atom", "`true`", "`false`", "`(`", "`!`", "`F`", "`G`", "`X`",
];

fn lex(input: &str) -> Result<Vec<(Tok, Range<usize>)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'[' => Some(Tok::LBrack),
            b']' => Some(Tok::RBrack),
            b',' => Some(Tok::Comma),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'!' => Some(Tok::Bang),
            b'&' => Some(Tok::Amp),
            b'|' => Some(Tok::Pipe),
            b'?' => Some(Tok::Question),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push((tok, start..i));
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'-' && bytes.get(i + 1) == Some(&b'>') {
            i += 2;
            out.push((Tok::Arrow, start..i));
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = input[start..i]
                .parse::<usize>()
                .map_err(|_| error_at(input, start, "number too large", vec![]))?;
            out.push((Tok::Num(n), start..i));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(input[start..i].to_owned()), start..i));
        } else {
            let ch = input[start..].chars().next().unwrap_or('?');
            return Err(error_at(
                input,
                start,
                format!("unexpected character `{ch}`"),
                vec![],
            ));
        }
    }
    out.push((Tok::Eof, input.len()..input.len()));
    Ok(out)
}

struct Mark {
    // Steps from the marked node up to the current node, innermost first.
    path_rev: Vec<Step>,
    interval_span: Range<usize>,
    mark_span: Range<usize>,
}

struct Parsed {
    formula: Formula,
    mark: Option<Mark>,
}

impl Parsed {
    fn plain(formula: Formula) -> Self {
        Parsed {
            formula,
            mark: None,
        }
    }

    fn under(mut self, steps: &[Step]) -> Option<Mark> {
        if let Some(m) = &mut self.mark {
            m.path_rev.extend(steps.iter().rev());
        }
        self.mark
    }
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, Range<usize>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseError> {
        Ok(Parser {
            input,
            toks: lex(input)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Range<usize> {
        self.toks[self.pos].1.clone()
    }

    fn bump(&mut self) -> (Tok, Range<usize>) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let msg = format!("unexpected {}", self.peek().describe());
        error_at(self.input, self.span().start, msg, expected.to_vec())
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<Range<usize>, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn parse_all(mut self) -> Result<Parsed, ParseError> {
        let p = self.implies()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected(&["`&`", "`|`", "`->`", "`U`", "`R`", "end of input"]));
        }
        Ok(p)
    }

    fn merge(&self, a: Option<Mark>, b: Option<Mark>) -> Result<Option<Mark>, ParseError> {
        match (a, b) {
            (Some(_), Some(second)) => Err(error_at(
                self.input,
                second.mark_span.start,
                "more than one `?` mark",
                vec![],
            )),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn implies(&mut self) -> Result<Parsed, ParseError> {
        let lhs = self.or()?;
        if *self.peek() != Tok::Arrow {
            return Ok(lhs);
        }
        self.bump();
        let rhs = self.implies()?;
        let formula = Formula::implies(lhs.formula.clone(), rhs.formula.clone());
        let mark = self.merge(
            lhs.under(&[Step::Left, Step::Left]),
            rhs.under(&[Step::Right]),
        )?;
        Ok(Parsed { formula, mark })
    }

    fn or(&mut self) -> Result<Parsed, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.and()?;
            let formula = Formula::or(acc.formula.clone(), rhs.formula.clone());
            let mark = self.merge(acc.under(&[Step::Left]), rhs.under(&[Step::Right]))?;
            acc = Parsed { formula, mark };
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Parsed, ParseError> {
        let mut acc = self.binary_temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.binary_temporal()?;
            let formula = Formula::and(acc.formula.clone(), rhs.formula.clone());
            let mark = self.merge(acc.under(&[Step::Left]), rhs.under(&[Step::Right]))?;
            acc = Parsed { formula, mark };
        }
        Ok(acc)
    }

    fn binary_temporal(&mut self) -> Result<Parsed, ParseError> {
        let lhs = self.unary()?;
        let until = self.peek().is_keyword("U");
        if !until && !self.peek().is_keyword("R") {
            return Ok(lhs);
        }
        let op_end = self.bump().1.end;
        let (interval, interval_span) = self.interval_opt(op_end)?;
        let own = self.mark_opt(interval_span)?;
        let rhs = self.binary_temporal()?;
        let formula = if until {
            Formula::until(lhs.formula.clone(), interval, rhs.formula.clone())
        } else {
            Formula::release(lhs.formula.clone(), interval, rhs.formula.clone())
        };
        let mark = self.merge(lhs.under(&[Step::Left]), rhs.under(&[Step::Right]))?;
        let mark = self.merge(own, mark)?;
        Ok(Parsed { formula, mark })
    }

    fn unary(&mut self) -> Result<Parsed, ParseError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Bang => {
                self.bump();
                let inner = self.unary()?;
                let formula = Formula::not(inner.formula.clone());
                Ok(Parsed {
                    formula,
                    mark: inner.under(&[Step::Left]),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.bump();
                    Ok(Parsed::plain(Formula::True))
                }
                "false" => {
                    self.bump();
                    Ok(Parsed::plain(Formula::ff()))
                }
                "F" | "G" | "X" => {
                    let op_span = self.bump().1;
                    let op_end = op_span.end;
                    let (interval, interval_span) = if name == "X" {
                        (Interval::bounded(1, 1), op_span)
                    } else {
                        self.interval_opt(op_end)?
                    };
                    let own = self.mark_opt(interval_span)?;
                    let inner = self.unary()?;
                    let formula = if name == "G" {
                        Formula::globally(interval, inner.formula.clone())
                    } else {
                        Formula::eventually(interval, inner.formula.clone())
                    };
                    let mark = self.merge(own, inner.under(&[Step::Right]))?;
                    Ok(Parsed { formula, mark })
                }
                kw if KEYWORDS.contains(&kw) => Err(self.unexpected(&START_OF_FORMULA)),
                _ => {
                    self.bump();
                    Ok(Parsed::plain(Formula::Atom(name)))
                }
            },
            _ => Err(self.unexpected(&START_OF_FORMULA)),
        }
    }

    fn mark_opt(&mut self, interval_span: Range<usize>) -> Result<Option<Mark>, ParseError> {
        if *self.peek() != Tok::Question {
            return Ok(None);
        }
        let mark_span = self.bump().1;
        Ok(Some(Mark {
            path_rev: Vec::new(),
            interval_span,
            mark_span,
        }))
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Tok::Num(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["number"])),
        }
    }

    fn interval_opt(&mut self, op_end: usize) -> Result<(Interval, Range<usize>), ParseError> {
        if *self.peek() != Tok::LBrack {
            return Ok((Interval::full(), op_end..op_end));
        }
        let start = self.bump().1.start;
        let lo = self.number()?;
        self.expect(Tok::Comma, "`,`")?;
        let hi_span = self.span();
        let hi = if self.peek().is_keyword("inf") {
            self.bump();
            None
        } else if matches!(self.peek(), Tok::Num(_)) {
            Some(self.number()?)
        } else {
            return Err(self.unexpected(&["number", "`inf`"]));
        };
        let end = self.expect(Tok::RBrack, "`]`")?.end;
        let interval = match hi {
            None => Interval::unbounded(lo),
            Some(hi) => Interval::new(lo, hi.into())
                .map_err(|e| error_at(self.input, hi_span.start, e.to_string(), vec![]))?,
        };
        Ok((interval, start..end))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> Formula {
        Formula::atom("resting")
    }

    #[test]
    fn parses_running_property() {
        let prop = parse_property("G (resting -> F[1,3]? resting)").unwrap();
        let expected = Formula::globally(
            Interval::full(),
            Formula::implies(r(), Formula::eventually(Interval::bounded(1, 3), r())),
        );
        assert_eq!(prop.formula, expected);
        assert_eq!(prop.selection.path, vec![Step::Right, Step::Right]);
        assert_eq!(&prop.source[prop.interval_span.clone()], "[1,3]");
        assert_eq!(prop.marked_interval(), Interval::bounded(1, 3));
        assert_eq!(
            prop.splice(&Interval::bounded(1, 20)),
            "G (resting -> F[1,20] resting)"
        );
    }

    #[test]
    fn mark_without_interval_splices_one_in() {
        let prop = parse_property("p U? q").unwrap();
        assert_eq!(prop.selection.path, vec![]);
        assert_eq!(prop.marked_interval(), Interval::full());
        assert_eq!(prop.splice(&Interval::bounded(0, 4)), "p U[0,4] q");
    }

    #[test]
    fn marked_next_splices_as_eventually() {
        let prop = parse_property("G (p -> X? q)").unwrap();
        assert_eq!(prop.marked_interval(), Interval::bounded(1, 1));
        let text = prop.splice(&Interval::bounded(1, 3));
        assert_eq!(text, "G (p -> F[1,3] q)");
        assert_eq!(
            parse_formula(&text).unwrap(),
            prop.formula
                .with_interval_at(&prop.selection.path, Interval::bounded(1, 3))
                .unwrap()
        );
    }

    #[test]
    fn mark_paths() {
        let cases = [
            ("!(p U[0,2]? q)", vec![Step::Left]),
            ("F[0,1]? p -> q", vec![Step::Left, Step::Left]),
            ("a & (b | X? c)", vec![Step::Right, Step::Right]),
            ("p U (q R[1,2]? r)", vec![Step::Right]),
            ("G[0,5]? a", vec![]),
        ];
        for (src, path) in cases {
            assert_eq!(parse_property(src).unwrap().selection.path, path, "{src}");
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let (p, q, s) = (Formula::atom("p"), Formula::atom("q"), Formula::atom("s"));
        assert_eq!(
            parse_formula("p | q & s").unwrap(),
            Formula::or(p.clone(), Formula::and(q.clone(), s.clone()))
        );
        assert_eq!(
            parse_formula("p U q U s").unwrap(),
            Formula::until(
                p.clone(),
                Interval::full(),
                Formula::until(q.clone(), Interval::full(), s.clone())
            )
        );
        assert_eq!(
            parse_formula("p -> q -> s").unwrap(),
            Formula::implies(p.clone(), Formula::implies(q.clone(), s.clone()))
        );
        assert_eq!(
            parse_formula("F p U q").unwrap(),
            Formula::until(
                Formula::eventually(Interval::full(), p.clone()),
                Interval::full(),
                q.clone()
            )
        );
        assert_eq!(
            parse_formula("X !p").unwrap(),
            Formula::next(Formula::not(p))
        );
    }

    #[test]
    fn inverted_interval_is_an_error() {
        let err = parse_formula("p U[3,1] q").unwrap_err();
        assert!(err.message.contains("lower bound"), "{err}");
        assert_eq!((err.line, err.column), (1, 7));
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let err = parse_formula("p &\n  ").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.expected.contains(&"atom"));
        let err = parse_formula("(p").unwrap_err();
        assert_eq!(err.expected, vec!["`)`"]);
        assert!(parse_formula("F[1,2]? p").is_err());
        assert!(parse_property("F? p & G? q").is_err());
        assert!(parse_property("p & q").is_err());
        assert!(parse_formula("p $ q").is_err());
        assert!(parse_formula("U").is_err());
    }

    #[test]
    fn printed_formulas_parse_back() {
        for src in [
            "G (resting -> F[1,3] resting)",
            "p U[2,inf] !q",
            "(p R[0,4] q) & X false",
            "!(p | q)",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{src}");
        }
    }
}
