//! Model and specification text for an external SMV model checker.

use cegiw_core::{to_ltl, Formula, Interval, UpperBound};

use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmitError {
    #[error("property atom `{0}` is not a boolean variable or DEFINE of the model")]
    UnknownAtom(String),
}

/// `(model text, LTLSPEC line)` for checking `phi` on `m`.
///
/// Intervals are expanded into `X` chains first, so the specification only
/// uses `X`, `U`, `V`, `F`, `G` and boolean connectives.
pub fn emit_external_problem(m: &Model, phi: &Formula) -> Result<(String, String), EmitError> {
    for atom in phi.atoms() {
        if !m.atoms().contains(&atom) {
            return Err(EmitError::UnknownAtom(atom));
        }
    }
    Ok((m.to_string(), format!("LTLSPEC {}", ltl_text(&to_ltl(phi)))))
}

/// Renders a formula whose intervals are all `[0,∞]` or `X` steps.
///
/// # Panics
///
/// On any other interval; run [`to_ltl`] first.
pub fn ltl_text(phi: &Formula) -> String {
    let next = Interval::bounded(1, 1);
    let wrap = |f: &Formula| {
        let s = ltl_text(f);
        if matches!(
            f,
            Formula::And(..) | Formula::Or(..) | Formula::Until(..) | Formula::Release(..)
        ) && !is_prefix_op(f)
        {
            format!("({s})")
        } else {
            s
        }
    };
    match phi {
        Formula::Atom(p) => p.clone(),
        Formula::True => "TRUE".into(),
        f if f.is_false() => "FALSE".into(),
        Formula::Not(a) => format!("!{}", wrap(a)),
        Formula::Or(a, b) => match &**a {
            Formula::Not(premise) if !premise.is_false() && **premise != Formula::True => {
                format!("{} -> {}", wrap(premise), wrap(b))
            }
            _ => format!("{} | {}", wrap(a), wrap(b)),
        },
        Formula::And(a, b) => format!("{} & {}", wrap(a), wrap(b)),
        Formula::Until(a, i, b) if **a == Formula::True && *i == next => format!("X {}", wrap(b)),
        Formula::Until(a, i, b) => {
            assert_eq!(
                *i,
                Interval::full(),
                "expand intervals before rendering LTL"
            );
            if **a == Formula::True {
                format!("F {}", wrap(b))
            } else {
                format!("{} U {}", wrap(a), wrap(b))
            }
        }
        Formula::Release(a, i, b) => {
            assert!(
                i.lo() == 0 && i.hi() == UpperBound::Infinity,
                "expand intervals before rendering LTL"
            );
            if a.is_false() {
                format!("G {}", wrap(b))
            } else {
                format!("{} V {}", wrap(a), wrap(b))
            }
        }
    }
}

fn is_prefix_op(f: &Formula) -> bool {
    match f {
        Formula::Until(a, _, _) => **a == Formula::True,
        Formula::Release(a, _, _) => a.is_false(),
        _ => false,
    }
}

/// The complete input file: model text followed by the specification.
pub fn external_input(m: &Model, phi: &Formula) -> Result<String, EmitError> {
    let (model, spec) = emit_external_problem(m, phi)?;
    Ok(format!("{model}{spec}\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use cegiw_core::parse_formula;

    fn model() -> Model {
        parse_model("VAR s : {R, A}; DEFINE resting := s = R; INIT s = R TRANS next(s) != s")
            .unwrap()
    }

    #[test]
    fn return_window_expands_into_next_chain() {
        let phi = parse_formula("G (resting -> F[1,3] resting)").unwrap();
        let (_, spec) = emit_external_problem(&model(), &phi).unwrap();
        assert_eq!(
            spec,
            "LTLSPEC G (resting -> X (resting | X (resting | X resting)))"
        );
    }

    #[test]
    fn trivial_spec() {
        let (_, spec) = emit_external_problem(&model(), &Formula::True).unwrap();
        assert_eq!(spec, "LTLSPEC TRUE");
    }

    #[test]
    fn emitted_model_parses_back() {
        let m = model();
        let (text, _) = emit_external_problem(&m, &Formula::True).unwrap();
        assert_eq!(parse_model(&text).unwrap(), m);
        let full = external_input(&m, &parse_formula("resting U !resting").unwrap()).unwrap();
        assert!(full.ends_with("LTLSPEC resting U !resting\n"));
        assert_eq!(parse_model(&full).unwrap(), m);
    }

    #[test]
    fn unknown_atom() {
        let err = emit_external_problem(&model(), &parse_formula("F moving").unwrap()).unwrap_err();
        assert_eq!(err, EmitError::UnknownAtom("moving".into()));
    }
}
