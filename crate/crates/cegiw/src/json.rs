//! JSON encodings of core values.
//!
//! A lasso is `{"prefix": [[atoms...], ...], "suffix": [[atoms...], ...]}`,
//! an interval is `{"lo": a, "hi": b}` with `"hi": null` for `∞`.

use cegiw_core::{Interval, LassoTrace, State, WeakenOutcome};
use serde_json::{json, Value};

fn states_json(states: &[State]) -> Value {
    Value::Array(
        states
            .iter()
            .map(|s| json!(s.iter().collect::<Vec<_>>()))
            .collect(),
    )
}

pub fn lasso_json(t: &LassoTrace) -> Value {
    json!({"prefix": states_json(t.prefix()), "suffix": states_json(t.suffix())})
}

pub fn interval_json(i: &Interval) -> Value {
    json!({"lo": i.lo(), "hi": i.hi().finite()})
}

pub fn outcome_json(o: &WeakenOutcome) -> Value {
    match o {
        WeakenOutcome::Found(i) => interval_json(i),
        WeakenOutcome::NoneExists => Value::Null,
    }
}

#[derive(Debug, thiserror::Error)]
#[error("malformed lasso JSON: {0}")]
pub struct LassoJsonError(String);

/// Inverse of [`lasso_json`]; the result is canonicalized.
pub fn lasso_from_json(v: &Value) -> Result<LassoTrace, LassoJsonError> {
    let states = |key: &str| -> Result<Vec<State>, LassoJsonError> {
        let arr = v
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| LassoJsonError(format!("missing `{key}` array")))?;
        arr.iter()
            .map(|s| {
                s.as_array()
                    .ok_or_else(|| LassoJsonError("state is not an array".into()))?
                    .iter()
                    .map(|a| {
                        a.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| LassoJsonError("atom is not a string".into()))
                    })
                    .collect()
            })
            .collect()
    };
    LassoTrace::canonicalize(states("prefix")?, states("suffix")?)
        .map_err(|e| LassoJsonError(e.to_string()))
}
