mod common;

use cegiw::check::{CheckError, CheckVerdict, Checker};
use cegiw::driver::{csv_log, jsonl_log, DriverError, VerdictSummary};
use cegiw::{run_cegiw, run_cegiw_with, CegiwResult};
use cegiw_core::{extract, parse_property, Context, Formula, Interval, Target};
use common::*;

fn split(prop: &str) -> (Context, Target) {
    let p = parse_property(prop).unwrap();
    extract(&p.formula, &p.selection).unwrap()
}

#[test]
fn battery_return_window_extends_to_twenty() {
    let m = load_model("models/foraging_battery.mdl");
    let (c, t) = split(RETURN_TO_REST);
    let result = run_cegiw(&m, &c, &t, 24, 64, 8).unwrap();
    assert_eq!(result.interval(), Some(Interval::bounded(1, 20)));
    let his: Vec<_> = result
        .log()
        .iter()
        .map(|r| r.interval_before.hi())
        .collect();
    assert!(his.windows(2).all(|w| w[0] < w[1]), "{his:?}");
    assert_eq!(
        result.log().last().unwrap().verdict,
        VerdictSummary::HoldsUpToBound(24)
    );
}

#[test]
fn battery_minimum_absence_contracts_to_three() {
    let m = load_model("models/foraging_battery.mdl");
    let (c, t) = split(MIN_ABSENCE);
    assert_eq!(t.kind, cegiw_core::TemporalKind::Release);
    let result = run_cegiw(&m, &c, &t, 24, 64, 8).unwrap();
    assert_eq!(result.interval(), Some(Interval::bounded(1, 3)));
    assert_eq!(result.log().len(), 2);
}

#[test]
fn no_battery_has_no_weakening() {
    let m = load_model("models/foraging.mdl");
    let (c, t) = split(RETURN_TO_REST);
    let result = run_cegiw(&m, &c, &t, 8, 64, 8).unwrap();
    let CegiwResult::NoWeakening { witness, log } = result else {
        panic!("{result:?}")
    };
    assert_eq!(log.len(), 1);
    assert_eq!(
        names(witness.suffix()),
        names(search_loop_witness().suffix())
    );
    assert_eq!(witness, search_loop_witness());
}

#[test]
fn iteration_limit() {
    let m = load_model("models/foraging_battery.mdl");
    let (c, t) = split(RETURN_TO_REST);
    let result = run_cegiw(&m, &c, &t, 24, 1, 8).unwrap();
    assert!(matches!(result, CegiwResult::BoundOrIterationExhausted { ref log } if log.len() == 1));
    assert!(matches!(
        run_cegiw(&m, &c, &t, 24, 0, 8),
        Err(DriverError::ZeroIterations)
    ));
}

#[test]
fn one_counterexample_per_round_reaches_the_same_interval() {
    let m = load_model("models/foraging_battery.mdl");
    let (c, t) = split(RETURN_TO_REST);
    let single = run_cegiw(&m, &c, &t, 24, 64, 1).unwrap();
    assert_eq!(single.interval(), Some(Interval::bounded(1, 20)));
}

#[test]
fn logs() {
    let m = load_model("models/foraging_battery.mdl");
    let (c, t) = split(MIN_ABSENCE);
    let result = run_cegiw(&m, &c, &t, 24, 64, 8).unwrap();
    let csv = csv_log(result.log());
    assert_eq!(csv, "iteration,lo,hi\n1,1,20\n2,1,3\n");
    let json = jsonl_log(result.log());
    let lines: Vec<serde_json::Value> = json
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0]["interval_before"],
        serde_json::json!({"lo": 1, "hi": 20})
    );
    assert_eq!(
        lines[0]["interval_after"],
        serde_json::json!({"lo": 1, "hi": 3})
    );
    assert!(!lines[0]["counterexamples_used"]
        .as_array()
        .unwrap()
        .is_empty());
    assert_eq!(
        lines[1]["verdict"],
        serde_json::json!({"holds_up_to_bound": 24})
    );
    assert_eq!(lines[1]["interval_after"], serde_json::Value::Null);
}

/// Returns a trace that satisfies every formula it is asked about.
struct LyingChecker;

impl Checker for LyingChecker {
    fn check(&mut self, _: &Formula) -> Result<CheckVerdict, CheckError> {
        Ok(CheckVerdict::Violated(vec![lasso(&[], &["resting"])]))
    }
    fn bound(&self) -> usize {
        4
    }
}

#[test]
fn spurious_counterexample_is_rejected() {
    let (c, t) = split("G (resting -> F[1,3]? resting)");
    assert!(matches!(
        run_cegiw_with(&mut LyingChecker, &c, &t, 4),
        Err(DriverError::SpuriousCounterexample { .. })
    ));
}
