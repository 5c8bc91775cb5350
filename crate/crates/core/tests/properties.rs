//! Randomized semantic properties of evaluation, translation, extraction and
//! weakening. Instances are drawn from a seeded generator so failures replay.

use cegiw_core::context::{extract, Step, Target, TargetSelection};
use cegiw_core::oracle::{
    naive_eval, random_context, random_formula, random_interval, random_target, random_trace,
    weaken_bruteforce, GenConfig,
};
use cegiw_core::weaken::{weaken, weaken_with_stats};
use cegiw_core::{
    eval, parse_formula, to_ltl, Formula, Interval, LassoTrace, ModificationKind, SatTable,
    TemporalKind, UpperBound, WeakenOutcome,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cfg() -> GenConfig {
    GenConfig::default()
}

/// Paths to every Until/Release node.
fn temporal_paths(phi: &Formula) -> Vec<Vec<Step>> {
    let mut out = Vec::new();
    fn go(f: &Formula, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        if matches!(f, Formula::Until(..) | Formula::Release(..)) {
            out.push(path.clone());
        }
        for step in [Step::Left, Step::Right] {
            if let Some(c) = f.child(step) {
                path.push(step);
                go(c, path, out);
                path.pop();
            }
        }
    }
    go(phi, &mut Vec::new(), &mut out);
    out
}

/// Until/Release nodes strictly above the node at `path`.
fn temporal_ancestors(phi: &Formula, path: &[Step]) -> usize {
    (0..path.len())
        .filter(|k| {
            matches!(
                phi.at_path(&path[..*k]),
                Some(Formula::Until(..) | Formula::Release(..))
            )
        })
        .count()
}

fn extend(i: &Interval, by: usize) -> Interval {
    match i.hi() {
        UpperBound::Finite(h) => Interval::bounded(i.lo(), h + by),
        UpperBound::Infinity => *i,
    }
}

fn contract<R: Rng>(rng: &mut R, i: &Interval) -> Interval {
    let cap = i.hi().min_with(i.lo() + 12);
    Interval::bounded(i.lo(), rng.gen_range(i.lo()..=cap))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluators_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let phi = random_formula(&mut r, &cfg(), 3, 6);
        let table = SatTable::new(&pi, &phi);
        for t in 0..2 * pi.len() + 2 {
            let direct = eval(&pi, t, &phi);
            prop_assert_eq!(direct, naive_eval(&pi, t, &phi), "{} on {} at {}", phi, pi, t);
            prop_assert_eq!(direct, table.holds_at(t));
        }
    }

    #[test]
    fn until_release_duality(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let a = random_formula(&mut r, &cfg(), 1, 2);
        let b = random_formula(&mut r, &cfg(), 1, 2);
        let i = random_interval(&mut r, &cfg());
        let t = r.gen_range(0..pi.len() + 3);
        let lhs = Formula::not(Formula::until(a.clone(), i, b.clone()));
        let rhs = Formula::release(Formula::not(a.clone()), i, Formula::not(b.clone()));
        prop_assert_eq!(eval(&pi, t, &lhs), eval(&pi, t, &rhs));
        let lhs = Formula::not(Formula::release(a.clone(), i, b.clone()));
        let rhs = Formula::until(Formula::not(a), i, Formula::not(b));
        prop_assert_eq!(eval(&pi, t, &lhs), eval(&pi, t, &rhs));
    }

    #[test]
    fn nnf_preserves_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let phi = random_formula(&mut r, &cfg(), 3, 6);
        let n = phi.nnf();
        prop_assert!(n.is_nnf());
        for t in 0..pi.len() + 2 {
            prop_assert_eq!(eval(&pi, t, &phi), eval(&pi, t, &n));
        }
    }

    #[test]
    fn ltl_translation_preserves_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let phi = random_formula(&mut r, &cfg(), 2, 4);
        prop_assert_eq!(eval(&pi, 0, &phi), eval(&pi, 0, &to_ltl(&phi)), "{}", phi);
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = random_formula(&mut r, &cfg(), 3, 7);
        let text = phi.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), phi, "{}", text);
    }

    #[test]
    fn extraction_round_trips_semantically(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = random_formula(&mut r, &cfg(), 3, 7);
        let paths = temporal_paths(&phi);
        prop_assume!(!paths.is_empty());
        let path = paths[r.gen_range(0..paths.len())].clone();
        let (c, target) = extract(&phi, &TargetSelection::new(path.clone())).unwrap();
        // negation pushing swaps U and R but never adds or drops one
        prop_assert_eq!(c.hole_depth(), temporal_ancestors(&phi, &path));
        let rebuilt = c.substitute(target.formula());
        let pi = random_trace(&mut r, &cfg());
        for t in 0..pi.len() + 2 {
            prop_assert_eq!(eval(&pi, t, &phi), eval(&pi, t, &rebuilt));
        }
    }

    #[test]
    fn extension_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let a = random_formula(&mut r, &cfg(), 1, 2);
        let b = random_formula(&mut r, &cfg(), 1, 2);
        let i = random_interval(&mut r, &cfg());
        let j = extend(&i, r.gen_range(0..8));
        let t = r.gen_range(0..pi.len() + 3);
        if eval(&pi, t, &Formula::until(a.clone(), i, b.clone())) {
            prop_assert!(eval(&pi, t, &Formula::until(a, j, b)));
        }
    }

    #[test]
    fn contraction_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let a = random_formula(&mut r, &cfg(), 1, 2);
        let b = random_formula(&mut r, &cfg(), 1, 2);
        let i = random_interval(&mut r, &cfg());
        let j = contract(&mut r, &i);
        let t = r.gen_range(0..pi.len() + 3);
        if eval(&pi, t, &Formula::release(a.clone(), i, b.clone())) {
            prop_assert!(eval(&pi, t, &Formula::release(a, j, b)));
        }
    }

    #[test]
    fn contexts_are_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let c = random_context(&mut r, &cfg(), 2, 1, 4);
        let target = random_target(&mut r, &cfg());
        let weaker = match target.kind {
            TemporalKind::Until => extend(&target.interval, r.gen_range(0..8)),
            TemporalKind::Release => contract(&mut r, &target.interval),
        };
        let t = r.gen_range(0..pi.len() + 2);
        if eval(&pi, t, &c.substitute(target.formula())) {
            prop_assert!(eval(&pi, t, &c.substitute(target.with_interval(weaker))));
        }
    }

    #[test]
    fn covering_window_decides_suffix_truth(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let phi = random_formula(&mut r, &cfg(), 2, 4);
        let a = r.gen_range(0..pi.len() + 3);
        let table = SatTable::new(&pi, &phi);
        if (a..=pi.end_index(a)).all(|t| table.holds_at(t)) {
            for t in a..=a + 3 * pi.len() {
                prop_assert!(eval(&pi, t, &phi));
            }
        }
    }

    #[test]
    fn canonical_form_is_stable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = cfg();
        let pre: Vec<_> = (0..r.gen_range(0..5)).map(|_| cegiw_core::oracle::random_state(&mut r, &c)).collect();
        let mut suf: Vec<_> = (0..r.gen_range(1..4)).map(|_| cegiw_core::oracle::random_state(&mut r, &c)).collect();
        // repeat the loop body to exercise period detection
        let reps = r.gen_range(1..4);
        suf = suf.iter().cycle().take(suf.len() * reps).cloned().collect();
        let pi = LassoTrace::canonicalize(pre.clone(), suf.clone()).unwrap();
        let again = LassoTrace::canonicalize(pi.prefix().to_vec(), pi.suffix().to_vec()).unwrap();
        prop_assert_eq!(&again, &pi);
        let raw = |t: usize| if t < pre.len() { &pre[t] } else { &suf[(t - pre.len()) % suf.len()] };
        for t in 0..3 * (pre.len() + suf.len()) {
            prop_assert_eq!(pi.state_at(t), raw(t));
        }
    }

    #[test]
    fn weaken_matches_bruteforce(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pi = random_trace(&mut r, &cfg());
        let c = random_context(&mut r, &cfg(), 2, 1, 4);
        let target = random_target(&mut r, &cfg());
        let got = weaken(&c, &target, &pi, 0);
        let want = weaken_bruteforce(&c, &target, &pi, 0);
        prop_assert_eq!(got, want, "C = {}, target = {}, π = {}", c, target.formula(), pi);
        if let WeakenOutcome::Found(j) = got {
            prop_assert!(ModificationKind::of(target.kind).admits(&target.interval, &j));
            prop_assert!(eval(&pi, 0, &c.substitute(target.with_interval(j))));
        }
    }
}

#[test]
fn weaken_finds_original_when_already_satisfied() {
    let mut r = rng(7);
    let mut checked = 0;
    while checked < 200 {
        let pi = random_trace(&mut r, &cfg());
        let c = random_context(&mut r, &cfg(), 2, 1, 4);
        let target: Target = random_target(&mut r, &cfg());
        if eval(&pi, 0, &c.substitute(target.formula())) {
            checked += 1;
            assert_eq!(
                weaken(&c, &target, &pi, 0),
                WeakenOutcome::Found(target.interval)
            );
        }
    }
}

#[test]
fn visited_positions_are_polynomial() {
    // td = 2 formula: G (p -> F[0,3]? q)
    let phi = parse_formula("G (p -> F[0,3] q)").unwrap();
    let (c, target) = extract(&phi, &TargetSelection::new(vec![Step::Right, Step::Right])).unwrap();
    let mut last = 0;
    for n in [4usize, 8, 16, 32] {
        // (p^{n-1} q)^ω
        let states: Vec<_> = (0..n)
            .map(|k| cegiw_core::lasso::state([if k + 1 < n { "p" } else { "q" }]))
            .collect();
        let pi = LassoTrace::looping(states).unwrap();
        assert_eq!(pi.len(), n);
        let (_, stats) = weaken_with_stats(&c, &target, &pi, 0);
        assert!(stats.visited >= last);
        assert!(stats.visited <= 4 * n * n, "{n}: {}", stats.visited);
        last = stats.visited;
    }
}
