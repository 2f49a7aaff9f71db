use std::collections::HashSet;

use super::*;
use crate::fixtures;
use crate::semantics::is_epistemic;
use crate::syntax::{is_el_fragment, node_count, parse_formula};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn sig(preds: &[(&str, usize)], names: &[&str]) -> Signature {
    Signature {
        predicates: preds.iter().map(|(p, a)| (p.to_string(), *a)).collect(),
        names: names.iter().map(|n| n.to_string()).collect(),
        variables: Default::default(),
    }
}

/// Bell numbers by the triangle recurrence.
fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

fn closed_form(s: &Signature, b: &SearchBounds) -> u128 {
    let mut total = 0;
    for n in 1..=b.max_worlds {
        for k in 1..=b.max_agents {
            let (n128, k128) = (n as u128, k as u128);
            let relations = if b.epistemic {
                bell(n).pow(k as u32)
            } else {
                2u128.pow((n * n * k) as u32)
            };
            let rho: u128 = s
                .predicates
                .values()
                .map(|&ar| 2u128.pow((n128 * k128.pow(ar as u32)) as u32))
                .product();
            let eta = k128.pow((n * s.names.len()) as u32);
            total += relations * rho * eta;
        }
    }
    total
}

#[test]
fn enumeration_counts() {
    let empty = sig(&[], &[]);
    assert_eq!(
        enumerate_models(&empty, &SearchBounds::new(1, 1, true))
            .unwrap()
            .count(),
        1
    );
    let pa = sig(&[("P", 1)], &["a"]);
    // One world, one agent: the extension of P is empty or not; a is forced.
    assert_eq!(
        enumerate_models(&pa, &SearchBounds::new(1, 1, true)).unwrap().count(),
        2
    );
    for b in [
        SearchBounds::new(2, 2, true),
        SearchBounds::new(2, 2, false),
        SearchBounds::new(3, 2, true),
    ] {
        let got = enumerate_models(&pa, &b).unwrap().count() as u128;
        assert_eq!(got, closed_form(&pa, &b), "{b:?}");
    }
    let r2 = sig(&[("R", 2), ("Q", 0)], &["a", "b"]);
    let b = SearchBounds::new(2, 2, true);
    assert_eq!(enumerate_models(&r2, &b).unwrap().count() as u128, closed_form(&r2, &b));
}

#[test]
fn enumeration_is_valid_distinct_and_epistemic() {
    let pa = sig(&[("P", 1)], &["a"]);
    let mut seen = HashSet::new();
    for m in enumerate_models(&pa, &SearchBounds::new(3, 2, true)).unwrap() {
        assert!(crate::semantics::validate_model(&m).is_empty());
        assert!(is_epistemic(&m));
        assert!(seen.insert(m.to_json_pretty()));
    }
}

#[test]
fn arbitrary_frames_contain_epistemic_ones() {
    let pa = sig(&[("P", 1)], &["a"]);
    let any: HashSet<String> = enumerate_models(&pa, &SearchBounds::new(2, 2, false))
        .unwrap()
        .map(|m| m.to_json_pretty())
        .collect();
    for mut m in enumerate_models(&pa, &SearchBounds::new(2, 2, true)).unwrap() {
        m.epistemic = false;
        assert!(any.contains(&m.to_json_pretty()));
    }
}

#[test]
fn canonical_order_starts_small() {
    let pa = sig(&[("P", 1)], &["a"]);
    let models: Vec<_> = enumerate_models(&pa, &SearchBounds::new(2, 2, true)).unwrap().collect();
    assert_eq!(models[0].worlds, vec!["w1"]);
    assert_eq!(models[0].agents, vec!["i1"]);
    let sizes: Vec<(usize, usize)> = models.iter().map(|m| (m.worlds.len(), m.agents.len())).collect();
    let mut sorted = sizes.clone();
    sorted.sort();
    assert_eq!(sizes, sorted);
}

#[test]
fn countermodel_examples() {
    let b22 = SearchBounds::new(2, 2, true);
    let v = find_countermodel(&f("?x = a -> K{b} ?x = a"), &b22).unwrap();
    let Verdict::Countermodel { model } = &v else {
        panic!("expected a countermodel, got {v:?}");
    };
    assert!(!eval(model, &f("?x = a -> K{b} ?x = a")).unwrap());

    let b33 = SearchBounds::new(3, 3, true);
    assert_eq!(
        find_countermodel(&f("?x = ?y -> K{a} ?x = ?y"), &b33).unwrap(),
        Verdict::NoCountermodelUpTo { bounds: b33 }
    );
    assert_eq!(
        find_countermodel(&f("true"), &b33).unwrap(),
        Verdict::NoCountermodelUpTo { bounds: b33 }
    );
}

#[test]
fn witness_examples() {
    let b = SearchBounds::new(3, 3, true);
    assert_eq!(
        find_witness(&f("P(a) & ~P(a)"), &b).unwrap(),
        Verdict::UnsatisfiableUpTo { bounds: b }
    );
    let (id, phi) = &suites::corpus()[0];
    assert_eq!(id, "v");
    let v = find_witness(phi, &b).unwrap();
    let model = v.model().expect("witness");
    assert!(model.model.worlds.len() >= 2);
    assert!(eval(model, phi).unwrap());
}

#[test]
fn any_frames_find_introspection_failures() {
    let b = SearchBounds::new(2, 1, false);
    let v = find_countermodel(&f("K{?x} P(a) -> K{?x} K{?x} P(a)"), &b).unwrap();
    assert!(matches!(v, Verdict::Countermodel { .. }));
    let v = find_countermodel(&f("K{?x} P(a) -> K{?x} K{?x} P(a)"), &SearchBounds::new(3, 2, true)).unwrap();
    assert!(matches!(v, Verdict::NoCountermodelUpTo { .. }));
}

#[test]
fn parallel_scan_matches_sequential() {
    let b = SearchBounds::new(3, 3, true);
    for src in [
        "a = b -> (K{c} P(a) -> K{c} P(b))",
        "[?x := b] K{a} P(?x) -> K{a} [?x := b] P(?x)",
        "K{a} P(a) -> K{a} K{a} P(a)",
    ] {
        let phi = f(src);
        let seq = find_countermodel_with(&phi, &b, SearchOptions { jobs: 1 }).unwrap();
        let par = find_countermodel_with(&phi, &b, SearchOptions { jobs: 4 }).unwrap();
        assert_eq!(seq, par, "{src}");
        assert_eq!(find_countermodel(&phi, &b).unwrap(), seq);
    }
}

#[test]
fn bad_bounds_are_errors() {
    assert!(find_countermodel(&f("true"), &SearchBounds::new(0, 1, true)).is_err());
    assert!(find_countermodel(&f("true"), &SearchBounds::new(8, 1, false)).is_err());
    assert!(find_countermodel_with(&f("true"), &SearchBounds::new(1, 1, true), SearchOptions { jobs: 0 }).is_err());
}

#[test]
fn random_trials_find_failures_and_respect_validity() {
    let b = SearchBounds::new(4, 3, true).with_trials(500);
    assert!(random_countermodel(&f("K{?x} P(?x) -> K{?x} K{?x} P(?x)"), &b, 3)
        .unwrap()
        .is_none());
    let hit = random_countermodel(&f("K{a} P(a) -> K{a} K{a} P(a)"), &b, 3).unwrap();
    let model = hit.expect("random countermodel");
    assert!(!eval(&model, &f("K{a} P(a) -> K{a} K{a} P(a)")).unwrap());
}

#[test]
fn no_el_distinguisher_for_the_fixture_pair() {
    let (p1, p2) = fixtures::prop24_points();
    assert_eq!(el_distinguishes(&p1, &p2, 9).unwrap(), None);
}

#[test]
fn elas_distinguisher_for_the_fixture_pair() {
    let (p1, p2) = fixtures::prop24_points();
    let d = elas_distinguishes(&p1, &p2, 9).unwrap().expect("distinguisher");
    assert!(node_count(&d) <= node_count(&suites::prop24_formula()));
    assert_ne!(eval(&p1, &d).unwrap(), eval(&p2, &d).unwrap());
}

#[test]
fn identical_points_are_never_distinguished() {
    let (p1, _) = fixtures::prop24_points();
    assert_eq!(el_distinguishes(&p1, &p1, 9).unwrap(), None);
    assert_eq!(elas_distinguishes(&p1, &p1, 7).unwrap(), None);
}

#[test]
fn el_distinguisher_is_minimal_and_assignment_free() {
    // At s1 and s2 of the same model, P(a) already differs.
    let (p1, _) = fixtures::prop24_points();
    let mut p2 = p1.clone();
    p2.world = "s2".into();
    let d = el_distinguishes(&p1, &p2, 9).unwrap().unwrap();
    assert!(is_el_fragment(&d));
    assert_eq!(node_count(&d), 2);
    assert_eq!(el_distinguishes(&p1, &p2, 1).unwrap(), None);
}

#[test]
fn distinguisher_needs_a_shared_signature() {
    let (p1, _) = fixtures::prop24_points();
    let p2 = PointedModel::new(fixtures::crime(), "s0", VarAssignment::new());
    assert_eq!(el_distinguishes(&p1, &p2, 3), Err(DistinguishError::SignatureMismatch));
}
