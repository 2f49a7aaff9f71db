//! Strategies, a reference evaluator and the seeded property suites shared by
//! the property tests and the acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeMap;

use elas::gen::{random_model, seeded};
use elas::semantics::{KripkeModel, Prepared, VarAssignment};
use elas::syntax::{
    free_vars, fresh_var, parse_formula, print_formula, reletter, substitute, Formula, Signature, Term,
};
use elas::translation::{fol_eval, induce_structure, translate, translate_universal, valuation_for};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub const VARS: [&str; 4] = ["x", "y", "z", "w"];
pub const NAMES: [&str; 3] = ["a", "b", "c"];

pub fn signature() -> Signature {
    Signature {
        predicates: [("P".to_string(), 1), ("R".to_string(), 2), ("Q".to_string(), 0)].into(),
        names: NAMES.iter().map(|n| n.to_string()).collect(),
        variables: Default::default(),
    }
}

pub fn arb_var() -> impl Strategy<Value = String> {
    prop::sample::select(&VARS[..]).prop_map(str::to_owned)
}

pub fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        arb_var().prop_map(Term::Var),
        prop::sample::select(&NAMES[..]).prop_map(Term::name),
    ]
}

/// Formulas over `P/1`, `R/2`, `Q/0` covering every constructor.
pub fn arb_formula(depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (arb_term(), arb_term()).prop_map(|(l, r)| Formula::eq(l, r)),
        arb_term().prop_map(|t| Formula::pred("P", vec![t])),
        (arb_term(), arb_term()).prop_map(|(l, r)| Formula::pred("R", vec![l, r])),
        Just(Formula::pred("Q", vec![])),
    ];
    leaf.prop_recursive(depth, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::iff(l, r)),
            (arb_term(), inner.clone()).prop_map(|(t, p)| Formula::knows(t, p)),
            (arb_var(), arb_term(), inner).prop_map(|(x, t, p)| Formula::assign(x, t, p)),
        ]
    })
    .boxed()
}

/// A model with at most three worlds and agents, a world, and an assignment
/// to every variable in [`VARS`].
#[derive(Clone, Debug)]
pub struct Point {
    pub model: KripkeModel,
    pub world: String,
    pub sigma: VarAssignment,
}

pub fn arb_point() -> impl Strategy<Value = Point> {
    (1usize..=3, 1usize..=3, any::<bool>(), any::<u64>(), any::<u64>()).prop_map(|(n, k, epistemic, seed, pick)| {
        let model = random_model(&mut seeded(seed), &signature(), n, k, epistemic);
        let world = model.worlds[(pick % n as u64) as usize].clone();
        let mut sigma = VarAssignment::new();
        let mut p = pick / n as u64;
        for v in VARS {
            sigma.insert(v, model.agents[(p % k as u64) as usize].clone());
            p /= k as u64;
        }
        Point { model, world, sigma }
    })
}

pub fn eval(p: &Point, phi: &Formula) -> bool {
    Prepared::new(&p.model).unwrap().eval(&p.world, &p.sigma, phi).unwrap()
}

/// Direct transcription of the truth conditions over the labelled model.
pub fn eval_ref(m: &KripkeModel, w: &str, sigma: &BTreeMap<String, String>, phi: &Formula) -> bool {
    let den = |t: &Term, w: &str| -> String {
        match t {
            Term::Var(v) => sigma[v].clone(),
            Term::Name(n) => m.eta[n][w].clone(),
        }
    };
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(l, r) => den(l, w) == den(r, w),
        Formula::Pred(p, args) => {
            let tuple: Vec<String> = args.iter().map(|t| den(t, w)).collect();
            m.rho
                .get(p)
                .and_then(|by| by.get(w))
                .is_some_and(|ts| ts.contains(&tuple))
        }
        Formula::Not(p) => !eval_ref(m, w, sigma, p),
        Formula::And(l, r) => eval_ref(m, w, sigma, l) && eval_ref(m, w, sigma, r),
        Formula::Or(l, r) => eval_ref(m, w, sigma, l) || eval_ref(m, w, sigma, r),
        Formula::Implies(l, r) => !eval_ref(m, w, sigma, l) || eval_ref(m, w, sigma, r),
        Formula::Iff(l, r) => eval_ref(m, w, sigma, l) == eval_ref(m, w, sigma, r),
        Formula::Knows(t, p) => {
            let agent = den(t, w);
            m.worlds
                .iter()
                .all(|v| !m.relations[&agent].contains(&(w.to_string(), v.clone())) || eval_ref(m, v, sigma, p))
        }
        Formula::Assign(x, t, p) => {
            let mut s2 = sigma.clone();
            s2.insert(x.clone(), den(t, w));
            eval_ref(m, w, &s2, p)
        }
    }
}

fn sigma_map(s: &VarAssignment) -> BTreeMap<String, String> {
    s.iter().map(|(v, a)| (v.to_string(), a.to_string())).collect()
}

/// Outcome of one seeded property run.
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u32,
    pub outcome: Result<(), String>,
}

pub fn runner(cases: u32, seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(
    name: &'static str,
    cases: u32,
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> SuiteResult {
    let outcome = runner(cases, seed).run(&strategy, test).map_err(|e| e.to_string());
    SuiteResult { name, cases, outcome }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn round_trip(cases: u32, seed: u64) -> SuiteResult {
    run("round trip", cases, seed, arb_formula(5), |phi| {
        let text = print_formula(&phi);
        let back = parse_formula(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        check(back == phi, || format!("{text} reparsed as {back:?}"))
    })
}

pub fn fv_coherence(cases: u32, seed: u64) -> SuiteResult {
    run(
        "free variables of substitution",
        cases,
        seed,
        (arb_formula(4), arb_var(), arb_var()),
        |(phi, y, x)| {
            let fv = free_vars(&phi);
            if !fv.contains(&x) {
                return Ok(());
            }
            let Ok(s) = substitute(&phi, &y, &x) else {
                return Ok(());
            };
            let mut expected = fv.clone();
            expected.remove(&x);
            expected.insert(y.clone());
            check(free_vars(&s) == expected, || format!("{phi} [?{y}/?{x}]"))
        },
    )
}

pub fn reletter_free_vars(cases: u32, seed: u64) -> SuiteResult {
    run(
        "reletter keeps free variables",
        cases,
        seed,
        (arb_var(), arb_term(), arb_formula(4)),
        |(x, t, body)| {
            let phi = Formula::assign(&x, t, body);
            let z = fresh_var(&phi.all_vars());
            let r = reletter(&phi, &z).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(free_vars(&r) == free_vars(&phi), || format!("{phi}"))
        },
    )
}

pub fn self_duality(cases: u32, seed: u64) -> SuiteResult {
    run(
        "assignment self-duality",
        cases,
        seed,
        (arb_point(), arb_var(), arb_term(), arb_formula(4)),
        |(p, x, t, phi)| {
            let boxed = Formula::assign(&x, t.clone(), phi.clone());
            let diamond = Formula::assign_dual(&x, t, phi);
            check(eval(&p, &boxed) == eval(&p, &diamond), || format!("{boxed}"))
        },
    )
}

pub fn substitution_lemma(cases: u32, seed: u64) -> SuiteResult {
    run(
        "substitution lemma",
        cases,
        seed,
        (arb_point(), arb_formula(4), arb_var(), arb_var()),
        |(p, phi, y, x)| {
            let Ok(s) = substitute(&phi, &y, &x) else {
                return Ok(());
            };
            let moved = Point {
                sigma: p.sigma.with(&x, p.sigma.get(&y).unwrap()),
                ..p.clone()
            };
            check(eval(&p, &s) == eval(&moved, &phi), || format!("{phi} [?{y}/?{x}]"))
        },
    )
}

pub fn sigma_irrelevance(cases: u32, seed: u64) -> SuiteResult {
    run(
        "assignment irrelevance",
        cases,
        seed,
        (arb_point(), arb_formula(4), any::<u64>()),
        |(p, phi, pick)| {
            let fv = free_vars(&phi);
            let mut changed = p.clone();
            let k = p.model.agents.len() as u64;
            let mut c = pick;
            for v in VARS.iter().filter(|v| !fv.contains(**v)) {
                changed.sigma.insert(*v, p.model.agents[(c % k) as usize].clone());
                c /= k;
            }
            check(eval(&p, &phi) == eval(&changed, &phi), || format!("{phi}"))
        },
    )
}

pub fn reletter_invariance(cases: u32, seed: u64) -> SuiteResult {
    run(
        "relettering invariance",
        cases,
        seed,
        (arb_point(), arb_var(), arb_term(), arb_formula(4)),
        |(p, x, t, body)| {
            let phi = Formula::assign(&x, t, body);
            let z = fresh_var(&phi.all_vars());
            let r = reletter(&phi, &z).map_err(|e| TestCaseError::fail(e.to_string()))?;
            check(eval(&p, &phi) == eval(&p, &r), || format!("{phi} vs {r}"))
        },
    )
}

pub fn boolean_sanity(cases: u32, seed: u64) -> SuiteResult {
    run(
        "Boolean connectives",
        cases,
        seed,
        (arb_point(), arb_formula(3), arb_formula(3)),
        |(p, l, r)| {
            let (a, b) = (eval(&p, &l), eval(&p, &r));
            check(
                eval(&p, &Formula::not(l.clone())) == !a
                    && eval(&p, &Formula::and(l.clone(), r.clone())) == (a && b)
                    && eval(&p, &Formula::or(l.clone(), r.clone())) == (a || b)
                    && eval(&p, &Formula::implies(l.clone(), r.clone())) == (!a || b)
                    && eval(&p, &Formula::iff(l.clone(), r.clone())) == (a == b),
                || format!("{l} / {r}"),
            )
        },
    )
}

pub fn kernel_matches_reference(cases: u32, seed: u64) -> SuiteResult {
    run(
        "kernel vs reference evaluator",
        cases,
        seed,
        (arb_point(), arb_formula(5)),
        |(p, phi)| {
            let expected = eval_ref(&p.model, &p.world, &sigma_map(&p.sigma), &phi);
            check(eval(&p, &phi) == expected, || format!("{phi}"))
        },
    )
}

pub fn translation_agreement(cases: u32, seed: u64) -> SuiteResult {
    run(
        "translation agreement",
        cases,
        seed,
        (arb_point(), arb_formula(4)),
        |(p, phi)| {
            let expected = eval(&p, &phi);
            let s = induce_structure(&p.model);
            let val = valuation_for("u", &p.world, &p.sigma);
            let ex = fol_eval(&s, &val, &translate(&phi, "u"));
            let un = fol_eval(&s, &val, &translate_universal(&phi, "u"));
            check(ex == Ok(expected) && un == Ok(expected), || {
                format!("{phi}: {ex:?} {un:?}")
            })
        },
    )
}
