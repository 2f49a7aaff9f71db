//! The distinguisher against exhaustive enumeration of small formulas.

use elas::gen::{random_model, seeded};
use elas::modelsearch::{el_distinguishes, elas_distinguishes};
use elas::semantics::{eval, PointedModel, Prepared, VarAssignment};
use elas::syntax::{is_el_fragment, node_count, Formula, Signature, Term};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const MAX: usize = 7;

fn signature() -> Signature {
    Signature {
        predicates: [("P".to_string(), 1)].into(),
        names: ["a".to_string()].into(),
        variables: Default::default(),
    }
}

/// All formulas of each size up to `MAX`, indexed by size.
fn all_formulas(with_assign: bool) -> Vec<Vec<Formula>> {
    let terms = [Term::name("a"), Term::var("x")];
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); MAX + 1];
    by_size[1] = vec![Formula::True, Formula::False];
    by_size[2] = terms.iter().map(|t| Formula::pred("P", vec![t.clone()])).collect();
    for l in &terms {
        for r in &terms {
            by_size[3].push(Formula::eq(l.clone(), r.clone()));
        }
    }
    for size in 2..=MAX {
        let mut next = Vec::new();
        for p in &by_size[size - 1] {
            next.push(Formula::not(p.clone()));
        }
        if size >= 3 {
            for p in &by_size[size - 2] {
                for t in &terms {
                    next.push(Formula::knows(t.clone(), p.clone()));
                    if with_assign {
                        next.push(Formula::assign("x", t.clone(), p.clone()));
                    }
                }
            }
        }
        for ls in 1..size.saturating_sub(1) {
            let rs = size - 1 - ls;
            for l in &by_size[ls] {
                for r in &by_size[rs] {
                    next.push(Formula::and(l.clone(), r.clone()));
                    next.push(Formula::or(l.clone(), r.clone()));
                    next.push(Formula::implies(l.clone(), r.clone()));
                    next.push(Formula::iff(l.clone(), r.clone()));
                }
            }
        }
        by_size[size].extend(next);
    }
    by_size
}

fn smallest(by_size: &[Vec<Formula>], p1: &PointedModel, p2: &PointedModel) -> Option<usize> {
    let (m1, m2) = (Prepared::new(&p1.model).unwrap(), Prepared::new(&p2.model).unwrap());
    (1..=MAX).find(|&s| {
        by_size[s]
            .iter()
            .any(|phi| m1.eval(&p1.world, &p1.sigma, phi).unwrap() != m2.eval(&p2.world, &p2.sigma, phi).unwrap())
    })
}

fn random_pairs(seed: u64, count: usize) -> Vec<(PointedModel, PointedModel)> {
    let mut rng = seeded(seed);
    let sig = signature();
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            let n1 = rng.gen_range(1..=2);
            let m1 = random_model(&mut rng, &sig, n1, k, true);
            let m2 = if rng.gen_bool(0.5) {
                m1.clone()
            } else {
                let n2 = rng.gen_range(1..=2);
                random_model(&mut rng, &sig, n2, k, true)
            };
            let point = |m: elas::semantics::KripkeModel, rng: &mut ChaCha8Rng| {
                let w = m.worlds[rng.gen_range(0..m.worlds.len())].clone();
                let x = m.agents[rng.gen_range(0..k)].clone();
                PointedModel::new(m, w, VarAssignment::from([("x", x.as_str())]))
            };
            let p1 = point(m1, &mut rng);
            let p2 = point(m2, &mut rng);
            (p1, p2)
        })
        .collect()
}

fn agrees_with_enumeration(with_assign: bool, seed: u64) {
    let by_size = all_formulas(with_assign);
    let search = if with_assign {
        elas_distinguishes
    } else {
        el_distinguishes
    };
    let mut hits = 0;
    for (p1, p2) in random_pairs(seed, 150) {
        let expected = smallest(&by_size, &p1, &p2);
        let found = search(&p1, &p2, MAX).unwrap();
        if let Some(d) = &found {
            hits += 1;
            assert_ne!(eval(&p1, d).unwrap(), eval(&p2, d).unwrap(), "{d}");
            assert!(with_assign || is_el_fragment(d));
        }
        assert_eq!(found.as_ref().map(node_count), expected, "{p1:?} {p2:?}");
    }
    assert!(hits > 20 && hits < 150, "{hits} distinguished pairs");
}

#[test]
fn el_search_matches_enumeration() {
    agrees_with_enumeration(false, 31);
}

#[test]
fn elas_search_matches_enumeration() {
    agrees_with_enumeration(true, 32);
}
