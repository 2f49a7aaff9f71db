//! Seeded random formulas, models and assignments.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::modelsearch::set_partitions;
use crate::semantics::{KripkeModel, VarAssignment};
use crate::syntax::{Formula, Signature, Term};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vocabulary and shape limits for random formulas.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub preds: Vec<(String, usize)>,
    pub names: Vec<String>,
    pub vars: Vec<String>,
    /// Maximum height of the syntax tree (atoms have height 0).
    pub max_depth: usize,
    pub allow_assign: bool,
}

impl FormulaGen {
    /// `P/1`, `R/2`, names `a b c`, variables `x y z`.
    pub fn standard(max_depth: usize) -> FormulaGen {
        FormulaGen {
            preds: vec![("P".into(), 1), ("R".into(), 2)],
            names: vec!["a".into(), "b".into(), "c".into()],
            vars: vec!["x".into(), "y".into(), "z".into()],
            max_depth,
            allow_assign: true,
        }
    }

    pub fn signature(&self) -> Signature {
        Signature {
            predicates: self.preds.iter().cloned().collect(),
            names: self.names.iter().cloned().collect(),
            variables: self.vars.iter().cloned().collect(),
        }
    }

    pub fn term<R: Rng>(&self, rng: &mut R) -> Term {
        let total = self.names.len() + self.vars.len();
        let i = rng.gen_range(0..total);
        if i < self.names.len() {
            Term::Name(self.names[i].clone())
        } else {
            Term::Var(self.vars[i - self.names.len()].clone())
        }
    }

    pub fn var<R: Rng>(&self, rng: &mut R) -> String {
        self.vars.choose(rng).expect("at least one variable").clone()
    }

    pub fn atom<R: Rng>(&self, rng: &mut R) -> Formula {
        let roll = rng.gen_range(0..10);
        if roll == 0 {
            return if rng.gen() { Formula::True } else { Formula::False };
        }
        if roll <= 3 || self.preds.is_empty() {
            return Formula::Eq(self.term(rng), self.term(rng));
        }
        let (p, arity) = self.preds.choose(rng).unwrap();
        Formula::Pred(p.clone(), (0..*arity).map(|_| self.term(rng)).collect())
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Formula {
        self.sample_depth(rng, self.max_depth)
    }

    pub fn sample_depth<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        if depth == 0 || rng.gen_range(0..5) == 0 {
            return self.atom(rng);
        }
        let d = depth - 1;
        let kinds = if self.allow_assign { 8 } else { 7 };
        match rng.gen_range(0..kinds) {
            0 => Formula::not(self.sample_depth(rng, d)),
            1 => Formula::and(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            2 => Formula::or(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            3 => Formula::implies(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            4 => Formula::iff(self.sample_depth(rng, d), self.sample_depth(rng, d)),
            5 | 6 => Formula::knows(self.term(rng), self.sample_depth(rng, d)),
            _ => Formula::assign(self.var(rng), self.term(rng), self.sample_depth(rng, d)),
        }
    }
}

pub fn world_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("w{i}")).collect()
}

pub fn agent_labels(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("i{i}")).collect()
}

/// A uniformly chosen partition of `0..n`, as block labels.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    set_partitions(n).choose(rng).unwrap().clone()
}

/// A random model over `sig` with `n` worlds and `k` agents. With
/// `epistemic`, each relation is a uniformly chosen equivalence; otherwise
/// every pair is present with probability one half.
pub fn random_model<R: Rng>(rng: &mut R, sig: &Signature, n: usize, k: usize, epistemic: bool) -> KripkeModel {
    let worlds = world_labels(n);
    let agents = agent_labels(k);
    let mut relations = BTreeMap::new();
    for agent in &agents {
        let mut pairs = BTreeSet::new();
        if epistemic {
            let blocks = random_partition(rng, n);
            for w in 0..n {
                for v in 0..n {
                    if blocks[w] == blocks[v] {
                        pairs.insert((worlds[w].clone(), worlds[v].clone()));
                    }
                }
            }
        } else {
            for w in &worlds {
                for v in &worlds {
                    if rng.gen() {
                        pairs.insert((w.clone(), v.clone()));
                    }
                }
            }
        }
        relations.insert(agent.clone(), pairs);
    }
    let mut rho = BTreeMap::new();
    for (pred, &arity) in &sig.predicates {
        let mut by_world = BTreeMap::new();
        for w in &worlds {
            let tuples: BTreeSet<Vec<String>> = all_tuples(&agents, arity).into_iter().filter(|_| rng.gen()).collect();
            by_world.insert(w.clone(), tuples);
        }
        rho.insert(pred.clone(), by_world);
    }
    let mut eta = BTreeMap::new();
    for name in &sig.names {
        let by_world = worlds
            .iter()
            .map(|w| (w.clone(), agents.choose(rng).unwrap().clone()))
            .collect();
        eta.insert(name.clone(), by_world);
    }
    KripkeModel {
        worlds,
        agents,
        relations,
        rho,
        eta,
        signature: Signature {
            predicates: sig.predicates.clone(),
            names: sig.names.clone(),
            variables: BTreeSet::new(),
        },
        epistemic,
    }
}

/// All tuples of the given length over `agents`, lexicographically.
pub fn all_tuples(agents: &[String], arity: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                agents.iter().map(move |a| {
                    let mut t = t.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    out
}

pub fn random_sigma<R: Rng>(rng: &mut R, vars: impl IntoIterator<Item = String>, agents: &[String]) -> VarAssignment {
    let mut s = VarAssignment::new();
    for v in vars {
        s.insert(v, agents.choose(rng).unwrap().clone());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{is_epistemic, validate_model};

    #[test]
    fn generated_models_are_valid() {
        let mut rng = seeded(1);
        let g = FormulaGen::standard(3);
        let sig = g.signature();
        for i in 0..200 {
            let n = 1 + i % 4;
            let k = 1 + i % 3;
            let epistemic = i % 2 == 0;
            let m = random_model(&mut rng, &sig, n, k, epistemic);
            assert_eq!(validate_model(&m), vec![]);
            if epistemic {
                assert!(is_epistemic(&m));
            }
        }
    }

    #[test]
    fn formulas_respect_depth_and_vocabulary() {
        let mut rng = seeded(2);
        let mut g = FormulaGen::standard(4);
        for _ in 0..500 {
            let f = g.sample(&mut rng);
            assert!(height(&f) <= 4);
        }
        g.allow_assign = false;
        for _ in 0..200 {
            assert!(crate::syntax::is_el_fragment(&g.sample(&mut rng)));
        }
    }

    fn height(f: &Formula) -> usize {
        match f {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Pred(..) => 0,
            Formula::Not(p) | Formula::Knows(_, p) | Formula::Assign(_, _, p) => 1 + height(p),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                1 + height(l).max(height(r))
            }
        }
    }

    #[test]
    fn tuples_are_lexicographic() {
        let ag = agent_labels(2);
        assert_eq!(
            all_tuples(&ag, 2),
            vec![
                vec!["i1".to_string(), "i1".to_string()],
                vec!["i1".to_string(), "i2".to_string()],
                vec!["i2".to_string(), "i1".to_string()],
                vec!["i2".to_string(), "i2".to_string()],
            ]
        );
        assert_eq!(all_tuples(&ag, 0), vec![Vec::<String>::new()]);
    }
}
