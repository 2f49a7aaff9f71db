//! Randomised soundness check of the axiom schemas.
//!
//! Each trial draws an axiom instance (side conditions respected) and a random
//! model, and evaluates the instance at every world under every assignment to
//! its free variables. Tx, 4x and 5x are evaluated on epistemic models only;
//! every other schema also on a model with arbitrary relations.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::gen::{random_model, seeded, FormulaGen};
use crate::modelsearch::{random_countermodel, SearchBounds, SearchError};
use crate::semantics::{KripkeModel, PointedModel, Prepared, SemanticsError, VarAssignment};
use crate::syntax::{free_vars, Formula, Term};

use super::axioms::{random_instance, AxiomId};

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub formula: String,
    pub model: PointedModel,
}

/// A countermodel that is expected to exist: an introspection schema on
/// arbitrary frames, or its name-indexed variant on epistemic frames.
#[derive(Clone, Debug, Serialize)]
pub struct Exhibit {
    pub axiom: String,
    pub formula: String,
    pub frames: &'static str,
    pub model: Option<PointedModel>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub trials: usize,
    pub seed: u64,
    /// Instances drawn per axiom.
    pub instances: BTreeMap<String, usize>,
    /// Pointed evaluations performed.
    pub evaluations: u64,
    pub violations: Vec<Violation>,
    pub exhibits: Vec<Exhibit>,
    pub passed: bool,
}

impl SoundnessReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "soundness: {} instances, {} evaluations, {} violations (seed {})\n",
            self.trials,
            self.evaluations,
            self.violations.len(),
            self.seed
        );
        for (ax, n) in &self.instances {
            out.push_str(&format!("  {ax:<7} {n} instances\n"));
        }
        for v in &self.violations {
            out.push_str(&format!(
                "  VIOLATION {}: {} at {} {{{}}}\n",
                v.axiom, v.formula, v.model.world, v.model.sigma
            ));
        }
        for e in &self.exhibits {
            match &e.model {
                Some(m) => out.push_str(&format!(
                    "  expected failure of {} on {} frames: {} fails at {} {{{}}}\n",
                    e.axiom, e.frames, e.formula, m.world, m.sigma
                )),
                None => out.push_str(&format!(
                    "  MISSING expected failure of {} on {} frames\n",
                    e.axiom, e.frames
                )),
            }
        }
        out.push_str(if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

/// The instance vocabulary: one unary and one binary predicate, three names,
/// three variables, nesting depth at most 2 below the schema.
pub fn instance_gen() -> FormulaGen {
    FormulaGen::standard(2)
}

/// First point of `m` (world, then assignments in lexicographic order) at
/// which `phi` is false.
pub fn first_failure(m: &KripkeModel, phi: &Formula) -> Result<Option<PointedModel>, SemanticsError> {
    let prepared = Prepared::new(m)?;
    let vars: Vec<String> = free_vars(phi).into_iter().collect();
    let k = m.agents.len();
    let total = k.pow(vars.len() as u32);
    for w in &m.worlds {
        for code in 0..total {
            let mut sigma = VarAssignment::new();
            let mut c = code;
            for v in vars.iter().rev() {
                sigma.insert(v.clone(), m.agents[c % k].clone());
                c /= k;
            }
            if !prepared.eval(w, &sigma, phi)? {
                return Ok(Some(PointedModel::new(m.clone(), w.clone(), sigma)));
            }
        }
    }
    Ok(None)
}

pub fn soundness_suite(trials: usize, seed: u64) -> Result<SoundnessReport, SearchError> {
    let g = instance_gen();
    let sig = g.signature();
    let mut rng = seeded(seed);
    let mut instances = BTreeMap::new();
    let mut violations = Vec::new();
    let mut evaluations = 0u64;
    for i in 0..trials {
        let id = AxiomId::ALL[i % AxiomId::ALL.len()];
        let phi = random_instance(id, &g, &mut rng);
        *instances.entry(id.to_string()).or_insert(0) += 1;
        let frames: &[bool] = if id.needs_epistemic_frames() {
            &[true]
        } else {
            &[true, false]
        };
        for &epistemic in frames {
            let n = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=3);
            let m = random_model(&mut rng, &sig, n, k, epistemic);
            evaluations += (n * k.pow(free_vars(&phi).len() as u32)) as u64;
            if let Some(model) = first_failure(&m, &phi)? {
                violations.push(Violation {
                    axiom: id.to_string(),
                    formula: phi.to_string(),
                    model,
                });
            }
        }
    }
    let exhibits = expected_failures(seed)?;
    let passed = violations.is_empty() && exhibits.iter().all(|e| e.model.is_some());
    Ok(SoundnessReport {
        trials,
        seed,
        instances,
        evaluations,
        violations,
        exhibits,
        passed,
    })
}

/// 4x and 5x instances failing on arbitrary frames, with variable and with
/// name indices, and name-indexed variants failing on epistemic frames.
fn expected_failures(seed: u64) -> Result<Vec<Exhibit>, SearchError> {
    let g = instance_gen();
    let mut rng = seeded(seed ^ 0x45);
    let mut out = Vec::new();
    for id in [AxiomId::FourX, AxiomId::FiveX] {
        for (frames, epistemic, named) in [
            ("arbitrary", false, false),
            ("arbitrary", false, true),
            ("epistemic", true, true),
        ] {
            let bounds = SearchBounds::new(3, 2, epistemic).with_trials(200);
            let mut found = None;
            for attempt in 0..50 {
                let phi = g.sample_depth(&mut rng, 1);
                let t = if named {
                    g.names.first().map(|n| Term::name(n.clone())).expect("a name")
                } else {
                    Term::var(g.var(&mut rng))
                };
                let candidate = introspection(id, t, phi);
                if let Some(model) = random_countermodel(&candidate, &bounds, seed.wrapping_add(attempt))? {
                    found = Some((candidate, model));
                    break;
                }
            }
            out.push(Exhibit {
                axiom: if named {
                    format!("{id} with a name index")
                } else {
                    id.to_string()
                },
                formula: found.as_ref().map(|(f, _)| f.to_string()).unwrap_or_default(),
                frames,
                model: found.map(|(_, m)| m),
            });
        }
    }
    Ok(out)
}

fn introspection(id: AxiomId, t: Term, phi: Formula) -> Formula {
    match id {
        AxiomId::FourX => {
            let k = Formula::knows(t.clone(), phi);
            Formula::implies(k.clone(), Formula::knows(t, k))
        }
        AxiomId::FiveX => {
            let nk = Formula::not(Formula::knows(t.clone(), phi));
            Formula::implies(nk.clone(), Formula::knows(t, nk))
        }
        _ => unreachable!("only introspection schemas"),
    }
}
