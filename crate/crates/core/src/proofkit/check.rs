use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{free_vars, print_formula, Formula, Term};

use super::axioms::{match_axiom, not_free};
use super::bundled::lemma_goal;
use super::script::{Justification, LemmaBinding, ProofScript, ProofStep};
use super::taut::check_taut;
use super::ProofError;

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepFailure {
    #[error("no step {index} in the script")]
    NoSuchStep { index: usize },
    #[error("step {cited} is not an earlier step")]
    MissingPremise { cited: usize },
    #[error("not an instance of {axiom}")]
    NotAxiomInstance { axiom: String },
    #[error("not a propositional tautology")]
    NotTautology,
    #[error("{atoms} propositional atoms exceed the budget of {budget}")]
    AtomBudget { atoms: usize, budget: usize },
    #[error("{rule}: expected `{expected}`, found `{actual}`")]
    Shape {
        rule: String,
        expected: String,
        actual: String,
    },
    #[error("{rule}: ?{var} occurs free in `{formula}`")]
    SideCondition { rule: String, var: String, formula: String },
    #[error("no bundled theorem named `{name}`")]
    UnknownLemma { name: String },
    #[error("binding `{binding}`: {reason}")]
    Binding { binding: String, reason: String },
    #[error("cnecas expansion, step {step}: {reason}")]
    Expansion { step: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub formula: String,
    pub justification: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<StepFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub goal: String,
    pub accepted: bool,
    pub goal_matches: bool,
    pub steps: Vec<StepReport>,
}

impl ProofReport {
    /// Index of the first rejected step.
    pub fn first_failure(&self) -> Option<usize> {
        self.steps.iter().find(|s| !s.ok).map(|s| s.index)
    }
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "goal: {}", self.goal)?;
        for s in &self.steps {
            match &s.failure {
                None => writeln!(f, "{:>4}. OK    {} ; {}", s.index, s.formula, s.justification)?,
                Some(e) => writeln!(
                    f,
                    "{:>4}. FAIL  {} ; {}\n      {e}",
                    s.index, s.formula, s.justification
                )?,
            }
        }
        if !self.goal_matches {
            writeln!(f, "the last step does not match the goal")?;
        }
        write!(
            f,
            "{}",
            if self.accepted {
                "proof accepted"
            } else {
                "proof rejected"
            }
        )
    }
}

fn shape(rule: impl Into<String>, expected: &Formula, actual: &Formula) -> StepFailure {
    StepFailure::Shape {
        rule: rule.into(),
        expected: print_formula(expected),
        actual: print_formula(actual),
    }
}

/// Checks the step labelled `k` against the steps before it.
pub fn check_step(script: &ProofScript, k: usize) -> Result<(), StepFailure> {
    let pos = script
        .steps
        .iter()
        .position(|s| s.index == k)
        .ok_or(StepFailure::NoSuchStep { index: k })?;
    let earlier: BTreeMap<usize, &Formula> = script.steps[..pos].iter().map(|s| (s.index, &s.formula)).collect();
    let step = &script.steps[pos];
    validate(&earlier, &step.formula, &step.justification)
}

pub fn check_proof(script: &ProofScript) -> ProofReport {
    let mut earlier: BTreeMap<usize, &Formula> = BTreeMap::new();
    let mut steps = Vec::new();
    for s in &script.steps {
        let failure = validate(&earlier, &s.formula, &s.justification).err();
        steps.push(StepReport {
            index: s.index,
            formula: print_formula(&s.formula),
            justification: s.justification.to_string(),
            ok: failure.is_none(),
            failure,
        });
        earlier.insert(s.index, &s.formula);
    }
    let goal_matches = script.steps.last().is_some_and(|s| s.formula == script.goal);
    ProofReport {
        goal: print_formula(&script.goal),
        accepted: goal_matches && steps.iter().all(|s| s.ok),
        goal_matches,
        steps,
    }
}

fn validate(earlier: &BTreeMap<usize, &Formula>, phi: &Formula, just: &Justification) -> Result<(), StepFailure> {
    let get = |i: usize| -> Result<&Formula, StepFailure> {
        earlier.get(&i).copied().ok_or(StepFailure::MissingPremise { cited: i })
    };
    match just {
        Justification::Axiom(id) => match match_axiom(*id, phi) {
            Some(_) => Ok(()),
            None => Err(StepFailure::NotAxiomInstance { axiom: id.to_string() }),
        },
        Justification::Taut => match check_taut(phi) {
            Ok(true) => Ok(()),
            Ok(false) => Err(StepFailure::NotTautology),
            Err(ProofError::AtomBudget { atoms, budget }) => Err(StepFailure::AtomBudget { atoms, budget }),
            Err(e) => unreachable!("{e}"),
        },
        Justification::Mp(i, j) => {
            let (a, imp) = (get(*i)?, get(*j)?);
            let expected = Formula::implies(a.clone(), phi.clone());
            if *imp == expected {
                Ok(())
            } else {
                Err(shape(format!("mp: step {j}"), &expected, imp))
            }
        }
        Justification::NecK(i, t) => {
            let expected = Formula::knows(t.clone(), get(*i)?.clone());
            if *phi == expected {
                Ok(())
            } else {
                Err(shape("neck", &expected, phi))
            }
        }
        Justification::NecAs(i, x, t) => {
            let (a, b) = implication("necas", get(*i)?)?;
            let expected = Formula::implies(a.clone(), Formula::assign(x, t.clone(), b.clone()));
            if *phi != expected {
                return Err(shape("necas", &expected, phi));
            }
            side_condition("necas", x, a)
        }
        Justification::Cnecas(i, x, t) => {
            let premise = get(*i)?;
            let (a, b) = implication("cnecas", premise)?;
            let expected = Formula::implies(Formula::assign(x, t.clone(), a.clone()), b.clone());
            if *phi != expected {
                return Err(shape("cnecas", &expected, phi));
            }
            side_condition("cnecas", x, b)?;
            let expansion = cnecas_expansion(premise, x, t);
            let mut table: BTreeMap<usize, &Formula> = BTreeMap::new();
            table.insert(1, premise);
            for s in &expansion {
                validate(&table, &s.formula, &s.justification).map_err(|e| StepFailure::Expansion {
                    step: s.index,
                    reason: e.to_string(),
                })?;
                table.insert(s.index, &s.formula);
            }
            debug_assert_eq!(expansion.last().map(|s| &s.formula), Some(phi));
            Ok(())
        }
        Justification::Lemma(name, bindings) => {
            let goal = lemma_goal(name).ok_or_else(|| StepFailure::UnknownLemma { name: name.clone() })?;
            let expected = instantiate(&goal, bindings)?;
            if *phi == expected {
                Ok(())
            } else {
                Err(shape(format!("lemma {name}"), &expected, phi))
            }
        }
    }
}

fn implication<'a>(rule: &str, phi: &'a Formula) -> Result<(&'a Formula, &'a Formula), StepFailure> {
    match phi {
        Formula::Implies(a, b) => Ok((a, b)),
        _ => Err(StepFailure::Shape {
            rule: format!("{rule} premise"),
            expected: "A -> B".into(),
            actual: print_formula(phi),
        }),
    }
}

fn side_condition(rule: &str, x: &str, phi: &Formula) -> Result<(), StepFailure> {
    if not_free(x, phi) {
        Ok(())
    } else {
        Err(StepFailure::SideCondition {
            rule: rule.into(),
            var: x.into(),
            formula: print_formula(phi),
        })
    }
}

/// Steps 2..8 deriving `[?x := t] A -> B` from step 1, `A -> B`: contrapose,
/// apply NECAS, and turn `[?x := t] ~A` into `~[?x := t] A` with DBASEQ.
fn cnecas_expansion(premise: &Formula, x: &str, t: &Term) -> Vec<ProofStep> {
    let Formula::Implies(a, b) = premise else {
        unreachable!("checked by the caller")
    };
    let (a, b) = (&**a, &**b);
    let contra = Formula::implies(Formula::not(b.clone()), Formula::not(a.clone()));
    let nec = Formula::implies(
        Formula::not(b.clone()),
        Formula::assign(x, t.clone(), Formula::not(a.clone())),
    );
    let dbaseq = Formula::iff(
        Formula::assign_dual(x, t.clone(), a.clone()),
        Formula::assign(x, t.clone(), a.clone()),
    );
    let goal = Formula::implies(Formula::assign(x, t.clone(), a.clone()), b.clone());
    let mut bindings = Vec::new();
    if x != "x" {
        bindings.push(LemmaBinding::Var {
            from: "x".into(),
            to: x.into(),
        });
    }
    bindings.push(LemmaBinding::Name {
        from: "a".into(),
        to: t.clone(),
    });
    bindings.push(LemmaBinding::Pred {
        atom: Formula::pred("P", vec![Term::var(x)]),
        with: a.clone(),
    });
    let step = |index, formula, justification| ProofStep {
        index,
        formula,
        justification,
    };
    vec![
        step(
            2,
            Formula::implies(premise.clone(), contra.clone()),
            Justification::Taut,
        ),
        step(3, contra, Justification::Mp(1, 2)),
        step(4, nec.clone(), Justification::NecAs(3, x.into(), t.clone())),
        step(5, dbaseq.clone(), Justification::Lemma("DBASEQ".into(), bindings)),
        step(
            6,
            Formula::implies(nec, Formula::implies(dbaseq.clone(), goal.clone())),
            Justification::Taut,
        ),
        step(7, Formula::implies(dbaseq, goal.clone()), Justification::Mp(4, 6)),
        step(8, goal, Justification::Mp(5, 7)),
    ]
}

fn binding_error(b: &LemmaBinding, reason: impl Into<String>) -> StepFailure {
    StepFailure::Binding {
        binding: b.to_string(),
        reason: reason.into(),
    }
}

/// Applies lemma bindings in order.
///
/// Variable renaming requires a target absent from the formula. A name may
/// only become a variable where no binder of that variable is in scope. An
/// atom replacement must cover every occurrence of its predicate, and the
/// replacement's free variables other than the atom's own must not be
/// captured.
pub fn instantiate(phi: &Formula, bindings: &[LemmaBinding]) -> Result<Formula, StepFailure> {
    let mut out = phi.clone();
    for b in bindings {
        out = apply_binding(&out, b, &out.all_vars())?;
    }
    Ok(out)
}

/// `avoid` is the set a renamed variable must be fresh for.
fn apply_binding(phi: &Formula, b: &LemmaBinding, avoid: &BTreeSet<String>) -> Result<Formula, StepFailure> {
    match b {
        LemmaBinding::Var { from, to } => {
            if from == to {
                return Ok(phi.clone());
            }
            if avoid.contains(to) {
                return Err(binding_error(b, format!("?{to} already occurs")));
            }
            Ok(map_formula(
                phi,
                &mut Vec::new(),
                &mut |f, _| match f {
                    Formula::Assign(x, t, body) if x == from => Some(Ok(Formula::assign(
                        to.clone(),
                        rename_term(t, from, to),
                        rename_all(body, from, to),
                    ))),
                    _ => None,
                },
                &mut |t, _| Ok(rename_term(t, from, to)),
            )?)
        }
        LemmaBinding::Name { from, to } => {
            map_formula(phi, &mut Vec::new(), &mut |_, _| None, &mut |t, scope| match t {
                Term::Name(n) if n == from => match to {
                    Term::Var(v) if scope.contains(v) => Err(binding_error(b, format!("?{v} would be captured"))),
                    _ => Ok(to.clone()),
                },
                _ => Ok(t.clone()),
            })
        }
        LemmaBinding::Pred { atom, with } => {
            let Formula::Pred(p, args) = atom else {
                return Err(binding_error(b, "left side is not an atom"));
            };
            let own: BTreeSet<&str> = args.iter().filter_map(Term::as_var).collect();
            let outside: Vec<String> = free_vars(with)
                .into_iter()
                .filter(|v| !own.contains(v.as_str()))
                .collect();
            map_formula(
                phi,
                &mut Vec::new(),
                &mut |f, scope| match f {
                    Formula::Pred(q, _) if q == p => Some(if f != atom {
                        Err(binding_error(b, format!("occurrence `{}` differs", print_formula(f))))
                    } else if let Some(v) = outside.iter().find(|v| scope.contains(v)) {
                        Err(binding_error(b, format!("?{v} would be captured")))
                    } else {
                        Ok(with.clone())
                    }),
                    _ => None,
                },
                &mut |t, _| Ok(t.clone()),
            )
        }
    }
}

fn rename_term(t: &Term, from: &str, to: &str) -> Term {
    match t {
        Term::Var(v) if v == from => Term::var(to),
        _ => t.clone(),
    }
}

fn rename_all(phi: &Formula, from: &str, to: &str) -> Formula {
    let b = LemmaBinding::Var {
        from: from.into(),
        to: to.into(),
    };
    apply_binding(phi, &b, &BTreeSet::new()).expect("renaming without a freshness check cannot fail")
}

type Scope = Vec<String>;
type NodeFn<'a> = dyn FnMut(&Formula, &Scope) -> Option<Result<Formula, StepFailure>> + 'a;

/// Rebuilds `phi` bottom-up. `node` may replace a whole subformula; `term`
/// rewrites each term. Both see the variables bound around the position.
fn map_formula(
    phi: &Formula,
    scope: &mut Scope,
    node: &mut NodeFn<'_>,
    term: &mut dyn FnMut(&Term, &Scope) -> Result<Term, StepFailure>,
) -> Result<Formula, StepFailure> {
    if let Some(r) = node(phi, scope) {
        return r;
    }
    Ok(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Eq(l, r) => Formula::eq(term(l, scope)?, term(r, scope)?),
        Formula::Pred(p, args) => Formula::pred(
            p.clone(),
            args.iter().map(|t| term(t, scope)).collect::<Result<_, _>>()?,
        ),
        Formula::Not(p) => Formula::not(map_formula(p, scope, node, term)?),
        Formula::And(l, r) => Formula::and(map_formula(l, scope, node, term)?, map_formula(r, scope, node, term)?),
        Formula::Or(l, r) => Formula::or(map_formula(l, scope, node, term)?, map_formula(r, scope, node, term)?),
        Formula::Implies(l, r) => {
            Formula::implies(map_formula(l, scope, node, term)?, map_formula(r, scope, node, term)?)
        }
        Formula::Iff(l, r) => Formula::iff(map_formula(l, scope, node, term)?, map_formula(r, scope, node, term)?),
        Formula::Knows(t, p) => Formula::knows(term(t, scope)?, map_formula(p, scope, node, term)?),
        Formula::Assign(x, t, p) => {
            let t = term(t, scope)?;
            scope.push(x.clone());
            let body = map_formula(p, scope, node, term);
            scope.pop();
            Formula::assign(x.clone(), t, body?)
        }
    })
}

/// Applies `bindings` to every formula and justification of `script`, with
/// variable renamings checked for freshness against the whole script. Used to
/// expand a lemma citation into a full proof.
pub fn instantiate_script(script: &ProofScript, bindings: &[LemmaBinding]) -> Result<ProofScript, StepFailure> {
    let mut out = script.clone();
    for b in bindings {
        let mut avoid = out.goal.all_vars();
        for s in &out.steps {
            avoid.extend(s.formula.all_vars());
            avoid.extend(justification_vars(&s.justification));
        }
        let apply = |f: &Formula| apply_binding(f, b, &avoid);
        let apply_term = |t: &Term| -> Result<Term, StepFailure> {
            let probe = apply(&Formula::eq(t.clone(), t.clone()))?;
            let Formula::Eq(t2, _) = probe else { unreachable!() };
            Ok(t2)
        };
        out.goal = apply(&out.goal)?;
        for s in &mut out.steps {
            s.formula = apply(&s.formula)?;
            s.justification = match &s.justification {
                Justification::NecK(i, t) => Justification::NecK(*i, apply_term(t)?),
                Justification::NecAs(i, x, t) | Justification::Cnecas(i, x, t) => {
                    let x2 = match b {
                        LemmaBinding::Var { from, to } if from == x => to.clone(),
                        _ => x.clone(),
                    };
                    let t2 = apply_term(t)?;
                    if matches!(s.justification, Justification::NecAs(..)) {
                        Justification::NecAs(*i, x2, t2)
                    } else {
                        Justification::Cnecas(*i, x2, t2)
                    }
                }
                Justification::Lemma(name, inner) => {
                    // Left sides live in the cited lemma's vocabulary; only
                    // the right sides belong to this script.
                    let inner = inner
                        .iter()
                        .map(|ib| {
                            Ok(match ib {
                                LemmaBinding::Var { from, to } => LemmaBinding::Var {
                                    from: from.clone(),
                                    to: match b {
                                        LemmaBinding::Var { from: f, to: t } if f == to => t.clone(),
                                        _ => to.clone(),
                                    },
                                },
                                LemmaBinding::Name { from, to } => LemmaBinding::Name {
                                    from: from.clone(),
                                    to: apply_term(to)?,
                                },
                                LemmaBinding::Pred { atom, with } => LemmaBinding::Pred {
                                    atom: atom.clone(),
                                    with: apply(with)?,
                                },
                            })
                        })
                        .collect::<Result<Vec<_>, StepFailure>>()?;
                    Justification::Lemma(name.clone(), inner)
                }
                other => other.clone(),
            };
        }
    }
    Ok(out)
}

fn justification_vars(j: &Justification) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    match j {
        Justification::NecK(_, t) => out.extend(t.as_var().map(str::to_owned)),
        Justification::NecAs(_, x, t) | Justification::Cnecas(_, x, t) => {
            out.insert(x.clone());
            out.extend(t.as_var().map(str::to_owned));
        }
        Justification::Lemma(_, bs) => {
            for b in bs {
                match b {
                    LemmaBinding::Var { to, .. } => {
                        out.insert(to.clone());
                    }
                    LemmaBinding::Name { to, .. } => out.extend(to.as_var().map(str::to_owned)),
                    LemmaBinding::Pred { with, .. } => out.extend(with.all_vars()),
                }
            }
        }
        _ => {}
    }
    out
}
