//! Standard translation into two-sorted first-order logic.
//!
//! World-sorted variables are generated fresh (`v0`, `v1`, ...) per knowledge
//! operator; ELAS variables become agent-sorted FOL variables with the same
//! identifier. The evaluator in this module works directly over the labelled
//! structure and shares no code with the model checker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::semantics::KripkeModel;
use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    World,
    Agent,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::World => "world",
            Sort::Agent => "agent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FOLTerm {
    WorldVar(String),
    AgentVar(String),
    /// `f_a(w)`.
    NameApp(String, Box<FOLTerm>),
}

impl FOLTerm {
    pub fn sort(&self) -> Sort {
        match self {
            FOLTerm::WorldVar(_) => Sort::World,
            FOLTerm::AgentVar(_) | FOLTerm::NameApp(..) => Sort::Agent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FOLFormula {
    Top,
    Bottom,
    AgentEq(FOLTerm, FOLTerm),
    /// `Q_P(w, args)`.
    PredApp(String, FOLTerm, Vec<FOLTerm>),
    /// `R(w, v, agent)`.
    RelApp(FOLTerm, FOLTerm, FOLTerm),
    Not(Box<FOLFormula>),
    And(Box<FOLFormula>, Box<FOLFormula>),
    Or(Box<FOLFormula>, Box<FOLFormula>),
    Implies(Box<FOLFormula>, Box<FOLFormula>),
    Iff(Box<FOLFormula>, Box<FOLFormula>),
    ForallWorld(String, Box<FOLFormula>),
    ExistsAgent(String, Box<FOLFormula>),
    ForallAgent(String, Box<FOLFormula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AssignForm {
    Exists,
    Forall,
}

/// `Tr_w(φ)` with the existential clause for assignments.
pub fn translate(phi: &Formula, w: &str) -> FOLFormula {
    Translator::new(phi, w, AssignForm::Exists).run(phi)
}

/// `Tr_w(φ)` with the universal clause for assignments.
pub fn translate_universal(phi: &Formula, w: &str) -> FOLFormula {
    Translator::new(phi, w, AssignForm::Forall).run(phi)
}

struct Translator {
    form: AssignForm,
    root: String,
    avoid: BTreeSet<String>,
    next: usize,
}

impl Translator {
    fn new(phi: &Formula, w: &str, form: AssignForm) -> Translator {
        let mut avoid = phi.all_vars();
        avoid.insert(w.to_owned());
        Translator {
            form,
            root: w.to_owned(),
            avoid,
            next: 0,
        }
    }

    fn fresh(&mut self) -> String {
        loop {
            let v = format!("v{}", self.next);
            self.next += 1;
            if !self.avoid.contains(&v) {
                return v;
            }
        }
    }

    fn run(mut self, phi: &Formula) -> FOLFormula {
        let root = self.root.clone();
        self.tr(phi, &root)
    }

    fn term(t: &Term, w: &str) -> FOLTerm {
        match t {
            Term::Var(x) => FOLTerm::AgentVar(x.clone()),
            Term::Name(a) => FOLTerm::NameApp(a.clone(), Box::new(FOLTerm::WorldVar(w.to_owned()))),
        }
    }

    fn tr(&mut self, phi: &Formula, w: &str) -> FOLFormula {
        use FOLFormula as F;
        let bx = Box::new;
        match phi {
            Formula::True => F::Top,
            Formula::False => F::Bottom,
            Formula::Eq(l, r) => F::AgentEq(Self::term(l, w), Self::term(r, w)),
            Formula::Pred(p, args) => F::PredApp(
                p.clone(),
                FOLTerm::WorldVar(w.to_owned()),
                args.iter().map(|t| Self::term(t, w)).collect(),
            ),
            Formula::Not(p) => F::Not(bx(self.tr(p, w))),
            Formula::And(l, r) => F::And(bx(self.tr(l, w)), bx(self.tr(r, w))),
            Formula::Or(l, r) => F::Or(bx(self.tr(l, w)), bx(self.tr(r, w))),
            Formula::Implies(l, r) => F::Implies(bx(self.tr(l, w)), bx(self.tr(r, w))),
            Formula::Iff(l, r) => F::Iff(bx(self.tr(l, w)), bx(self.tr(r, w))),
            Formula::Knows(t, p) => {
                let v = self.fresh();
                let rel = F::RelApp(
                    FOLTerm::WorldVar(w.to_owned()),
                    FOLTerm::WorldVar(v.clone()),
                    Self::term(t, w),
                );
                let body = self.tr(p, &v);
                F::ForallWorld(v, bx(F::Implies(bx(rel), bx(body))))
            }
            Formula::Assign(x, t, p) => {
                if t.as_var() == Some(x.as_str()) {
                    return self.tr(p, w);
                }
                let eq = F::AgentEq(FOLTerm::AgentVar(x.clone()), Self::term(t, w));
                let body = self.tr(p, w);
                match self.form {
                    AssignForm::Exists => F::ExistsAgent(x.clone(), bx(F::And(bx(eq), bx(body)))),
                    AssignForm::Forall => F::ForallAgent(x.clone(), bx(F::Implies(bx(eq), bx(body)))),
                }
            }
        }
    }
}

impl fmt::Display for FOLTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOLTerm::WorldVar(v) | FOLTerm::AgentVar(v) => f.write_str(v),
            FOLTerm::NameApp(a, w) => write!(f, "f_{a}({w})"),
        }
    }
}

impl fmt::Display for FOLFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FOLFormula as F;
        match self {
            F::Top => f.write_str("true"),
            F::Bottom => f.write_str("false"),
            F::AgentEq(l, r) => write!(f, "{l} = {r}"),
            F::PredApp(p, w, args) => {
                write!(f, "Q_{p}({w}")?;
                for a in args {
                    write!(f, ", {a}")?;
                }
                f.write_str(")")
            }
            F::RelApp(w, v, a) => write!(f, "R({w}, {v}, {a})"),
            F::Not(p) => match **p {
                F::AgentEq(..) => write!(f, "~({p})"),
                _ => write!(f, "~{p}"),
            },
            F::And(l, r) => write!(f, "({l} & {r})"),
            F::Or(l, r) => write!(f, "({l} | {r})"),
            F::Implies(l, r) => write!(f, "({l} -> {r})"),
            F::Iff(l, r) => write!(f, "({l} <-> {r})"),
            F::ForallWorld(v, b) => write!(f, "forall_w {v}. {b}"),
            F::ExistsAgent(x, b) => write!(f, "exists_a {x}. {b}"),
            F::ForallAgent(x, b) => write!(f, "forall_a {x}. {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("`{var}` is used both as a world and as an agent variable")]
    Clash { var: String },
    #[error("{context} expects a {expected} term but got `{term}`")]
    Misplaced {
        context: &'static str,
        expected: Sort,
        term: String,
    },
}

/// Checks argument positions and that no identifier is used at both sorts.
pub fn sort_check(psi: &FOLFormula) -> Result<(), SortError> {
    let mut seen: BTreeMap<String, Sort> = BTreeMap::new();
    sort_rec(psi, &mut seen)
}

fn note(seen: &mut BTreeMap<String, Sort>, var: &str, sort: Sort) -> Result<(), SortError> {
    match seen.insert(var.to_owned(), sort) {
        Some(prev) if prev != sort => Err(SortError::Clash { var: var.to_owned() }),
        _ => Ok(()),
    }
}

fn sort_term(
    t: &FOLTerm,
    expected: Sort,
    context: &'static str,
    seen: &mut BTreeMap<String, Sort>,
) -> Result<(), SortError> {
    if t.sort() != expected {
        return Err(SortError::Misplaced {
            context,
            expected,
            term: t.to_string(),
        });
    }
    match t {
        FOLTerm::WorldVar(v) => note(seen, v, Sort::World),
        FOLTerm::AgentVar(v) => note(seen, v, Sort::Agent),
        FOLTerm::NameApp(_, w) => sort_term(w, Sort::World, "name application", seen),
    }
}

fn sort_rec(psi: &FOLFormula, seen: &mut BTreeMap<String, Sort>) -> Result<(), SortError> {
    use FOLFormula as F;
    match psi {
        F::Top | F::Bottom => Ok(()),
        F::AgentEq(l, r) => {
            sort_term(l, Sort::Agent, "equality", seen)?;
            sort_term(r, Sort::Agent, "equality", seen)
        }
        F::PredApp(_, w, args) => {
            sort_term(w, Sort::World, "predicate world argument", seen)?;
            args.iter()
                .try_for_each(|a| sort_term(a, Sort::Agent, "predicate argument", seen))
        }
        F::RelApp(w, v, a) => {
            sort_term(w, Sort::World, "relation source", seen)?;
            sort_term(v, Sort::World, "relation target", seen)?;
            sort_term(a, Sort::Agent, "relation index", seen)
        }
        F::Not(p) => sort_rec(p, seen),
        F::And(l, r) | F::Or(l, r) | F::Implies(l, r) | F::Iff(l, r) => {
            sort_rec(l, seen)?;
            sort_rec(r, seen)
        }
        F::ForallWorld(v, b) => {
            note(seen, v, Sort::World)?;
            sort_rec(b, seen)
        }
        F::ExistsAgent(x, b) | F::ForallAgent(x, b) => {
            note(seen, x, Sort::Agent)?;
            sort_rec(b, seen)
        }
    }
}

/// Free variables with their sorts.
pub fn fol_free_vars(psi: &FOLFormula) -> BTreeSet<(String, Sort)> {
    fn term(t: &FOLTerm, bound: &[String], out: &mut BTreeSet<(String, Sort)>) {
        match t {
            FOLTerm::WorldVar(v) | FOLTerm::AgentVar(v) => {
                if !bound.contains(v) {
                    out.insert((v.clone(), t.sort()));
                }
            }
            FOLTerm::NameApp(_, w) => term(w, bound, out),
        }
    }
    fn rec(psi: &FOLFormula, bound: &mut Vec<String>, out: &mut BTreeSet<(String, Sort)>) {
        use FOLFormula as F;
        match psi {
            F::Top | F::Bottom => {}
            F::AgentEq(l, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            F::PredApp(_, w, args) => {
                term(w, bound, out);
                args.iter().for_each(|a| term(a, bound, out));
            }
            F::RelApp(w, v, a) => {
                term(w, bound, out);
                term(v, bound, out);
                term(a, bound, out);
            }
            F::Not(p) => rec(p, bound, out),
            F::And(l, r) | F::Or(l, r) | F::Implies(l, r) | F::Iff(l, r) => {
                rec(l, bound, out);
                rec(r, bound, out);
            }
            F::ForallWorld(v, b) | F::ExistsAgent(v, b) | F::ForallAgent(v, b) => {
                bound.push(v.clone());
                rec(b, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(psi, &mut Vec::new(), &mut out);
    out
}

/// A finite two-sorted structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FOLStructure {
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    /// Triples `(w, v, agent)`.
    pub r: BTreeSet<(String, String, String)>,
    /// `Q_P` as pairs of a world and an agent tuple.
    pub q: BTreeMap<String, BTreeSet<(String, Vec<String>)>>,
    /// `f_a` as a map from worlds to agents.
    pub f: BTreeMap<String, BTreeMap<String, String>>,
}

/// Repackages a (valid) Kripke model as a FOL structure.
pub fn induce_structure(m: &KripkeModel) -> FOLStructure {
    let r = m
        .relations
        .iter()
        .flat_map(|(agent, pairs)| pairs.iter().map(move |(w, v)| (w.clone(), v.clone(), agent.clone())))
        .collect();
    let mut q: BTreeMap<String, BTreeSet<(String, Vec<String>)>> = m
        .signature
        .predicates
        .keys()
        .map(|p| (p.clone(), BTreeSet::new()))
        .collect();
    for (p, by_world) in &m.rho {
        let entry = q.entry(p.clone()).or_default();
        for (w, tuples) in by_world {
            for t in tuples {
                entry.insert((w.clone(), t.clone()));
            }
        }
    }
    FOLStructure {
        worlds: m.worlds.clone(),
        agents: m.agents.clone(),
        r,
        q,
        f: m.eta.clone(),
    }
}

/// A value of either sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SortedValue {
    World(String),
    Agent(String),
}

impl SortedValue {
    fn sort(&self) -> Sort {
        match self {
            SortedValue::World(_) => Sort::World,
            SortedValue::Agent(_) => Sort::Agent,
        }
    }

    fn label(&self) -> &str {
        match self {
            SortedValue::World(s) | SortedValue::Agent(s) => s,
        }
    }
}

pub type Valuation = BTreeMap<String, SortedValue>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{var}` is used as a {expected} variable but valued as a {found}")]
    SortMismatch { var: String, expected: Sort, found: Sort },
    #[error("no interpretation for `{0}`")]
    Uninterpreted(String),
}

/// Tarskian satisfaction over a finite two-sorted structure.
pub fn fol_eval(s: &FOLStructure, valuation: &Valuation, psi: &FOLFormula) -> Result<bool, FolError> {
    let mut val = valuation.clone();
    eval_rec(s, &mut val, psi)
}

fn value(s: &FOLStructure, val: &Valuation, t: &FOLTerm) -> Result<String, FolError> {
    match t {
        FOLTerm::WorldVar(v) | FOLTerm::AgentVar(v) => {
            let got = val.get(v).ok_or_else(|| FolError::Unbound(v.clone()))?;
            if got.sort() != t.sort() {
                return Err(FolError::SortMismatch {
                    var: v.clone(),
                    expected: t.sort(),
                    found: got.sort(),
                });
            }
            Ok(got.label().to_owned())
        }
        FOLTerm::NameApp(a, w) => {
            let w = value(s, val, w)?;
            s.f.get(a)
                .and_then(|m| m.get(&w))
                .cloned()
                .ok_or_else(|| FolError::Uninterpreted(format!("f_{a}({w})")))
        }
    }
}

fn bind_and<F>(val: &mut Valuation, var: &str, v: SortedValue, f: F) -> Result<bool, FolError>
where
    F: FnOnce(&mut Valuation) -> Result<bool, FolError>,
{
    let saved = val.insert(var.to_owned(), v);
    let out = f(val);
    match saved {
        Some(old) => val.insert(var.to_owned(), old),
        None => val.remove(var),
    };
    out
}

fn eval_rec(s: &FOLStructure, val: &mut Valuation, psi: &FOLFormula) -> Result<bool, FolError> {
    use FOLFormula as F;
    Ok(match psi {
        F::Top => true,
        F::Bottom => false,
        F::AgentEq(l, r) => value(s, val, l)? == value(s, val, r)?,
        F::PredApp(p, w, args) => {
            let w = value(s, val, w)?;
            let args = args.iter().map(|a| value(s, val, a)).collect::<Result<Vec<_>, _>>()?;
            s.q.get(p)
                .ok_or_else(|| FolError::Uninterpreted(format!("Q_{p}")))?
                .contains(&(w, args))
        }
        F::RelApp(w, v, a) => s.r.contains(&(value(s, val, w)?, value(s, val, v)?, value(s, val, a)?)),
        F::Not(p) => !eval_rec(s, val, p)?,
        F::And(l, r) => eval_rec(s, val, l)? && eval_rec(s, val, r)?,
        F::Or(l, r) => eval_rec(s, val, l)? || eval_rec(s, val, r)?,
        F::Implies(l, r) => !eval_rec(s, val, l)? || eval_rec(s, val, r)?,
        F::Iff(l, r) => eval_rec(s, val, l)? == eval_rec(s, val, r)?,
        F::ForallWorld(v, b) => {
            for w in &s.worlds {
                if !bind_and(val, v, SortedValue::World(w.clone()), |val| eval_rec(s, val, b))? {
                    return Ok(false);
                }
            }
            true
        }
        F::ForallAgent(x, b) => {
            for a in &s.agents {
                if !bind_and(val, x, SortedValue::Agent(a.clone()), |val| eval_rec(s, val, b))? {
                    return Ok(false);
                }
            }
            true
        }
        F::ExistsAgent(x, b) => {
            for a in &s.agents {
                if bind_and(val, x, SortedValue::Agent(a.clone()), |val| eval_rec(s, val, b))? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Valuation sending `w` to a world and each ELAS variable to its agent.
pub fn valuation_for(w_var: &str, world: &str, sigma: &crate::semantics::VarAssignment) -> Valuation {
    let mut v: Valuation = sigma
        .iter()
        .map(|(x, a)| (x.to_owned(), SortedValue::Agent(a.to_owned())))
        .collect();
    v.insert(w_var.to_owned(), SortedValue::World(world.to_owned()));
    v
}
