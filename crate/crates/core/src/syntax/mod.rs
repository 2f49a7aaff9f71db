//! Abstract and concrete syntax of the epistemic language with assignments.
//!
//! Variables are written `?x` and are rigid; names are lower-case identifiers
//! (`a`, `bob`) whose denotation may change from world to world. Predicates
//! start with an upper-case letter.

mod lexer;
mod ops;
mod parser;
mod printer;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use lexer::{Token, TokenKind};
pub use ops::{
    fresh_var, is_admissible, is_el_fragment, knows_who, node_count, reletter, substitute, ReletterError, SubstError,
};
pub use parser::{parse_formula, parse_formula_with, parse_term, ParseError, ParseErrorKind};

/// A term: a rigid variable or a non-rigid name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Name(String),
}

impl Term {
    pub fn var(id: impl Into<String>) -> Term {
        Term::Var(id.into())
    }

    pub fn name(id: impl Into<String>) -> Term {
        Term::Name(id.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Name(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Name(n) => f.write_str(n),
        }
    }
}

/// Formula AST.
///
/// `Kh{t}` and `<?x := t>` are not constructors: the parser desugars them to
/// `~K{t}~` and `~[?x := t]~`. The remaining Boolean connectives are kept so
/// that axiom schemas written with them can be matched structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Knows(Term, Box<Formula>),
    /// `[var := term] body`; the bound position is always a variable.
    Assign(String, Term, Box<Formula>),
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn pred(sym: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(sym.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn knows(t: Term, f: Formula) -> Formula {
        Formula::Knows(t, Box::new(f))
    }

    /// `Kh{t} f`, i.e. `~K{t}~f`.
    pub fn knows_dual(t: Term, f: Formula) -> Formula {
        Formula::not(Formula::knows(t, Formula::not(f)))
    }

    pub fn assign(var: impl Into<String>, t: Term, f: Formula) -> Formula {
        Formula::Assign(var.into(), t, Box::new(f))
    }

    /// `<?x := t> f`, i.e. `~[?x := t]~f`.
    pub fn assign_dual(var: impl Into<String>, t: Term, f: Formula) -> Formula {
        Formula::not(Formula::assign(var, t, Formula::not(f)))
    }

    /// Every term occurring anywhere in the formula, in left-to-right order.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.visit_terms(&mut |t| out.push(t));
        out
    }

    fn visit_terms<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Pred(_, args) => args.iter().for_each(f),
            Formula::Not(p) => p.visit_terms(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit_terms(f);
                r.visit_terms(f);
            }
            Formula::Knows(t, p) => {
                f(t);
                p.visit_terms(f);
            }
            Formula::Assign(_, t, p) => {
                f(t);
                p.visit_terms(f);
            }
        }
    }

    /// All variable identifiers occurring in the formula, free or bound,
    /// including binder positions.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self
            .terms()
            .into_iter()
            .filter_map(|t| t.as_var().map(str::to_owned))
            .collect();
        self.visit(&mut |g| {
            if let Formula::Assign(x, _, _) = g {
                out.insert(x.clone());
            }
        });
        out
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.terms()
            .into_iter()
            .filter_map(|t| match t {
                Term::Name(n) => Some(n.clone()),
                Term::Var(_) => None,
            })
            .collect()
    }

    /// Predicate symbols with the arity of their first occurrence.
    pub fn predicates(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |g| {
            if let Formula::Pred(p, args) = g {
                out.entry(p.clone()).or_insert(args.len());
            }
        });
        out
    }

    /// Pre-order traversal of all subformulas.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Pred(..) => {}
            Formula::Not(p) | Formula::Knows(_, p) | Formula::Assign(_, _, p) => p.visit(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Modal depth counting both `K` and assignment operators.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Pred(..) => 0,
            Formula::Not(p) => p.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.depth().max(r.depth())
            }
            Formula::Knows(_, p) | Formula::Assign(_, _, p) => 1 + p.depth(),
        }
    }

    pub fn signature(&self) -> Signature {
        Signature {
            predicates: self.predicates(),
            names: self.names(),
            variables: self.all_vars(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print_formula(self))
    }
}

pub use printer::print_formula;

/// Free variables per the standard table; the term of `[x := t]` is free even
/// when it is `x` itself.
pub fn free_vars(phi: &Formula) -> BTreeSet<String> {
    ops::free_vars(phi)
}

/// Finite vocabulary of a problem instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub predicates: BTreeMap<String, usize>,
    #[serde(default)]
    pub names: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub variables: BTreeSet<String>,
}

impl Signature {
    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.predicates.get(pred).copied()
    }

    /// Union of two signatures; `None` on an arity clash.
    pub fn merge(&self, other: &Signature) -> Option<Signature> {
        let mut out = self.clone();
        for (p, &n) in &other.predicates {
            match out.predicates.get(p) {
                Some(&m) if m != n => return None,
                _ => {
                    out.predicates.insert(p.clone(), n);
                }
            }
        }
        out.names.extend(other.names.iter().cloned());
        out.variables.extend(other.variables.iter().cloned());
        Some(out)
    }
}
