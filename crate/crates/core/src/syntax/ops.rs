use std::collections::BTreeSet;

use thiserror::Error;

use super::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    /// The binder `[?y := t]` would capture an introduced occurrence of `?y`.
    #[error("substituting ?{var} is inadmissible: it would be captured by [?{binder} := {term}]")]
    Inadmissible { var: String, binder: String, term: Term },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReletterError {
    #[error("relettering applies to an assignment formula [?x := t] φ")]
    NotAnAssignment,
    #[error("?{0} is not fresh: it occurs in the formula or in the assigned term")]
    NotFresh(String),
}

fn term_var(t: &Term, out: &mut BTreeSet<String>) {
    if let Term::Var(v) = t {
        out.insert(v.clone());
    }
}

pub(super) fn free_vars(phi: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(phi, &mut out);
    out
}

fn collect_free(phi: &Formula, out: &mut BTreeSet<String>) {
    match phi {
        Formula::True | Formula::False => {}
        Formula::Eq(l, r) => {
            term_var(l, out);
            term_var(r, out);
        }
        Formula::Pred(_, args) => args.iter().for_each(|t| term_var(t, out)),
        Formula::Not(p) => collect_free(p, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            collect_free(l, out);
            collect_free(r, out);
        }
        Formula::Knows(t, p) => {
            term_var(t, out);
            collect_free(p, out);
        }
        Formula::Assign(x, t, p) => {
            let mut inner = free_vars(p);
            inner.remove(x);
            out.extend(inner);
            term_var(t, out);
        }
    }
}

fn subst_term(t: &Term, y: &str, x: &str) -> Term {
    match t {
        Term::Var(v) if v == x => Term::Var(y.to_owned()),
        other => other.clone(),
    }
}

/// `φ[y/x]`: replaces every free occurrence of `?x` by `?y`.
pub fn substitute(phi: &Formula, y: &str, x: &str) -> Result<Formula, SubstError> {
    if x == y {
        return Ok(phi.clone());
    }
    Ok(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Eq(l, r) => Formula::Eq(subst_term(l, y, x), subst_term(r, y, x)),
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|t| subst_term(t, y, x)).collect()),
        Formula::Not(p) => Formula::not(substitute(p, y, x)?),
        Formula::And(l, r) => Formula::and(substitute(l, y, x)?, substitute(r, y, x)?),
        Formula::Or(l, r) => Formula::or(substitute(l, y, x)?, substitute(r, y, x)?),
        Formula::Implies(l, r) => Formula::implies(substitute(l, y, x)?, substitute(r, y, x)?),
        Formula::Iff(l, r) => Formula::iff(substitute(l, y, x)?, substitute(r, y, x)?),
        Formula::Knows(t, p) => Formula::knows(subst_term(t, y, x), substitute(p, y, x)?),
        Formula::Assign(z, t, p) => {
            let t2 = subst_term(t, y, x);
            if z == x {
                Formula::Assign(z.clone(), t2, p.clone())
            } else if z == y && free_vars(p).contains(x) {
                return Err(SubstError::Inadmissible {
                    var: y.to_owned(),
                    binder: z.clone(),
                    term: t.clone(),
                });
            } else {
                Formula::assign(z.clone(), t2, substitute(p, y, x)?)
            }
        }
    })
}

/// True iff every `?y` introduced for a free `?x` in `φ` stays free.
pub fn is_admissible(phi: &Formula, y: &str, x: &str) -> bool {
    substitute(phi, y, x).is_ok()
}

/// `[?x := t] ψ` becomes `[?z := t] ψ[z/x]` for a fresh `?z`.
pub fn reletter(phi: &Formula, z: &str) -> Result<Formula, ReletterError> {
    let Formula::Assign(x, t, body) = phi else {
        return Err(ReletterError::NotAnAssignment);
    };
    if phi.all_vars().contains(z) || t.as_var() == Some(z) {
        return Err(ReletterError::NotFresh(z.to_owned()));
    }
    let renamed = substitute(body, z, x).expect("a fresh variable cannot be captured");
    Ok(Formula::assign(z, t.clone(), renamed))
}

/// First of `w0, w1, …` not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("w{i}"))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply")
}

/// `[?w := b] K{knower} (?w = b)`: the knower identifies who `b` is.
pub fn knows_who(knower: &Term, named: &str) -> Formula {
    let mut avoid = BTreeSet::new();
    term_var(knower, &mut avoid);
    let w = fresh_var(&avoid);
    Formula::assign(
        w.clone(),
        Term::name(named),
        Formula::knows(knower.clone(), Formula::eq(Term::Var(w), Term::name(named))),
    )
}

/// True iff the formula contains no assignment operator.
pub fn is_el_fragment(phi: &Formula) -> bool {
    let mut el = true;
    phi.visit(&mut |g| {
        if matches!(g, Formula::Assign(..)) {
            el = false;
        }
    });
    el
}

/// Size used by the distinguisher search: one per formula node plus one per
/// term occurrence (the bound variable of an assignment is not a term).
pub fn node_count(phi: &Formula) -> usize {
    match phi {
        Formula::True | Formula::False => 1,
        Formula::Eq(..) => 3,
        Formula::Pred(_, args) => 1 + args.len(),
        Formula::Not(p) => 1 + node_count(p),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            1 + node_count(l) + node_count(r)
        }
        Formula::Knows(_, p) | Formula::Assign(_, _, p) => 2 + node_count(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{free_vars, parse_formula};

    fn vars(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn free_variable_table() {
        assert_eq!(free_vars(&p("[?x := ?y] P(?x, ?z)")), vars(&["y", "z"]));
        assert_eq!(free_vars(&p("[?x := ?x] P(?x)")), vars(&["x"]));
        assert_eq!(free_vars(&p("K{a} P(b)")), vars(&[]));
        assert_eq!(free_vars(&p("K{?k} ?x = a")), vars(&["k", "x"]));
        assert_eq!(free_vars(&p("[?x := a] P(?x) & Q(?x)")), vars(&["x"]));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&p("K{?x} P(?x)"), "y", "x").unwrap(), p("K{?y} P(?y)"));
        let err = substitute(&p("[?y := c] P(?x)"), "y", "x").unwrap_err();
        assert_eq!(
            err,
            SubstError::Inadmissible {
                var: "y".into(),
                binder: "y".into(),
                term: Term::name("c")
            }
        );
        assert_eq!(
            substitute(&p("[?x := ?x] P(?x)"), "y", "x").unwrap(),
            p("[?x := ?y] P(?x)")
        );
        // ?y is bound but ?x is not free below it, so nothing is captured.
        assert_eq!(
            substitute(&p("[?y := c] P(?y) & P(?x)"), "y", "x").unwrap(),
            p("[?y := c] P(?y) & P(?y)")
        );
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(&p("[?y := c] P(?x)"), "y", "x"));
        assert!(is_admissible(&p("[?y := c] P(?x)"), "x", "x"));
        assert!(is_admissible(&p("[?z := a] P(?x)"), "y", "x"));
        assert!(is_admissible(&p("[?y := ?x] P(?y)"), "y", "x"));
    }

    #[test]
    fn reletter_examples() {
        assert_eq!(
            reletter(&p("[?x := a] K{?x} P(?x)"), "z").unwrap(),
            p("[?z := a] K{?z} P(?z)")
        );
        assert_eq!(reletter(&p("[?x := a] P(b)"), "z").unwrap(), p("[?z := a] P(b)"));
        assert_eq!(
            reletter(&p("[?x := ?z] P(?x)"), "z").unwrap_err(),
            ReletterError::NotFresh("z".into())
        );
        assert_eq!(reletter(&p("P(?x)"), "z").unwrap_err(), ReletterError::NotAnAssignment);
        assert!(reletter(&p("[?x := a] [?z := b] P(?x)"), "z").is_err());
    }

    #[test]
    fn knows_who_examples() {
        let kw = knows_who(&Term::name("a"), "b");
        assert_eq!(kw, p("[?w0 := b] K{a} (?w0 = b)"));
        assert!(free_vars(&kw).is_empty());
        assert_eq!(knows_who(&Term::name("a"), "a"), p("[?w0 := a] K{a} (?w0 = a)"));
        assert_eq!(knows_who(&Term::var("w0"), "b"), p("[?w1 := b] K{?w0} (?w1 = b)"));
    }

    #[test]
    fn el_fragment() {
        assert!(is_el_fragment(&p("K{a} P(?x)")));
        assert!(!is_el_fragment(&p("[?x := a] P(?x)")));
        assert!(!is_el_fragment(&p("[?x := a] Kh{a} P(?x)")));
        assert!(!is_el_fragment(&p("<?x := a> true")));
    }

    #[test]
    fn node_count_of_distinguisher() {
        assert_eq!(node_count(&p("[?x := a] Kh{a} P(?x)")), 8);
        assert_eq!(node_count(&p("a = a")), 3);
        assert_eq!(node_count(&p("true")), 1);
    }
}
