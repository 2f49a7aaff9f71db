//! Axiom schemas of SELAS: recognition and random instantiation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gen::FormulaGen;
use crate::syntax::{free_vars, substitute, Formula, Term};

use super::ProofError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    DistK,
    Tx,
    FourX,
    FiveX,
    Id,
    SubP,
    SubK,
    SubAs,
    RigidP,
    RigidN,
    Kas,
    DetAs,
    Das,
    EfAs,
    Sub2As,
}

impl AxiomId {
    pub const ALL: [AxiomId; 15] = [
        AxiomId::DistK,
        AxiomId::Tx,
        AxiomId::FourX,
        AxiomId::FiveX,
        AxiomId::Id,
        AxiomId::SubP,
        AxiomId::SubK,
        AxiomId::SubAs,
        AxiomId::RigidP,
        AxiomId::RigidN,
        AxiomId::Kas,
        AxiomId::DetAs,
        AxiomId::Das,
        AxiomId::EfAs,
        AxiomId::Sub2As,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::DistK => "DISTK",
            AxiomId::Tx => "Tx",
            AxiomId::FourX => "4x",
            AxiomId::FiveX => "5x",
            AxiomId::Id => "ID",
            AxiomId::SubP => "SUBP",
            AxiomId::SubK => "SUBK",
            AxiomId::SubAs => "SUBAS",
            AxiomId::RigidP => "RIGIDP",
            AxiomId::RigidN => "RIGIDN",
            AxiomId::Kas => "KAS",
            AxiomId::DetAs => "DETAS",
            AxiomId::Das => "DAS",
            AxiomId::EfAs => "EFAS",
            AxiomId::Sub2As => "SUB2AS",
        }
    }

    /// Tx, 4x and 5x are sound only on epistemic frames.
    pub fn needs_epistemic_frames(self) -> bool {
        matches!(self, AxiomId::Tx | AxiomId::FourX | AxiomId::FiveX)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = ProofError;

    fn from_str(s: &str) -> Result<AxiomId, ProofError> {
        AxiomId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ProofError::UnknownAxiom(s.to_owned()))
    }
}

/// Metavariable assignment found by a successful match, printed in surface
/// syntax (`t`, `x`, `phi`, …).
pub type Binding = BTreeMap<&'static str, String>;

/// Like [`match_axiom`] but takes the axiom by name.
pub fn match_axiom_named(name: &str, phi: &Formula) -> Result<Option<Binding>, ProofError> {
    Ok(match_axiom(name.parse()?, phi))
}

/// Returns the metavariable binding if `phi` is an instance of the schema,
/// side conditions included.
pub fn match_axiom(id: AxiomId, phi: &Formula) -> Option<Binding> {
    use Formula::*;
    let mut b = Binding::new();
    let ok = match id {
        AxiomId::DistK => (|| {
            let Implies(l, r) = phi else { return None };
            let Knows(t, imp) = &**l else { return None };
            let Implies(p, q) = &**imp else { return None };
            let Implies(kp, kq) = &**r else { return None };
            let (Knows(t1, p1), Knows(t2, q1)) = (&**kp, &**kq) else {
                return None;
            };
            (t1 == t && t2 == t && p1 == p && q1 == q).then(|| {
                b.insert("t", t.to_string());
                b.insert("phi", p.to_string());
                b.insert("psi", q.to_string());
            })
        })(),
        AxiomId::Tx => (|| {
            let Implies(l, r) = phi else { return None };
            let Knows(Term::Var(x), p) = &**l else { return None };
            (p == r).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("phi", p.to_string());
            })
        })(),
        AxiomId::FourX => (|| {
            let Implies(l, r) = phi else { return None };
            let Knows(t @ Term::Var(x), p) = &**l else { return None };
            let Knows(t1, inner) = &**r else { return None };
            (t1 == t && **inner == **l).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("phi", p.to_string());
            })
        })(),
        AxiomId::FiveX => (|| {
            let Implies(l, r) = phi else { return None };
            let Not(k) = &**l else { return None };
            let Knows(t @ Term::Var(x), p) = &**k else { return None };
            let Knows(t1, inner) = &**r else { return None };
            (t1 == t && **inner == **l).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("phi", p.to_string());
            })
        })(),
        AxiomId::Id => (|| {
            let Eq(s, t) = phi else { return None };
            (s == t).then(|| {
                b.insert("t", t.to_string());
            })
        })(),
        AxiomId::SubP => (|| {
            let Implies(l, r) = phi else { return None };
            let Iff(a, c) = &**r else { return None };
            let (lhs, rhs) = match (&**a, &**c) {
                (Pred(p, xs), Pred(q, ys)) if p == q && xs.len() == ys.len() => {
                    b.insert("P", p.clone());
                    (xs.clone(), ys.clone())
                }
                (Eq(s1, s2), Eq(t1, t2)) => {
                    b.insert("P", "=".into());
                    (vec![s1.clone(), s2.clone()], vec![t1.clone(), t2.clone()])
                }
                _ => return None,
            };
            (**l == equalities(&lhs, &rhs)).then(|| {
                b.insert("t", join_terms(&lhs));
                b.insert("t'", join_terms(&rhs));
            })
        })(),
        AxiomId::SubK => (|| {
            let Implies(l, r) = phi else { return None };
            let Eq(t, t1) = &**l else { return None };
            let Iff(a, c) = &**r else { return None };
            let (Knows(s, p), Knows(s1, q)) = (&**a, &**c) else {
                return None;
            };
            (s == t && s1 == t1 && p == q).then(|| {
                b.insert("t", t.to_string());
                b.insert("t'", t1.to_string());
                b.insert("phi", p.to_string());
            })
        })(),
        AxiomId::SubAs => (|| {
            let Implies(l, r) = phi else { return None };
            let Eq(t, t1) = &**l else { return None };
            let Iff(a, c) = &**r else { return None };
            let (Assign(x, s, p), Assign(y, s1, q)) = (&**a, &**c) else {
                return None;
            };
            (x == y && s == t && s1 == t1 && p == q).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("t", t.to_string());
                b.insert("t'", t1.to_string());
                b.insert("phi", p.to_string());
            })
        })(),
        AxiomId::RigidP => (|| {
            let Implies(l, r) = phi else { return None };
            let e @ Eq(Term::Var(x), Term::Var(y)) = &**l else {
                return None;
            };
            let Knows(t, inner) = &**r else { return None };
            (**inner == *e).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("y", format!("?{y}"));
                b.insert("t", t.to_string());
            })
        })(),
        AxiomId::RigidN => (|| {
            let Implies(l, r) = phi else { return None };
            let Not(e) = &**l else { return None };
            let Eq(Term::Var(x), Term::Var(y)) = &**e else {
                return None;
            };
            let Knows(t, inner) = &**r else { return None };
            (**inner == **l).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("y", format!("?{y}"));
                b.insert("t", t.to_string());
            })
        })(),
        AxiomId::Kas => (|| {
            let Implies(l, r) = phi else { return None };
            let Assign(x, t, imp) = &**l else { return None };
            let Implies(p, q) = &**imp else { return None };
            let Implies(ap, aq) = &**r else { return None };
            let (Assign(x1, t1, p1), Assign(x2, t2, q1)) = (&**ap, &**aq) else {
                return None;
            };
            (x1 == x && x2 == x && t1 == t && t2 == t && p1 == p && q1 == q).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("t", t.to_string());
                b.insert("phi", p.to_string());
                b.insert("psi", q.to_string());
            })
        })(),
        AxiomId::DetAs => (|| {
            let Implies(l, r) = phi else { return None };
            let Not(a) = &**l else { return None };
            let Assign(x, t, np) = &**a else { return None };
            let Not(p) = &**np else { return None };
            let Assign(x1, t1, p1) = &**r else { return None };
            (x1 == x && t1 == t && p1 == p).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("t", t.to_string());
                b.insert("phi", p.to_string());
            })
        })(),
        AxiomId::Das => (|| {
            let Not(a) = phi else { return None };
            let Assign(x, t, body) = &**a else { return None };
            (**body == Formula::not(True)).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("t", t.to_string());
            })
        })(),
        AxiomId::EfAs => (|| {
            let Assign(x, t, body) = phi else { return None };
            let Eq(Term::Var(x1), t1) = &**body else {
                return None;
            };
            (x1 == x && t1 == t).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("t", t.to_string());
            })
        })(),
        AxiomId::Sub2As => (|| {
            let Implies(l, r) = phi else { return None };
            let Assign(x, Term::Var(y), p) = &**r else {
                return None;
            };
            // The admissibility witness is the substitution itself.
            let s = substitute(p, y, x).ok()?;
            (s == **l).then(|| {
                b.insert("x", format!("?{x}"));
                b.insert("y", format!("?{y}"));
                b.insert("phi", p.to_string());
            })
        })(),
    };
    ok.map(|()| b)
}

/// `t1 = t1' & … & tn = tn'`, left-nested; `true` for the empty vector.
fn equalities(lhs: &[Term], rhs: &[Term]) -> Formula {
    lhs.iter()
        .zip(rhs)
        .map(|(s, t)| Formula::eq(s.clone(), t.clone()))
        .reduce(Formula::and)
        .unwrap_or(Formula::True)
}

fn join_terms(ts: &[Term]) -> String {
    let parts: Vec<String> = ts.iter().map(Term::to_string).collect();
    format!("({})", parts.join(", "))
}

/// A random instance of the schema built from `g`'s vocabulary. Side
/// conditions are respected; for SUB2AS the body is resampled until the
/// substitution is admissible.
pub fn random_instance<R: Rng>(id: AxiomId, g: &FormulaGen, rng: &mut R) -> Formula {
    let phi = g.sample(rng);
    let psi = g.sample(rng);
    let t = g.term(rng);
    let t1 = g.term(rng);
    let x = g.var(rng);
    let y = g.var(rng);
    let xv = Term::Var(x.clone());
    match id {
        AxiomId::DistK => Formula::implies(
            Formula::knows(t.clone(), Formula::implies(phi.clone(), psi.clone())),
            Formula::implies(Formula::knows(t.clone(), phi), Formula::knows(t, psi)),
        ),
        AxiomId::Tx => Formula::implies(Formula::knows(xv, phi.clone()), phi),
        AxiomId::FourX => {
            let k = Formula::knows(xv.clone(), phi);
            Formula::implies(k.clone(), Formula::knows(xv, k))
        }
        AxiomId::FiveX => {
            let nk = Formula::not(Formula::knows(xv.clone(), phi));
            Formula::implies(nk.clone(), Formula::knows(xv, nk))
        }
        AxiomId::Id => Formula::eq(t.clone(), t),
        AxiomId::SubP => {
            let mut preds: Vec<(String, usize)> = g.preds.clone();
            preds.push(("=".into(), 2));
            let (p, arity) = preds.choose(rng).expect("at least equality").clone();
            let lhs: Vec<Term> = (0..arity).map(|_| g.term(rng)).collect();
            let rhs: Vec<Term> = (0..arity).map(|_| g.term(rng)).collect();
            let atom = |ts: &[Term]| {
                if p == "=" {
                    Formula::eq(ts[0].clone(), ts[1].clone())
                } else {
                    Formula::pred(p.clone(), ts.to_vec())
                }
            };
            Formula::implies(equalities(&lhs, &rhs), Formula::iff(atom(&lhs), atom(&rhs)))
        }
        AxiomId::SubK => Formula::implies(
            Formula::eq(t.clone(), t1.clone()),
            Formula::iff(Formula::knows(t, phi.clone()), Formula::knows(t1, phi)),
        ),
        AxiomId::SubAs => Formula::implies(
            Formula::eq(t.clone(), t1.clone()),
            Formula::iff(Formula::assign(&x, t, phi.clone()), Formula::assign(&x, t1, phi)),
        ),
        AxiomId::RigidP => {
            let e = Formula::eq(xv, Term::Var(y));
            Formula::implies(e.clone(), Formula::knows(t, e))
        }
        AxiomId::RigidN => {
            let ne = Formula::not(Formula::eq(xv, Term::Var(y)));
            Formula::implies(ne.clone(), Formula::knows(t, ne))
        }
        AxiomId::Kas => Formula::implies(
            Formula::assign(&x, t.clone(), Formula::implies(phi.clone(), psi.clone())),
            Formula::implies(Formula::assign(&x, t.clone(), phi), Formula::assign(&x, t, psi)),
        ),
        AxiomId::DetAs => Formula::implies(
            Formula::assign_dual(&x, t.clone(), phi.clone()),
            Formula::assign(&x, t, phi),
        ),
        AxiomId::Das => Formula::assign_dual(&x, t, Formula::True),
        AxiomId::EfAs => Formula::assign(&x, t.clone(), Formula::eq(xv, t)),
        AxiomId::Sub2As => {
            let mut body = phi;
            loop {
                if let Ok(s) = substitute(&body, &y, &x) {
                    return Formula::implies(s, Formula::assign(&x, Term::Var(y), body));
                }
                body = g.sample(rng);
            }
        }
    }
}

/// True iff `x` does not occur free in `phi`.
pub(crate) fn not_free(x: &str, phi: &Formula) -> bool {
    !free_vars(phi).contains(x)
}
