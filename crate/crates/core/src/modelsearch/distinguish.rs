//! Smallest distinguishing formulas between two pointed models.
//!
//! Formulas are built bottom-up by node count. Each candidate is reduced to
//! its truth profile over a finite set of evaluation points; because truth
//! is compositional, one representative per profile suffices, and the first
//! profile that separates the two target points gives a smallest
//! distinguisher.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::semantics::kernel::{BitRow, IndexedModel};
use crate::semantics::{eval, PointedModel, Prepared, SemanticsError};
use crate::syntax::{is_el_fragment, node_count, Formula, Term};

type BoolOp = fn(bool, bool) -> bool;
type Build = fn(Formula, Formula) -> Formula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DistinguishError {
    #[error("the two models have different signatures")]
    SignatureMismatch,
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("assignment maps ?{0} to an unknown agent")]
    BadAssignment(String),
    #[error("internal error: distinguisher failed re-verification")]
    Unverified,
}

/// Smallest assignment-free formula (node count at most `max_size`) that
/// is true at one pointed model and false at the other.
pub fn el_distinguishes(
    p1: &PointedModel,
    p2: &PointedModel,
    max_size: usize,
) -> Result<Option<Formula>, DistinguishError> {
    distinguish(p1, p2, max_size, false)
}

/// As [`el_distinguishes`], but also building assignment operators over the
/// variables both assignments cover.
pub fn elas_distinguishes(
    p1: &PointedModel,
    p2: &PointedModel,
    max_size: usize,
) -> Result<Option<Formula>, DistinguishError> {
    distinguish(p1, p2, max_size, true)
}

/// Evaluation points: each model contributes one point per world and per
/// assignment to the shared variables (just the given assignment without
/// assignment operators).
struct Points {
    count: usize,
    /// `den[p][t]`: agent denoted by term `t` at point `p`.
    den: Vec<Vec<u32>>,
    /// `succ[t][p]`: points reachable from `p` by the agent `t` denotes.
    succ: Vec<Vec<BitRow>>,
    /// `moved[i][p]`: point reached from `p` by assignment operator `i`.
    moved: Vec<Vec<usize>>,
    /// Model and world of each point.
    loc: Vec<(usize, usize)>,
    targets: (usize, usize),
}

struct Block<'a> {
    m: &'a IndexedModel,
    offset: usize,
    /// Assignments per world.
    stride: usize,
}

impl Block<'_> {
    fn decode(&self, code: usize, vars: usize) -> Vec<u32> {
        let k = self.m.k;
        let mut out = vec![0u32; vars];
        let mut c = code;
        for slot in out.iter_mut().rev() {
            *slot = (c % k) as u32;
            c /= k;
        }
        out
    }

    fn encode(&self, assignment: &[u32]) -> usize {
        assignment.iter().fold(0, |acc, &a| acc * self.m.k + a as usize)
    }

    fn point(&self, w: usize, code: usize) -> usize {
        self.offset + w * self.stride + code
    }
}

fn sigma_codes(p: &PointedModel, vars: &[String]) -> Result<Vec<u32>, DistinguishError> {
    vars.iter()
        .map(|v| {
            let agent = p.sigma.get(v).unwrap();
            p.model
                .agents
                .iter()
                .position(|a| a == agent)
                .map(|i| i as u32)
                .ok_or_else(|| DistinguishError::BadAssignment(v.clone()))
        })
        .collect()
}

fn distinguish(
    p1: &PointedModel,
    p2: &PointedModel,
    max_size: usize,
    with_assign: bool,
) -> Result<Option<Formula>, DistinguishError> {
    let sig = &p1.model.signature;
    if sig.predicates != p2.model.signature.predicates || sig.names != p2.model.signature.names {
        return Err(DistinguishError::SignatureMismatch);
    }
    let prepared = [Prepared::new(&p1.model)?, Prepared::new(&p2.model)?];
    let w1 = prepared[0].world(&p1.world)?;
    let w2 = prepared[1].world(&p2.world)?;
    let vars: Vec<String> = {
        let d1: BTreeSet<&str> = p1.sigma.iter().map(|(v, _)| v.as_str()).collect();
        p2.sigma
            .iter()
            .map(|(v, _)| v.as_str())
            .filter(|v| d1.contains(v))
            .map(str::to_owned)
            .collect()
    };
    let s1 = sigma_codes(p1, &vars)?;
    let s2 = sigma_codes(p2, &vars)?;

    let terms: Vec<Term> = sig
        .names
        .iter()
        .map(|n| Term::name(n.clone()))
        .chain(vars.iter().map(|v| Term::var(v.clone())))
        .collect();
    let assigns: Vec<(usize, usize)> = if with_assign {
        (0..vars.len())
            .flat_map(|x| (0..terms.len()).map(move |t| (x, t)))
            .collect()
    } else {
        Vec::new()
    };

    let mut blocks = Vec::new();
    let mut offset = 0;
    for pr in &prepared {
        let m = &pr.indexed;
        let stride = if with_assign { m.k.pow(vars.len() as u32) } else { 1 };
        blocks.push(Block { m, offset, stride });
        offset += m.n * stride;
    }
    let fixed = [s1.clone(), s2.clone()];
    let assignment_of = |b: usize, code: usize| -> Vec<u32> {
        if with_assign {
            blocks[b].decode(code, vars.len())
        } else {
            fixed[b].clone()
        }
    };
    let code_of = |b: usize, a: &[u32]| if with_assign { blocks[b].encode(a) } else { 0 };
    let points = {
        let count = offset;
        let mut den = vec![Vec::new(); count];
        let mut succ = vec![vec![BitRow::empty(count); count]; terms.len()];
        let mut moved = vec![vec![0; count]; assigns.len()];
        let mut loc = vec![(0, 0); count];
        for (b, block) in blocks.iter().enumerate() {
            let m = block.m;
            for w in 0..m.n {
                for code in 0..block.stride {
                    let p = block.point(w, code);
                    loc[p] = (b, w);
                    let sigma = assignment_of(b, code);
                    let names = &prepared[b].symbols.names;
                    den[p] = terms
                        .iter()
                        .map(|t| match t {
                            Term::Name(n) => m.eta_at(names[n], w),
                            Term::Var(v) => sigma[vars.iter().position(|x| x == v).unwrap()],
                        })
                        .collect();
                    for (t, row) in succ.iter_mut().enumerate() {
                        for v in m.succ_row(den[p][t] as usize, w).ones() {
                            row[p].set(block.point(v, code), true);
                        }
                    }
                    for (i, &(x, t)) in assigns.iter().enumerate() {
                        let mut s = sigma.clone();
                        s[x] = den[p][t];
                        moved[i][p] = block.point(w, code_of(b, &s));
                    }
                }
            }
        }
        let targets = (
            blocks[0].point(w1, code_of(0, &s1)),
            blocks[1].point(w2, code_of(1, &s2)),
        );
        Points {
            count,
            den,
            succ,
            moved,
            loc,
            targets,
        }
    };

    let found = Builder {
        pts: &points,
        prepared: &prepared,
        terms: &terms,
        vars: &vars,
        assigns: &assigns,
        seen: HashSet::new(),
        levels: vec![Vec::new()],
    }
    .run(max_size);

    if let Some(phi) = &found {
        let differs = eval(p1, phi)? != eval(p2, phi)?;
        if !differs || node_count(phi) > max_size || (!with_assign && !is_el_fragment(phi)) {
            return Err(DistinguishError::Unverified);
        }
    }
    Ok(found)
}

struct Builder<'a> {
    pts: &'a Points,
    prepared: &'a [Prepared; 2],
    terms: &'a [Term],
    vars: &'a [String],
    assigns: &'a [(usize, usize)],
    seen: HashSet<BitRow>,
    /// Representatives by node count.
    levels: Vec<Vec<(BitRow, Formula)>>,
}

impl Builder<'_> {
    fn run(mut self, max_size: usize) -> Option<Formula> {
        for size in 1..=max_size {
            self.levels.push(Vec::new());
            if let Some(phi) = self.grow(size) {
                return Some(phi);
            }
        }
        None
    }

    /// Records a candidate; returns it if it separates the targets.
    fn offer(&mut self, size: usize, bits: BitRow, phi: Formula) -> Option<Formula> {
        if self.seen.contains(&bits) {
            return None;
        }
        let (a, b) = self.pts.targets;
        let separates = bits.get(a) != bits.get(b);
        self.seen.insert(bits.clone());
        if separates {
            return Some(phi);
        }
        self.levels[size].push((bits, phi));
        None
    }

    fn profile(&self, f: impl Fn(usize) -> bool) -> BitRow {
        let mut row = BitRow::empty(self.pts.count);
        for p in 0..self.pts.count {
            if f(p) {
                row.set(p, true);
            }
        }
        row
    }

    fn grow(&mut self, size: usize) -> Option<Formula> {
        let pts = self.pts;
        let nt = self.terms.len();
        if size == 1 {
            let t = self.profile(|_| true);
            self.offer(1, t, Formula::True)?;
            let f = self.profile(|_| false);
            self.offer(1, f, Formula::False)?;
        }
        if size == 3 {
            for i in 0..nt {
                for j in i + 1..nt {
                    let bits = self.profile(|p| pts.den[p][i] == pts.den[p][j]);
                    let phi = Formula::Eq(self.terms[i].clone(), self.terms[j].clone());
                    if let Some(hit) = self.offer(size, bits, phi) {
                        return Some(hit);
                    }
                }
            }
        }
        let preds: Vec<(String, usize)> = self.prepared[0]
            .symbols
            .preds
            .iter()
            .map(|(p, &(_, ar))| (p.clone(), ar))
            .collect();
        for (pred, arity) in preds {
            if arity + 1 != size {
                continue;
            }
            for tuple in tuples(nt, arity) {
                let bits = self.profile(|p| self.pred_holds(&pred, &tuple, p));
                let phi = Formula::Pred(pred.clone(), tuple.iter().map(|&t| self.terms[t].clone()).collect());
                if let Some(hit) = self.offer(size, bits, phi) {
                    return Some(hit);
                }
            }
        }
        if size >= 2 {
            for idx in 0..self.levels[size - 1].len() {
                let (bits, phi) = self.levels[size - 1][idx].clone();
                let bits = self.profile(|p| !bits.get(p));
                if let Some(hit) = self.offer(size, bits, Formula::not(phi)) {
                    return Some(hit);
                }
            }
        }
        if size >= 3 {
            for t in 0..nt {
                for idx in 0..self.levels[size - 2].len() {
                    let (body, phi) = self.levels[size - 2][idx].clone();
                    let bits = self.profile(|p| pts.succ[t][p].0.iter().zip(&body.0).all(|(s, b)| s & !b == 0));
                    if let Some(hit) = self.offer(size, bits, Formula::knows(self.terms[t].clone(), phi)) {
                        return Some(hit);
                    }
                }
            }
            for (i, &(x, t)) in self.assigns.iter().enumerate() {
                for idx in 0..self.levels[size - 2].len() {
                    let (body, phi) = self.levels[size - 2][idx].clone();
                    let bits = self.profile(|p| body.get(pts.moved[i][p]));
                    let phi = Formula::assign(self.vars[x].clone(), self.terms[t].clone(), phi);
                    if let Some(hit) = self.offer(size, bits, phi) {
                        return Some(hit);
                    }
                }
            }
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for li in 0..self.levels[left].len() {
                    for ri in 0..self.levels[right].len() {
                        let (lb, lf) = self.levels[left][li].clone();
                        let (rb, rf) = self.levels[right][ri].clone();
                        let combos: [(BoolOp, Build); 4] = [
                            (|a, b| a && b, Formula::and),
                            (|a, b| a || b, Formula::or),
                            (|a, b| !a || b, Formula::implies),
                            (|a, b| a == b, Formula::iff),
                        ];
                        for (op, build) in combos {
                            let bits = self.profile(|p| op(lb.get(p), rb.get(p)));
                            if let Some(hit) = self.offer(size, bits, build(lf.clone(), rf.clone())) {
                                return Some(hit);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn pred_holds(&self, pred: &str, tuple: &[usize], p: usize) -> bool {
        let (b, w) = self.pts.loc[p];
        let pr = &self.prepared[b];
        let m = &pr.indexed;
        let idx = m.tuple_index(tuple.iter().map(|&t| self.pts.den[p][t]));
        let (pi, _) = pr.symbols.preds[pred];
        m.rho[pi * m.n + w].get(idx)
    }
}

/// All `arity`-tuples over `0..n`, lexicographically.
fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}
