//! Index-based model representation and compiled formulas.
//!
//! Worlds, agents, names and predicates are dense indices. Both the public
//! model checker and the bounded search evaluate through this module.

use std::collections::BTreeMap;

use crate::syntax::{Formula, Signature, Term};

use super::SemanticsError;

/// Bitset over a fixed universe, stored in 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow(pub Vec<u64>);

impl BitRow {
    pub fn empty(bits: usize) -> BitRow {
        BitRow(vec![0; bits.div_ceil(64).max(1)])
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.0[i >> 6] |= 1 << (i & 63);
        } else {
            self.0[i >> 6] &= !(1 << (i & 63));
        }
    }

    /// Overwrites the low word and clears the rest.
    pub fn set_low_word(&mut self, mask: u64) {
        self.0.iter_mut().for_each(|w| *w = 0);
        self.0[0] = mask;
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// Dense model over worlds `0..n` and agents `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedModel {
    pub n: usize,
    pub k: usize,
    /// Successor rows, indexed `agent * n + world`.
    pub succ: Vec<BitRow>,
    pub arities: Vec<usize>,
    /// Extensions, indexed `pred * n + world`, bit = tuple index.
    pub rho: Vec<BitRow>,
    /// Denotations, indexed `name * n + world`.
    pub eta: Vec<u32>,
}

impl IndexedModel {
    /// A model with empty relations, empty extensions and every name
    /// denoting agent 0.
    pub fn blank(n: usize, k: usize, arities: Vec<usize>, names: usize) -> IndexedModel {
        let rho = arities
            .iter()
            .flat_map(|&ar| std::iter::repeat_n(BitRow::empty(k.pow(ar as u32)), n))
            .collect();
        IndexedModel {
            n,
            k,
            succ: vec![BitRow::empty(n); k * n],
            arities,
            rho,
            eta: vec![0; names * n],
        }
    }

    #[inline]
    pub fn succ_row(&self, agent: usize, w: usize) -> &BitRow {
        &self.succ[agent * self.n + w]
    }

    pub fn succ_row_mut(&mut self, agent: usize, w: usize) -> &mut BitRow {
        &mut self.succ[agent * self.n + w]
    }

    pub fn rho_row_mut(&mut self, pred: usize, w: usize) -> &mut BitRow {
        &mut self.rho[pred * self.n + w]
    }

    #[inline]
    pub fn eta_at(&self, name: usize, w: usize) -> u32 {
        self.eta[name * self.n + w]
    }

    pub fn set_eta(&mut self, name: usize, w: usize, agent: u32) {
        self.eta[name * self.n + w] = agent;
    }

    /// Index of an agent tuple in the extension bitset (first component most
    /// significant).
    pub fn tuple_index(&self, tuple: impl IntoIterator<Item = u32>) -> usize {
        tuple.into_iter().fold(0, |acc, d| acc * self.k + d as usize)
    }

    pub fn tuple_of(&self, mut idx: usize, arity: usize) -> Vec<u32> {
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.k) as u32;
            idx /= self.k;
        }
        out
    }
}

/// Symbol numbering shared by a model and the formulas compiled against it.
#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    pub names: BTreeMap<String, usize>,
    pub preds: BTreeMap<String, (usize, usize)>,
}

impl SymbolTable {
    /// Numbers names and predicates in the signature's (sorted) order.
    pub fn from_signature(sig: &Signature) -> SymbolTable {
        SymbolTable {
            names: sig.names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect(),
            preds: sig
                .predicates
                .iter()
                .enumerate()
                .map(|(i, (p, &ar))| (p.clone(), (i, ar)))
                .collect(),
        }
    }

    pub fn arities(&self) -> Vec<usize> {
        let mut out = vec![0; self.preds.len()];
        for &(i, ar) in self.preds.values() {
            out[i] = ar;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CTerm {
    Var(usize),
    Name(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Compiled {
    True,
    False,
    Eq(CTerm, CTerm),
    Pred(usize, Vec<CTerm>),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
    Knows(CTerm, Box<Compiled>),
    Assign(usize, CTerm, Box<Compiled>),
}

/// A formula compiled against a symbol table, with one assignment slot per
/// variable identifier.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    pub root: Compiled,
    /// Variable identifier of each slot.
    pub slots: Vec<String>,
}

impl CompiledFormula {
    pub fn compile(phi: &Formula, symbols: &SymbolTable) -> Result<CompiledFormula, SemanticsError> {
        let slots: Vec<String> = phi.all_vars().into_iter().collect();
        let index: BTreeMap<&str, usize> = slots.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let root = compile_rec(phi, symbols, &index)?;
        Ok(CompiledFormula { root, slots })
    }

    pub fn slot_of(&self, var: &str) -> Option<usize> {
        self.slots.iter().position(|v| v == var)
    }

    #[inline]
    pub fn holds(&self, m: &IndexedModel, w: usize, sigma: &mut [u32]) -> bool {
        holds(&self.root, m, w, sigma)
    }
}

fn compile_term(t: &Term, symbols: &SymbolTable, slots: &BTreeMap<&str, usize>) -> Result<CTerm, SemanticsError> {
    match t {
        Term::Var(v) => Ok(CTerm::Var(slots[v.as_str()])),
        Term::Name(n) => symbols
            .names
            .get(n)
            .map(|&i| CTerm::Name(i))
            .ok_or_else(|| SemanticsError::UnknownName(n.clone())),
    }
}

fn compile_rec(phi: &Formula, sy: &SymbolTable, sl: &BTreeMap<&str, usize>) -> Result<Compiled, SemanticsError> {
    let bx = |f: &Formula| compile_rec(f, sy, sl).map(Box::new);
    Ok(match phi {
        Formula::True => Compiled::True,
        Formula::False => Compiled::False,
        Formula::Eq(l, r) => Compiled::Eq(compile_term(l, sy, sl)?, compile_term(r, sy, sl)?),
        Formula::Pred(p, args) => {
            let &(idx, arity) = sy
                .preds
                .get(p)
                .ok_or_else(|| SemanticsError::UnknownPredicate(p.clone()))?;
            if arity != args.len() {
                return Err(SemanticsError::ArityMismatch {
                    pred: p.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let args = args.iter().map(|t| compile_term(t, sy, sl)).collect::<Result<_, _>>()?;
            Compiled::Pred(idx, args)
        }
        Formula::Not(p) => Compiled::Not(bx(p)?),
        Formula::And(l, r) => Compiled::And(bx(l)?, bx(r)?),
        Formula::Or(l, r) => Compiled::Or(bx(l)?, bx(r)?),
        Formula::Implies(l, r) => Compiled::Implies(bx(l)?, bx(r)?),
        Formula::Iff(l, r) => Compiled::Iff(bx(l)?, bx(r)?),
        Formula::Knows(t, p) => Compiled::Knows(compile_term(t, sy, sl)?, bx(p)?),
        Formula::Assign(x, t, p) => Compiled::Assign(sl[x.as_str()], compile_term(t, sy, sl)?, bx(p)?),
    })
}

#[inline]
fn denote(t: CTerm, m: &IndexedModel, w: usize, sigma: &[u32]) -> u32 {
    match t {
        CTerm::Var(s) => sigma[s],
        CTerm::Name(i) => m.eta_at(i, w),
    }
}

fn holds(f: &Compiled, m: &IndexedModel, w: usize, sigma: &mut [u32]) -> bool {
    match f {
        Compiled::True => true,
        Compiled::False => false,
        Compiled::Eq(l, r) => denote(*l, m, w, sigma) == denote(*r, m, w, sigma),
        Compiled::Pred(p, args) => {
            let idx = m.tuple_index(args.iter().map(|&t| denote(t, m, w, sigma)));
            m.rho[p * m.n + w].get(idx)
        }
        Compiled::Not(p) => !holds(p, m, w, sigma),
        Compiled::And(l, r) => holds(l, m, w, sigma) && holds(r, m, w, sigma),
        Compiled::Or(l, r) => holds(l, m, w, sigma) || holds(r, m, w, sigma),
        Compiled::Implies(l, r) => !holds(l, m, w, sigma) || holds(r, m, w, sigma),
        Compiled::Iff(l, r) => holds(l, m, w, sigma) == holds(r, m, w, sigma),
        Compiled::Knows(t, p) => {
            let agent = denote(*t, m, w, sigma) as usize;
            let row = m.succ_row(agent, w);
            for (wi, &word) in row.0.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let v = wi * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    if !holds(p, m, v, sigma) {
                        return false;
                    }
                }
            }
            true
        }
        Compiled::Assign(slot, t, p) => {
            let value = denote(*t, m, w, sigma);
            let saved = sigma[*slot];
            sigma[*slot] = value;
            let out = holds(p, m, w, sigma);
            sigma[*slot] = saved;
            out
        }
    }
}
