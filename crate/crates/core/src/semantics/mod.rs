//! Finite constant-domain Kripke models and the model checker.
//!
//! Truth is evaluated at a pointed model `M, w, σ`. Names are interpreted
//! per world through `η`; variables through the assignment, which has finite
//! support and no default: an uncovered free variable is an error.

pub mod kernel;
mod model;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{free_vars, Formula, Signature, Term};
use kernel::{BitRow, CompiledFormula, IndexedModel, SymbolTable};

pub use model::{is_epistemic, validate_model, KripkeModel, PointedModel, VarAssignment, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unbound variable ?{0}")]
    UnboundVariable(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{pred}` has arity {expected} but is applied to {found} terms")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("?{var} is assigned `{agent}`, which is not an agent of the model")]
    UnknownAgent { var: String, agent: String },
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidModel(Vec<Violation>),
}

/// A validated model converted to index form, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub indexed: IndexedModel,
    pub symbols: SymbolTable,
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    world_index: BTreeMap<String, usize>,
    agent_index: BTreeMap<String, u32>,
}

impl Prepared {
    pub fn new(m: &KripkeModel) -> Result<Prepared, SemanticsError> {
        let violations = validate_model(m);
        if !violations.is_empty() {
            return Err(SemanticsError::InvalidModel(violations));
        }
        let symbols = SymbolTable::from_signature(&m.signature);
        let world_index: BTreeMap<String, usize> = m.worlds.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let agent_index: BTreeMap<String, u32> = m
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        let (n, k) = (m.worlds.len(), m.agents.len());
        let mut indexed = IndexedModel::blank(n, k, symbols.arities(), symbols.names.len());
        for (agent, pairs) in &m.relations {
            let a = agent_index[agent] as usize;
            for (w, v) in pairs {
                indexed.succ_row_mut(a, world_index[w]).set(world_index[v], true);
            }
        }
        for (pred, by_world) in &m.rho {
            let p = symbols.preds[pred].0;
            for (w, tuples) in by_world {
                let wi = world_index[w];
                for tuple in tuples {
                    let idx = indexed.tuple_index(tuple.iter().map(|a| agent_index[a]));
                    indexed.rho_row_mut(p, wi).set(idx, true);
                }
            }
        }
        for (name, by_world) in &m.eta {
            let i = symbols.names[name];
            for (w, agent) in by_world {
                indexed.set_eta(i, world_index[w], agent_index[agent]);
            }
        }
        Ok(Prepared {
            indexed,
            symbols,
            worlds: m.worlds.clone(),
            agents: m.agents.clone(),
            world_index,
            agent_index,
        })
    }

    pub fn world(&self, w: &str) -> Result<usize, SemanticsError> {
        self.world_index
            .get(w)
            .copied()
            .ok_or_else(|| SemanticsError::UnknownWorld(w.to_owned()))
    }

    /// Compiles `phi` and builds the slot vector from `sigma`.
    pub fn bind(&self, phi: &Formula, sigma: &VarAssignment) -> Result<(CompiledFormula, Vec<u32>), SemanticsError> {
        let compiled = CompiledFormula::compile(phi, &self.symbols)?;
        let free = free_vars(phi);
        let mut slots = vec![0u32; compiled.slots.len()];
        for (i, var) in compiled.slots.iter().enumerate() {
            match sigma.get(var) {
                Some(agent) => {
                    slots[i] = *self
                        .agent_index
                        .get(agent)
                        .ok_or_else(|| SemanticsError::UnknownAgent {
                            var: var.clone(),
                            agent: agent.to_owned(),
                        })?;
                }
                None if free.contains(var) => return Err(SemanticsError::UnboundVariable(var.clone())),
                None => {}
            }
        }
        Ok((compiled, slots))
    }

    pub fn eval(&self, world: &str, sigma: &VarAssignment, phi: &Formula) -> Result<bool, SemanticsError> {
        let w = self.world(world)?;
        let (compiled, mut slots) = self.bind(phi, sigma)?;
        Ok(compiled.holds(&self.indexed, w, &mut slots))
    }
}

/// `σ_w(t)`: the agent a term denotes at world `w`.
pub fn denote(m: &KripkeModel, sigma: &VarAssignment, w: &str, t: &Term) -> Result<String, SemanticsError> {
    if !m.worlds.iter().any(|x| x == w) {
        return Err(SemanticsError::UnknownWorld(w.to_owned()));
    }
    match t {
        Term::Var(v) => sigma
            .get(v)
            .map(str::to_owned)
            .ok_or_else(|| SemanticsError::UnboundVariable(v.clone())),
        Term::Name(n) => {
            if !m.signature.names.contains(n) {
                return Err(SemanticsError::UnknownName(n.clone()));
            }
            m.name_at(n, w)
                .map(str::to_owned)
                .ok_or_else(|| SemanticsError::UnknownName(n.clone()))
        }
    }
}

/// `M, w, σ ⊨ φ`.
pub fn eval(p: &PointedModel, phi: &Formula) -> Result<bool, SemanticsError> {
    Prepared::new(&p.model)?.eval(&p.world, &p.sigma, phi)
}

/// Truth value of `phi` at every world of `m` under `sigma`.
pub fn eval_all_worlds(
    m: &KripkeModel,
    sigma: &VarAssignment,
    phi: &Formula,
) -> Result<BTreeMap<String, bool>, SemanticsError> {
    let prepared = Prepared::new(m)?;
    let (compiled, mut slots) = prepared.bind(phi, sigma)?;
    Ok(m.worlds
        .iter()
        .enumerate()
        .map(|(w, name)| (name.clone(), compiled.holds(&prepared.indexed, w, &mut slots)))
        .collect())
}

/// Converts a dense model back to labelled form.
pub fn to_kripke(
    m: &IndexedModel,
    signature: &Signature,
    worlds: &[String],
    agents: &[String],
    epistemic: bool,
) -> KripkeModel {
    let symbols = SymbolTable::from_signature(signature);
    let mut relations = BTreeMap::new();
    for (a, agent) in agents.iter().enumerate() {
        let mut pairs = BTreeSet::new();
        for w in 0..m.n {
            for v in m.succ_row(a, w).ones() {
                pairs.insert((worlds[w].clone(), worlds[v].clone()));
            }
        }
        relations.insert(agent.clone(), pairs);
    }
    let mut rho = BTreeMap::new();
    for (pred, &(p, arity)) in &symbols.preds {
        let mut by_world = BTreeMap::new();
        for (w, world) in worlds.iter().enumerate() {
            let row: &BitRow = &m.rho[p * m.n + w];
            let tuples: BTreeSet<Vec<String>> = row
                .ones()
                .map(|idx| {
                    m.tuple_of(idx, arity)
                        .into_iter()
                        .map(|d| agents[d as usize].clone())
                        .collect()
                })
                .collect();
            if !tuples.is_empty() {
                by_world.insert(world.clone(), tuples);
            }
        }
        if !by_world.is_empty() {
            rho.insert(pred.clone(), by_world);
        }
    }
    let mut eta = BTreeMap::new();
    for (name, &i) in &symbols.names {
        let by_world = worlds
            .iter()
            .enumerate()
            .map(|(w, world)| (world.clone(), agents[m.eta_at(i, w) as usize].clone()))
            .collect();
        eta.insert(name.clone(), by_world);
    }
    KripkeModel {
        worlds: worlds.to_vec(),
        agents: agents.to_vec(),
        relations,
        rho,
        eta,
        signature: Signature {
            predicates: signature.predicates.clone(),
            names: signature.names.clone(),
            variables: BTreeSet::new(),
        },
        epistemic,
    }
}
