//! Bounded search over finite models.
//!
//! The search is exhaustive only up to the given bounds; a verdict of "no
//! countermodel" says nothing about larger models. Every model returned has
//! been re-checked with [`crate::semantics::eval`].

mod distinguish;
mod space;
pub mod suites;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{agent_labels, random_model, seeded, world_labels};
use crate::semantics::kernel::{CompiledFormula, IndexedModel};
use crate::semantics::{eval, to_kripke, KripkeModel, PointedModel, Prepared, SemanticsError, VarAssignment};
use crate::syntax::{free_vars, Formula, Signature};

pub use distinguish::{el_distinguishes, elas_distinguishes, DistinguishError};
pub use space::{set_partitions, Odometer, Space, MAX_ANY_FRAME_WORLDS, MAX_EPISTEMIC_WORLDS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid bounds: {0}")]
    Bounds(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("internal error: search result failed re-verification")]
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub max_agents: usize,
    pub epistemic: bool,
    pub max_random_trials: usize,
}

impl SearchBounds {
    pub fn new(max_worlds: usize, max_agents: usize, epistemic: bool) -> SearchBounds {
        SearchBounds {
            max_worlds,
            max_agents,
            epistemic,
            max_random_trials: 0,
        }
    }

    pub fn with_trials(self, trials: usize) -> SearchBounds {
        SearchBounds {
            max_random_trials: trials,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let limit = if self.epistemic {
            MAX_EPISTEMIC_WORLDS
        } else {
            MAX_ANY_FRAME_WORLDS
        };
        if self.max_worlds == 0 || self.max_agents == 0 {
            return Err(SearchError::Bounds("worlds and agents must be at least 1".into()));
        }
        if self.max_worlds > limit {
            return Err(SearchError::Bounds(format!("at most {limit} worlds are supported")));
        }
        Ok(())
    }

    /// `(n, k)` pairs in enumeration order.
    pub fn sizes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.max_worlds).flat_map(move |n| (1..=self.max_agents).map(move |k| (n, k)))
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds::new(3, 3, true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Countermodel { model: PointedModel },
    NoCountermodelUpTo { bounds: SearchBounds },
    Witness { model: PointedModel },
    UnsatisfiableUpTo { bounds: SearchBounds },
}

impl Verdict {
    pub fn model(&self) -> Option<&PointedModel> {
        match self {
            Verdict::Countermodel { model } | Verdict::Witness { model } => Some(model),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::Countermodel { model } => {
                format!("countermodel at world {} with sigma {{{}}}", model.world, model.sigma)
            }
            Verdict::Witness { model } => {
                format!("witness at world {} with sigma {{{}}}", model.world, model.sigma)
            }
            Verdict::NoCountermodelUpTo { bounds } => {
                format!("no countermodel up to {}", bounds_text(bounds))
            }
            Verdict::UnsatisfiableUpTo { bounds } => {
                format!("unsatisfiable up to {}", bounds_text(bounds))
            }
        }
    }
}

fn bounds_text(b: &SearchBounds) -> String {
    format!(
        "{} worlds, {} agents ({} frames)",
        b.max_worlds,
        b.max_agents,
        if b.epistemic { "epistemic" } else { "arbitrary" }
    )
}

/// Every model over `sig` within the bounds, in canonical order.
pub fn enumerate_models(
    sig: &Signature,
    bounds: &SearchBounds,
) -> Result<impl Iterator<Item = KripkeModel>, SearchError> {
    bounds.validate()?;
    let spaces = bounds
        .sizes()
        .map(|(n, k)| Space::new(sig, n, k, bounds.epistemic))
        .collect::<Result<Vec<_>, _>>()?;
    let sig = sig.clone();
    let epistemic = bounds.epistemic;
    Ok(spaces.into_iter().flat_map(move |space| {
        let worlds = world_labels(space.n);
        let agents = agent_labels(space.k);
        let mut m = space.first();
        let mut od = Odometer::new(&space, 0);
        let mut done = false;
        let sig = sig.clone();
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = to_kripke(&m, &sig, &worlds, &agents, epistemic);
            done = !od.advance(&space, &mut m);
            Some(out)
        })
    }))
}

/// Search options beyond the bounds.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Worker threads; 1 scans sequentially.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { jobs: 1 }
    }
}

/// First pointed model (canonical order) at which `phi` evaluates to
/// `target`, as a labelled pointed model.
fn first_point(
    phi: &Formula,
    bounds: &SearchBounds,
    target: bool,
    opts: SearchOptions,
) -> Result<Option<PointedModel>, SearchError> {
    bounds.validate()?;
    if opts.jobs == 0 {
        return Err(SearchError::Bounds("jobs must be at least 1".into()));
    }
    let sig = phi.signature();
    let free: Vec<String> = free_vars(phi).into_iter().collect();
    for (n, k) in bounds.sizes() {
        let space = Space::new(&sig, n, k, bounds.epistemic)?;
        let compiled = CompiledFormula::compile(phi, &space.symbols)?;
        let free_slots: Vec<usize> = free.iter().map(|v| compiled.slot_of(v).unwrap()).collect();
        let configs = space
            .relation_configs()
            .ok_or_else(|| SearchError::TooLarge(format!("relations at {n} worlds, {k} agents")))?;
        let scan = |config: u64| scan_config(&space, &compiled, &free_slots, target, config);
        let hit = if opts.jobs == 1 {
            (0..configs).find_map(scan)
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .expect("thread pool");
            pool.install(|| (0..configs).into_par_iter().find_map_first(scan))
        };
        if let Some((m, w, agents)) = hit {
            let model = to_kripke(&m, &sig, &world_labels(n), &agent_labels(k), bounds.epistemic);
            let mut sigma = VarAssignment::new();
            for (var, a) in free.iter().zip(agents) {
                sigma.insert(var.clone(), model.agents[a as usize].clone());
            }
            let pointed = PointedModel::new(model.clone(), model.worlds[w].clone(), sigma);
            if eval(&pointed, phi)? != target {
                return Err(SearchError::Unverified);
            }
            return Ok(Some(pointed));
        }
    }
    Ok(None)
}

type Hit = (IndexedModel, usize, Vec<u32>);

fn scan_config(
    space: &Space,
    compiled: &CompiledFormula,
    free_slots: &[usize],
    target: bool,
    config: u64,
) -> Option<Hit> {
    let mut m = space.first();
    space.apply_relations(&mut m, config);
    let mut od = Odometer::new(space, space.k);
    let mut slots = vec![0u32; compiled.slots.len()];
    loop {
        if let Some((w, agents)) = point_in(&m, compiled, free_slots, target, &mut slots) {
            return Some((m, w, agents));
        }
        if !od.advance(space, &mut m) {
            return None;
        }
    }
}

/// Scans worlds and assignments to the free slots of one model.
fn point_in(
    m: &IndexedModel,
    compiled: &CompiledFormula,
    free_slots: &[usize],
    target: bool,
    slots: &mut [u32],
) -> Option<(usize, Vec<u32>)> {
    let k = m.k as u32;
    for w in 0..m.n {
        free_slots.iter().for_each(|&s| slots[s] = 0);
        'sigma: loop {
            if compiled.holds(m, w, slots) == target {
                return Some((w, free_slots.iter().map(|&s| slots[s]).collect()));
            }
            for &s in free_slots.iter().rev() {
                slots[s] += 1;
                if slots[s] < k {
                    continue 'sigma;
                }
                slots[s] = 0;
            }
            break;
        }
    }
    None
}

pub fn find_countermodel(phi: &Formula, bounds: &SearchBounds) -> Result<Verdict, SearchError> {
    find_countermodel_with(phi, bounds, SearchOptions::default())
}

pub fn find_countermodel_with(
    phi: &Formula,
    bounds: &SearchBounds,
    opts: SearchOptions,
) -> Result<Verdict, SearchError> {
    Ok(match first_point(phi, bounds, false, opts)? {
        Some(model) => Verdict::Countermodel { model },
        None => Verdict::NoCountermodelUpTo { bounds: *bounds },
    })
}

pub fn find_witness(phi: &Formula, bounds: &SearchBounds) -> Result<Verdict, SearchError> {
    find_witness_with(phi, bounds, SearchOptions::default())
}

pub fn find_witness_with(phi: &Formula, bounds: &SearchBounds, opts: SearchOptions) -> Result<Verdict, SearchError> {
    Ok(match first_point(phi, bounds, true, opts)? {
        Some(model) => Verdict::Witness { model },
        None => Verdict::UnsatisfiableUpTo { bounds: *bounds },
    })
}

/// Samples `trials` random models (sizes uniform in `1..=max_worlds` and
/// `1..=max_agents`) and checks `phi` at every world and every assignment
/// to its free variables. Returns the first countermodel found.
pub fn random_countermodel(
    phi: &Formula,
    bounds: &SearchBounds,
    seed: u64,
) -> Result<Option<PointedModel>, SearchError> {
    bounds.validate()?;
    let sig = phi.signature();
    let free: Vec<String> = free_vars(phi).into_iter().collect();
    let mut rng = seeded(seed);
    for _ in 0..bounds.max_random_trials {
        let n = rng.gen_range(1..=bounds.max_worlds);
        let k = rng.gen_range(1..=bounds.max_agents);
        let model = random_model(&mut rng, &sig, n, k, bounds.epistemic);
        let prepared = Prepared::new(&model)?;
        let compiled = CompiledFormula::compile(phi, &prepared.symbols)?;
        let free_slots: Vec<usize> = free.iter().map(|v| compiled.slot_of(v).unwrap()).collect();
        let mut slots = vec![0u32; compiled.slots.len()];
        if let Some((w, agents)) = point_in(&prepared.indexed, &compiled, &free_slots, false, &mut slots) {
            let mut sigma = VarAssignment::new();
            for (var, a) in free.iter().zip(agents) {
                sigma.insert(var.clone(), model.agents[a as usize].clone());
            }
            let pointed = PointedModel::new(model.clone(), model.worlds[w].clone(), sigma);
            if eval(&pointed, phi)? {
                return Err(SearchError::Unverified);
            }
            return Ok(Some(pointed));
        }
    }
    Ok(None)
}

/// Milliseconds since `start`.
pub(crate) fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

#[cfg(test)]
mod tests;
