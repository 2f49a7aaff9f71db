use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::syntax::Signature;

/// A finite constant-domain Kripke model `⟨W, I, R, ρ, η⟩` together with the
/// signature it interprets.
///
/// `rho` entries that are not listed denote the empty relation; `eta` must be
/// total on `signature.names × worlds`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    /// Agent → accessibility pairs `(w, v)`.
    #[serde(default)]
    pub relations: BTreeMap<String, BTreeSet<(String, String)>>,
    /// Predicate → world → agent tuples.
    #[serde(default)]
    pub rho: BTreeMap<String, BTreeMap<String, BTreeSet<Vec<String>>>>,
    /// Name → world → agent.
    #[serde(default)]
    pub eta: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub signature: Signature,
    /// Claims every relation is an equivalence relation; checked, never enforced.
    #[serde(default)]
    pub epistemic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoWorlds,
    NoAgents,
    DuplicateWorld(String),
    DuplicateAgent(String),
    RelationUnknownAgent(String),
    RelationUnknownWorld {
        agent: String,
        world: String,
    },
    RhoUnknownPredicate(String),
    RhoUnknownWorld {
        pred: String,
        world: String,
    },
    RhoArity {
        pred: String,
        world: String,
        expected: usize,
        found: usize,
    },
    RhoUnknownAgent {
        pred: String,
        world: String,
        agent: String,
    },
    EtaNotTotal {
        name: String,
        world: String,
    },
    EtaUnknownName(String),
    EtaUnknownWorld {
        name: String,
        world: String,
    },
    EtaUnknownAgent {
        name: String,
        world: String,
        agent: String,
    },
    NotEquivalence(String),
}

impl Violation {
    /// The model component the violation is about.
    pub fn component(&self) -> &'static str {
        match self {
            Violation::NoWorlds | Violation::DuplicateWorld(_) => "worlds",
            Violation::NoAgents | Violation::DuplicateAgent(_) => "agents",
            Violation::RelationUnknownAgent(_)
            | Violation::RelationUnknownWorld { .. }
            | Violation::NotEquivalence(_) => "relations",
            Violation::RhoUnknownPredicate(_)
            | Violation::RhoUnknownWorld { .. }
            | Violation::RhoArity { .. }
            | Violation::RhoUnknownAgent { .. } => "rho",
            Violation::EtaNotTotal { .. }
            | Violation::EtaUnknownName(_)
            | Violation::EtaUnknownWorld { .. }
            | Violation::EtaUnknownAgent { .. } => "eta",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWorlds => write!(f, "worlds: the set of worlds is empty"),
            Violation::NoAgents => write!(f, "agents: the set of agents is empty"),
            Violation::DuplicateWorld(w) => write!(f, "worlds: `{w}` listed twice"),
            Violation::DuplicateAgent(a) => write!(f, "agents: `{a}` listed twice"),
            Violation::RelationUnknownAgent(a) => {
                write!(f, "relations: `{a}` is not an agent")
            }
            Violation::RelationUnknownWorld { agent, world } => {
                write!(f, "relations: pair for `{agent}` mentions unknown world `{world}`")
            }
            Violation::RhoUnknownPredicate(p) => {
                write!(f, "rho: predicate `{p}` is not in the signature")
            }
            Violation::RhoUnknownWorld { pred, world } => {
                write!(f, "rho: `{pred}` interpreted at unknown world `{world}`")
            }
            Violation::RhoArity {
                pred,
                world,
                expected,
                found,
            } => write!(
                f,
                "rho: tuple of length {found} for `{pred}` at `{world}`, arity is {expected}"
            ),
            Violation::RhoUnknownAgent { pred, world, agent } => {
                write!(f, "rho: `{pred}` at `{world}` mentions unknown agent `{agent}`")
            }
            Violation::EtaNotTotal { name, world } => {
                write!(f, "eta not total: `{name}` undefined at world `{world}`")
            }
            Violation::EtaUnknownName(n) => write!(f, "eta: name `{n}` is not in the signature"),
            Violation::EtaUnknownWorld { name, world } => {
                write!(f, "eta: `{name}` defined at unknown world `{world}`")
            }
            Violation::EtaUnknownAgent { name, world, agent } => {
                write!(f, "eta: `{name}` at `{world}` denotes unknown agent `{agent}`")
            }
            Violation::NotEquivalence(a) => write!(
                f,
                "relations: model is marked epistemic but the relation of `{a}` is not an equivalence"
            ),
        }
    }
}

impl KripkeModel {
    pub fn world_set(&self) -> BTreeSet<&str> {
        self.worlds.iter().map(String::as_str).collect()
    }

    pub fn agent_set(&self) -> BTreeSet<&str> {
        self.agents.iter().map(String::as_str).collect()
    }

    /// Accessibility of `agent`; agents without an entry have the empty relation.
    pub fn relation(&self, agent: &str) -> impl Iterator<Item = &(String, String)> {
        self.relations.get(agent).into_iter().flatten()
    }

    pub fn accessible(&self, agent: &str, w: &str, v: &str) -> bool {
        self.relations
            .get(agent)
            .is_some_and(|r| r.contains(&(w.to_owned(), v.to_owned())))
    }

    /// `ρ(P, w)`, empty when unlisted.
    pub fn extension(&self, pred: &str, world: &str) -> Option<&BTreeSet<Vec<String>>> {
        self.rho.get(pred).and_then(|m| m.get(world))
    }

    pub fn name_at(&self, name: &str, world: &str) -> Option<&str> {
        self.eta.get(name).and_then(|m| m.get(world)).map(String::as_str)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("models always serialise")
    }
}

/// Lists every violated model invariant; an empty list means the model is valid.
pub fn validate_model(m: &KripkeModel) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.worlds.is_empty() {
        out.push(Violation::NoWorlds);
    }
    if m.agents.is_empty() {
        out.push(Violation::NoAgents);
    }
    let mut seen = BTreeSet::new();
    for w in &m.worlds {
        if !seen.insert(w.as_str()) {
            out.push(Violation::DuplicateWorld(w.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for a in &m.agents {
        if !seen.insert(a.as_str()) {
            out.push(Violation::DuplicateAgent(a.clone()));
        }
    }
    let worlds = m.world_set();
    let agents = m.agent_set();

    for (agent, pairs) in &m.relations {
        if !agents.contains(agent.as_str()) {
            out.push(Violation::RelationUnknownAgent(agent.clone()));
        }
        let mut bad = BTreeSet::new();
        for (w, v) in pairs {
            for x in [w, v] {
                if !worlds.contains(x.as_str()) && bad.insert(x.clone()) {
                    out.push(Violation::RelationUnknownWorld {
                        agent: agent.clone(),
                        world: x.clone(),
                    });
                }
            }
        }
    }

    for (pred, by_world) in &m.rho {
        let Some(arity) = m.signature.arity(pred) else {
            out.push(Violation::RhoUnknownPredicate(pred.clone()));
            continue;
        };
        for (world, tuples) in by_world {
            if !worlds.contains(world.as_str()) {
                out.push(Violation::RhoUnknownWorld {
                    pred: pred.clone(),
                    world: world.clone(),
                });
            }
            for tuple in tuples {
                if tuple.len() != arity {
                    out.push(Violation::RhoArity {
                        pred: pred.clone(),
                        world: world.clone(),
                        expected: arity,
                        found: tuple.len(),
                    });
                }
                for a in tuple {
                    if !agents.contains(a.as_str()) {
                        out.push(Violation::RhoUnknownAgent {
                            pred: pred.clone(),
                            world: world.clone(),
                            agent: a.clone(),
                        });
                    }
                }
            }
        }
    }

    for (name, by_world) in &m.eta {
        if !m.signature.names.contains(name) {
            out.push(Violation::EtaUnknownName(name.clone()));
        }
        for (world, agent) in by_world {
            if !worlds.contains(world.as_str()) {
                out.push(Violation::EtaUnknownWorld {
                    name: name.clone(),
                    world: world.clone(),
                });
            }
            if !agents.contains(agent.as_str()) {
                out.push(Violation::EtaUnknownAgent {
                    name: name.clone(),
                    world: world.clone(),
                    agent: agent.clone(),
                });
            }
        }
    }
    for name in &m.signature.names {
        for w in &m.worlds {
            if m.name_at(name, w).is_none() {
                out.push(Violation::EtaNotTotal {
                    name: name.clone(),
                    world: w.clone(),
                });
            }
        }
    }

    if m.epistemic && out.is_empty() {
        for a in &m.agents {
            if !is_equivalence(m, a) {
                out.push(Violation::NotEquivalence(a.clone()));
            }
        }
    }
    out
}

fn is_equivalence(m: &KripkeModel, agent: &str) -> bool {
    let rel: BTreeSet<(&str, &str)> = m.relation(agent).map(|(w, v)| (w.as_str(), v.as_str())).collect();
    let reflexive = m.worlds.iter().all(|w| rel.contains(&(w.as_str(), w.as_str())));
    let symmetric = rel.iter().all(|&(w, v)| rel.contains(&(v, w)));
    let transitive = rel.iter().all(|&(w, v)| {
        rel.iter()
            .filter(|&&(v2, _)| v2 == v)
            .all(|&(_, u)| rel.contains(&(w, u)))
    });
    reflexive && symmetric && transitive
}

/// True iff every agent's relation is reflexive, symmetric and transitive on
/// the worlds of `m`.
pub fn is_epistemic(m: &KripkeModel) -> bool {
    m.agents.iter().all(|a| is_equivalence(m, a))
}

/// A variable assignment with finite support. Keys are variable identifiers
/// without the `?` sigil.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarAssignment(pub BTreeMap<String, String>);

impl VarAssignment {
    pub fn new() -> Self {
        VarAssignment(BTreeMap::new())
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.0.get(var).map(String::as_str)
    }

    pub fn insert(&mut self, var: impl Into<String>, agent: impl Into<String>) {
        let var = var.into();
        let var = var.strip_prefix('?').map(str::to_owned).unwrap_or(var);
        self.0.insert(var, agent.into());
    }

    /// `σ[x ↦ agent]`.
    pub fn with(&self, var: &str, agent: &str) -> VarAssignment {
        let mut out = self.clone();
        out.insert(var, agent);
        out
    }

    /// Parses `?x=i,?y=j`; the sigil is optional.
    pub fn parse(text: &str) -> Result<VarAssignment, String> {
        let mut out = VarAssignment::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (var, agent) = part
                .split_once('=')
                .ok_or_else(|| format!("expected `?var=agent`, found `{part}`"))?;
            let (var, agent) = (var.trim(), agent.trim());
            let bare = var.strip_prefix('?').unwrap_or(var);
            if bare.is_empty() || agent.is_empty() {
                return Err(format!("expected `?var=agent`, found `{part}`"));
            }
            out.insert(bare, agent);
        }
        Ok(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.0.iter()
    }
}

impl<const N: usize> From<[(&str, &str); N]> for VarAssignment {
    fn from(pairs: [(&str, &str); N]) -> Self {
        let mut out = VarAssignment::new();
        for (v, a) in pairs {
            out.insert(v, a);
        }
        out
    }
}

impl fmt::Display for VarAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, a)| format!("?{v}={a}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for VarAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, &String> = self.0.iter().map(|(v, a)| (format!("?{v}"), a)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VarAssignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = VarAssignment::new();
        for (v, a) in m {
            out.insert(v, a);
        }
        Ok(out)
    }
}

/// `M, w, σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedModel {
    #[serde(flatten)]
    pub model: KripkeModel,
    pub world: String,
    #[serde(default)]
    pub sigma: VarAssignment,
}

impl PointedModel {
    pub fn new(model: KripkeModel, world: impl Into<String>, sigma: VarAssignment) -> Self {
        PointedModel {
            model,
            world: world.into(),
            sigma,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("models always serialise")
    }
}
