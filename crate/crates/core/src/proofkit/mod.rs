//! Checker for Hilbert-style derivations in SELAS.
//!
//! A script is a goal plus numbered steps, each justified by an axiom, a
//! propositional tautology, a rule (MP, NECK, NECAS), the derived rule CNECAS,
//! or a citation of a bundled theorem under a substitution.

mod axioms;
mod bundled;
mod check;
mod script;
pub mod soundness;
mod taut;

use thiserror::Error;

pub use axioms::{match_axiom, match_axiom_named, random_instance, AxiomId, Binding};
pub use bundled::{bundled_script, bundled_theorems, lemma_goal, BUNDLED};
pub use check::{check_proof, check_step, instantiate, instantiate_script, ProofReport, StepFailure, StepReport};
pub use script::{parse_script, Justification, LemmaBinding, ProofScript, ProofStep};
pub use taut::{check_taut, taut_atoms, ATOM_BUDGET};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
    #[error("{atoms} propositional atoms exceed the budget of {budget}")]
    AtomBudget { atoms: usize, budget: usize },
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
}
