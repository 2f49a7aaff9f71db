//! Toolkit for epistemic logic with assignments: a quantifier-free term modal
//! logic with non-rigid names, rigid variables and `[?x := t]` operators.
//!
//! - [`syntax`]: parsing, printing, free variables, substitution.
//! - [`semantics`]: finite constant-domain Kripke models and the model checker.
//! - [`translation`]: the standard translation into two-sorted first-order logic.
//! - [`proofkit`]: a checker for Hilbert-style derivations.
//! - [`modelsearch`]: bounded countermodel and witness search.
//! - [`gen`]: seeded random formulas and models.

pub mod fixtures;
pub mod gen;
pub mod modelsearch;
pub mod proofkit;
pub mod semantics;
pub mod syntax;
pub mod translation;
