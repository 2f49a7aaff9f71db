//! Propositional tautology oracle.
//!
//! Maximal non-Boolean subformulas become atoms (structurally equal ones share
//! an atom) and the formula is evaluated on all rows at once, one bit per row.

use std::collections::HashMap;

use crate::syntax::Formula;

use super::ProofError;

pub const ATOM_BUDGET: usize = 16;

/// Atoms of `phi` in first-occurrence order.
pub fn taut_atoms(phi: &Formula) -> Vec<&Formula> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    collect(phi, &mut seen, &mut out);
    out
}

fn collect<'a>(phi: &'a Formula, seen: &mut HashMap<&'a Formula, usize>, out: &mut Vec<&'a Formula>) {
    match phi {
        Formula::True | Formula::False => {}
        Formula::Not(p) => collect(p, seen, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            collect(l, seen, out);
            collect(r, seen, out);
        }
        _ => {
            if !seen.contains_key(phi) {
                seen.insert(phi, out.len());
                out.push(phi);
            }
        }
    }
}

pub fn check_taut(phi: &Formula) -> Result<bool, ProofError> {
    let atoms = taut_atoms(phi);
    if atoms.len() > ATOM_BUDGET {
        return Err(ProofError::AtomBudget {
            atoms: atoms.len(),
            budget: ATOM_BUDGET,
        });
    }
    let rows = 1usize << atoms.len();
    let words = rows.div_ceil(64);
    let index: HashMap<&Formula, usize> = atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let table = truth_table(phi, &index, words);
    let last_mask = if rows.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << rows) - 1
    };
    Ok(table[..words - 1].iter().all(|&w| w == u64::MAX) && table[words - 1] & last_mask == last_mask)
}

/// Column of atom `i`: bit `r` of the result is bit `i` of row `r`.
fn atom_column(i: usize, words: usize) -> Vec<u64> {
    (0..words)
        .map(|w| {
            if i >= 6 {
                if (w >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            } else {
                let mut word = 0u64;
                for bit in 0..64 {
                    if (bit >> i) & 1 == 1 {
                        word |= 1 << bit;
                    }
                }
                word
            }
        })
        .collect()
}

fn truth_table(phi: &Formula, index: &HashMap<&Formula, usize>, words: usize) -> Vec<u64> {
    let bin = |l: &Formula, r: &Formula, op: fn(u64, u64) -> u64| {
        let a = truth_table(l, index, words);
        let b = truth_table(r, index, words);
        a.iter().zip(&b).map(|(&x, &y)| op(x, y)).collect()
    };
    match phi {
        Formula::True => vec![u64::MAX; words],
        Formula::False => vec![0; words],
        Formula::Not(p) => truth_table(p, index, words).into_iter().map(|w| !w).collect(),
        Formula::And(l, r) => bin(l, r, |x, y| x & y),
        Formula::Or(l, r) => bin(l, r, |x, y| x | y),
        Formula::Implies(l, r) => bin(l, r, |x, y| !x | y),
        Formula::Iff(l, r) => bin(l, r, |x, y| !(x ^ y)),
        _ => atom_column(index[phi], words),
    }
}
