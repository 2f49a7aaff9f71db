//! The finite model space for a signature at fixed sizes.
//!
//! A model is a vector of digits: one relation choice per agent, then one
//! extension mask per (predicate, world), then one denotation per
//! (name, world). The last digit varies fastest.

use crate::semantics::kernel::{BitRow, IndexedModel, SymbolTable};
use crate::syntax::Signature;

use super::SearchError;

/// Largest world count for arbitrary frames (an `n * n` relation mask must
/// fit a machine word).
pub const MAX_ANY_FRAME_WORLDS: usize = 7;
/// Largest world count for epistemic frames.
pub const MAX_EPISTEMIC_WORLDS: usize = 10;

/// All set partitions of `0..n` as restricted growth strings, in
/// lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let bound = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=bound {
            prefix.push(b);
            rec(prefix, n, max.max(b), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, 0, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct Space {
    pub n: usize,
    pub k: usize,
    pub epistemic: bool,
    pub symbols: SymbolTable,
    arities: Vec<usize>,
    names: usize,
    partitions: Vec<Vec<usize>>,
    radix: Vec<u64>,
}

impl Space {
    pub fn new(sig: &Signature, n: usize, k: usize, epistemic: bool) -> Result<Space, SearchError> {
        let limit = if epistemic {
            MAX_EPISTEMIC_WORLDS
        } else {
            MAX_ANY_FRAME_WORLDS
        };
        if n == 0 || k == 0 || n > limit {
            return Err(SearchError::Bounds(format!(
                "world count must be in 1..={limit} and agent count at least 1"
            )));
        }
        let symbols = SymbolTable::from_signature(sig);
        let arities = symbols.arities();
        let partitions = if epistemic { set_partitions(n) } else { Vec::new() };
        let rel_radix = if epistemic {
            partitions.len() as u64
        } else {
            1u64 << (n * n)
        };
        let mut radix = vec![rel_radix; k];
        for (pred, &(_, ar)) in &symbols.preds {
            let tuples = (k as u64)
                .checked_pow(ar as u32)
                .filter(|&t| t < 64)
                .ok_or_else(|| SearchError::TooLarge(format!("{k}^{ar} tuples for `{pred}`")))?;
            radix.extend(std::iter::repeat_n(1u64 << tuples, n));
        }
        radix.extend(std::iter::repeat_n(k as u64, symbols.names.len() * n));
        Ok(Space {
            n,
            k,
            epistemic,
            names: symbols.names.len(),
            symbols,
            arities,
            partitions,
            radix,
        })
    }

    pub fn radix(&self) -> &[u64] {
        &self.radix
    }

    /// Number of relation configurations (all agents together), if it fits.
    pub fn relation_configs(&self) -> Option<u64> {
        self.radix[..self.k].iter().try_fold(1u64, |acc, &r| acc.checked_mul(r))
    }

    /// Number of models in this space, if it fits.
    pub fn count(&self) -> Option<u128> {
        self.radix.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
    }

    /// The model whose digits are all zero.
    pub fn first(&self) -> IndexedModel {
        let mut m = IndexedModel::blank(self.n, self.k, self.arities.clone(), self.names);
        for pos in 0..self.radix.len() {
            self.apply(&mut m, pos, 0);
        }
        m
    }

    /// Sets digit `pos` of `m` to `value`.
    pub fn apply(&self, m: &mut IndexedModel, pos: usize, value: u64) {
        let (n, k) = (self.n, self.k);
        if pos < k {
            for w in 0..n {
                let row = m.succ_row_mut(pos, w);
                if self.epistemic {
                    let blocks = &self.partitions[value as usize];
                    let mut mask = 0u64;
                    for v in 0..n {
                        if blocks[v] == blocks[w] {
                            mask |= 1 << v;
                        }
                    }
                    row.set_low_word(mask);
                } else {
                    row.set_low_word((value >> (w * n)) & ((1u64 << n) - 1));
                }
            }
            return;
        }
        let pos = pos - k;
        let rho_digits = self.arities.len() * n;
        if pos < rho_digits {
            let row: &mut BitRow = &mut m.rho[pos];
            row.set_low_word(value);
            return;
        }
        let pos = pos - rho_digits;
        m.set_eta(pos / n, pos % n, value as u32);
    }

    /// Sets the relation digits from a single configuration index (first
    /// agent most significant).
    pub fn apply_relations(&self, m: &mut IndexedModel, mut config: u64) {
        for a in (0..self.k).rev() {
            let r = self.radix[a];
            self.apply(m, a, config % r);
            config /= r;
        }
    }
}

/// Mixed-radix counter over a suffix of a space's digits.
#[derive(Clone, Debug)]
pub struct Odometer {
    from: usize,
    digits: Vec<u64>,
}

impl Odometer {
    /// Counts over digits `from..`; they are assumed to be zero in the
    /// model being driven.
    pub fn new(space: &Space, from: usize) -> Odometer {
        Odometer {
            from,
            digits: vec![0; space.radix.len() - from],
        }
    }

    /// Steps to the next configuration and writes the changed digits into
    /// `m`. Returns false (with all digits reset to zero) after the last one.
    pub fn advance(&mut self, space: &Space, m: &mut IndexedModel) -> bool {
        for i in (0..self.digits.len()).rev() {
            let pos = self.from + i;
            self.digits[i] += 1;
            if self.digits[i] < space.radix[pos] {
                space.apply(m, pos, self.digits[i]);
                return true;
            }
            self.digits[i] = 0;
            space.apply(m, pos, 0);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_are_bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
        assert_eq!(
            set_partitions(3),
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2]
            ]
        );
    }

    #[test]
    fn odometer_visits_every_configuration_once() {
        let sig = Signature {
            predicates: [("P".to_string(), 1)].into(),
            names: ["a".to_string()].into(),
            variables: Default::default(),
        };
        let space = Space::new(&sig, 2, 2, true).unwrap();
        let mut m = space.first();
        let mut seen = std::collections::HashSet::new();
        seen.insert(format!("{m:?}"));
        let mut od = Odometer::new(&space, 0);
        while od.advance(&space, &mut m) {
            assert!(seen.insert(format!("{m:?}")));
        }
        assert_eq!(seen.len() as u128, space.count().unwrap());
        assert_eq!(m, space.first());
    }

    #[test]
    fn oversized_spaces_are_refused() {
        let sig = Signature {
            predicates: [("R".to_string(), 4)].into(),
            ..Default::default()
        };
        assert!(matches!(Space::new(&sig, 1, 3, true), Err(SearchError::TooLarge(_))));
        assert!(matches!(
            Space::new(&Signature::default(), 8, 1, false),
            Err(SearchError::Bounds(_))
        ));
    }
}
