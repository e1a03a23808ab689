use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::model::{Element, Structure};

/// Largest `n^arity` for which membership is tested through a dense bitset.
const DENSE_LIMIT: usize = 1 << 24;

/// Membership index for one relation of a template.
#[derive(Debug, Clone)]
pub(crate) struct RelIndex {
    n: usize,
    pub(crate) arity: usize,
    dense: Option<FixedBitSet>,
    sparse: HashSet<Vec<Element>>,
    pub(crate) tuples: Vec<Vec<Element>>,
    /// For binary relations over at most 64 elements: `fwd[a]` has bit `b`
    /// set iff `(a, b)` is in the relation, `bwd[b]` bit `a` likewise.
    pub(crate) fwd: Arc<[u64]>,
    pub(crate) bwd: Arc<[u64]>,
}

impl RelIndex {
    pub(crate) fn build(b: &Structure, idx: usize) -> Self {
        let n = b.domain_size();
        let arity = b.signature().relations()[idx].arity;
        let tuples: Vec<Vec<Element>> = b.tuples(idx).iter().cloned().collect();
        let dense = n
            .checked_pow(arity as u32)
            .filter(|&size| size <= DENSE_LIMIT)
            .map(|size| {
                let mut bits = FixedBitSet::with_capacity(size);
                for t in &tuples {
                    bits.insert(code(n, t));
                }
                bits
            });
        let sparse = if dense.is_some() {
            HashSet::new()
        } else {
            tuples.iter().cloned().collect()
        };
        let (mut fwd, mut bwd) = (Vec::new(), Vec::new());
        if arity == 2 && n <= 64 {
            fwd = vec![0u64; n];
            bwd = vec![0u64; n];
            for t in &tuples {
                fwd[t[0]] |= 1 << t[1];
                bwd[t[1]] |= 1 << t[0];
            }
        }
        let (fwd, bwd) = (fwd.into(), bwd.into());
        RelIndex {
            n,
            arity,
            dense,
            sparse,
            tuples,
            fwd,
            bwd,
        }
    }

    pub(crate) fn contains(&self, t: &[Element]) -> bool {
        match &self.dense {
            Some(bits) => bits.contains(code(self.n, t)),
            None => self.sparse.contains(t),
        }
    }

    /// Membership of the tuple `(value(0), ..., value(arity - 1))`.
    #[inline]
    pub(crate) fn contains_with(&self, value: impl Fn(usize) -> Element) -> bool {
        match &self.dense {
            Some(bits) => bits.contains((0..self.arity).fold(0, |acc, k| acc * self.n + value(k))),
            None => self.sparse.contains(&(0..self.arity).map(value).collect::<Vec<_>>()),
        }
    }

    pub(crate) fn has_masks(&self) -> bool {
        !self.fwd.is_empty()
    }

    /// Elements `a` with `(a, a)` in a binary relation.
    pub(crate) fn diagonal_mask(&self) -> u64 {
        (0..self.n)
            .filter(|&a| self.fwd[a] >> a & 1 == 1)
            .fold(0, |m, a| m | 1 << a)
    }
}

fn code(n: usize, t: &[Element]) -> usize {
    t.iter().fold(0, |acc, &e| acc * n + e)
}
