//! Sumsets of residues modulo `n`, used to reason about walks in cycles.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("moduli differ: {0} and {1}")]
    ModulusMismatch(usize, usize),
    #[error("iteration count must be at least 1")]
    ZeroCount,
    #[error("walks are defined on cycles with n >= 3, got {0}")]
    CycleTooSmall(usize),
}

/// A set of residues modulo `n`, stored as a bitset over `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    bits: FixedBitSet,
}

impl ResidueSet {
    /// Builds a set from arbitrary integers, reducing each modulo `n`.
    pub fn new<I: IntoIterator<Item = i64>>(n: usize, elements: I) -> Result<Self, ModArithError> {
        if n == 0 {
            return Err(ModArithError::ZeroModulus);
        }
        let mut bits = FixedBitSet::with_capacity(n);
        for e in elements {
            bits.insert(e.rem_euclid(n as i64) as usize);
        }
        Ok(ResidueSet { bits })
    }

    pub fn empty(n: usize) -> Result<Self, ModArithError> {
        Self::new(n, [])
    }

    pub fn modulus(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.bits.contains(r)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Adds `k` to every element.
    pub fn shifted(&self, k: i64) -> ResidueSet {
        let n = self.modulus();
        ResidueSet::new(n, self.iter().map(|r| r as i64 + k)).expect("nonzero modulus")
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.iter().collect::<Vec<_>>(), self.modulus())
    }
}

/// `A +_n B = {(a + b) mod n}`.
pub fn sumset_mod(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet, ModArithError> {
    let n = a.modulus();
    if n != b.modulus() {
        return Err(ModArithError::ModulusMismatch(n, b.modulus()));
    }
    let mut bits = FixedBitSet::with_capacity(n);
    for x in a.iter() {
        for y in b.iter() {
            bits.insert((x + y) % n);
        }
    }
    Ok(ResidueSet { bits })
}

/// `j ×_n A`, the j-fold sumset `A +_n ... +_n A`.
pub fn iterated_sumset(j: usize, a: &ResidueSet) -> Result<ResidueSet, ModArithError> {
    if j == 0 {
        return Err(ModArithError::ZeroCount);
    }
    let mut acc = a.clone();
    for _ in 1..j {
        acc = sumset_mod(&acc, a)?;
    }
    Ok(acc)
}

/// Endpoints of walks of length `len` from `from` in the cycle `C_n`.
pub fn reachable_by_walk(n: usize, len: usize, from: usize) -> Result<ResidueSet, ModArithError> {
    if n < 3 {
        return Err(ModArithError::CycleTooSmall(n));
    }
    let start = ResidueSet::new(n, [from as i64])?;
    if len == 0 {
        return Ok(start);
    }
    let steps = iterated_sumset(len, &ResidueSet::new(n, [-1, 1])?)?;
    Ok(steps.shifted(from as i64))
}
