use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Index of one element of a domain's fixed universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniverseId(pub usize);

impl UniverseId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for UniverseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<usize> for UniverseId {
    fn from(v: usize) -> Self {
        UniverseId(v)
    }
}

/// A subset of `[0, universe_size)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PrunedSet {
    bits: FixedBitSet,
}

impl PrunedSet {
    pub fn empty(universe_size: usize) -> Self {
        PrunedSet { bits: FixedBitSet::with_capacity(universe_size) }
    }

    pub fn full(universe_size: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe_size);
        bits.insert_range(..);
        PrunedSet { bits }
    }

    pub fn from_ids<I>(universe_size: usize, ids: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<UniverseId>,
    {
        let mut s = Self::empty(universe_size);
        for id in ids {
            s.insert(id.into())?;
        }
        Ok(s)
    }

    /// Subset whose membership is given by bit `i` of `mask`. Universe must be ≤ 64.
    pub fn from_mask(universe_size: usize, mask: u64) -> Self {
        assert!(universe_size <= 64);
        let mut s = Self::empty(universe_size);
        for i in 0..universe_size {
            if mask >> i & 1 == 1 {
                s.bits.insert(i);
            }
        }
        s
    }

    pub fn universe_size(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, id: UniverseId) -> bool {
        self.bits.contains(id.0)
    }

    pub fn insert(&mut self, id: UniverseId) -> Result<bool> {
        if id.0 >= self.bits.len() {
            return Err(Error::IdOutOfRange { id: id.0, size: self.bits.len() });
        }
        Ok(!self.bits.put(id.0))
    }

    pub fn remove(&mut self, id: UniverseId) -> bool {
        let had = self.contains(id);
        self.bits.set(id.0, false);
        had
    }

    /// Flips membership of `id`.
    pub fn toggle(&mut self, id: UniverseId) {
        self.bits.toggle(id.0);
    }

    pub fn union_with(&mut self, other: &PrunedSet) {
        debug_assert_eq!(self.universe_size(), other.universe_size());
        self.bits.union_with(&other.bits);
    }

    pub fn is_subset(&self, other: &PrunedSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_superset(&self, other: &PrunedSet) -> bool {
        self.bits.is_superset(&other.bits)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = UniverseId> + '_ {
        self.bits.ones().map(UniverseId)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }
}

impl fmt::Debug for PrunedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrunedSet({}/{}) ", self.len(), self.universe_size())?;
        f.debug_set().entries(self.bits.ones()).finish()
    }
}
