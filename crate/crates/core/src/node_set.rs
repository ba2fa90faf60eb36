//! Dense sets of node ids, the currency of all attractor computations.

use std::fmt;

/// A set of node ids backed by a fixed-width bit vector.
///
/// Every set is created for a specific game and shares that game's node
/// count as its capacity. Set operations require equal capacities.
/// Iteration is always in ascending node-id order, which keeps every
/// computation in the crate deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    bits: Vec<u64>,
    capacity: u32,
}

impl NodeSet {
    /// The empty set over `capacity` node ids.
    pub fn new(capacity: u32) -> Self {
        let words = (capacity as usize).div_ceil(64);
        NodeSet { bits: vec![0; words], capacity }
    }

    /// The set containing all ids `0..capacity`.
    pub fn full(capacity: u32) -> Self {
        let mut set = NodeSet::new(capacity);
        for word in set.bits.iter_mut() {
            *word = u64::MAX;
        }
        set.clear_tail();
        set
    }

    pub fn from_nodes(capacity: u32, nodes: impl IntoIterator<Item = u32>) -> Self {
        let mut set = NodeSet::new(capacity);
        for v in nodes {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn contains(&self, v: u32) -> bool {
        debug_assert!(v < self.capacity);
        self.bits[(v / 64) as usize] & (1 << (v % 64)) != 0
    }

    /// Inserts `v`; returns true if it was not present before.
    pub fn insert(&mut self, v: u32) -> bool {
        debug_assert!(v < self.capacity);
        let word = &mut self.bits[(v / 64) as usize];
        let mask = 1 << (v % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    /// Removes `v`; returns true if it was present.
    pub fn remove(&mut self, v: u32) -> bool {
        debug_assert!(v < self.capacity);
        let word = &mut self.bits[(v / 64) as usize];
        let mask = 1 << (v % 64);
        let present = *word & mask != 0;
        *word &= !mask;
        present
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u32> {
        for (i, &word) in self.bits.iter().enumerate() {
            if word != 0 {
                return Some(i as u32 * 64 + word.trailing_zeros());
            }
        }
        None
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &NodeSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= !b;
        }
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        debug_assert_eq!(self.capacity, other.capacity);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &NodeSet) -> bool {
        debug_assert_eq!(self.capacity, other.capacity);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & b == 0)
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { set: self, word_index: 0, current: self.bits.first().copied().unwrap_or(0) }
    }

    fn clear_tail(&mut self) {
        let tail = self.capacity % 64;
        if tail != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

pub struct Iter<'a> {
    set: &'a NodeSet,
    word_index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.current == 0 {
            self.word_index += 1;
            if self.word_index >= self.set.bits.len() {
                return None;
            }
            self.current = self.set.bits[self.word_index];
        }
        let bit = self.current.trailing_zeros();
        self.current &= self.current - 1;
        Some(self.word_index as u32 * 64 + bit)
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        let mut s = NodeSet::new(130);
        assert!(s.is_empty());
        assert!(s.insert(0));
        assert!(s.insert(64));
        assert!(s.insert(129));
        assert!(!s.insert(64));
        assert_eq!(s.len(), 3);
        assert!(s.contains(129));
        assert!(!s.contains(1));
        assert!(s.remove(64));
        assert!(!s.remove(64));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn full_has_exact_tail() {
        let s = NodeSet::full(70);
        assert_eq!(s.len(), 70);
        assert_eq!(s.first(), Some(0));
        assert!(s.contains(69));
    }

    #[test]
    fn set_algebra_laws() {
        let a = NodeSet::from_nodes(10, [1, 3, 5, 7]);
        let b = NodeSet::from_nodes(10, [3, 4, 5]);

        let mut union = a.clone();
        union.union_with(&b);
        assert_eq!(union.iter().collect::<Vec<_>>(), vec![1, 3, 4, 5, 7]);

        // idempotent union
        let mut twice = union.clone();
        twice.union_with(&b);
        assert_eq!(twice, union);

        let mut inter = a.clone();
        inter.intersect_with(&b);
        assert_eq!(inter.iter().collect::<Vec<_>>(), vec![3, 5]);
        assert!(inter.is_subset_of(&a));
        assert!(inter.is_subset_of(&b));

        let mut diff = a.clone();
        diff.subtract(&b);
        assert_eq!(diff.iter().collect::<Vec<_>>(), vec![1, 7]);
        assert!(diff.is_disjoint_from(&b));
    }

    #[test]
    fn iteration_is_ascending() {
        let s = NodeSet::from_nodes(200, [150, 3, 77, 3, 199, 0]);
        let ids: Vec<u32> = s.iter().collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }
}
