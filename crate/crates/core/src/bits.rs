//! Fixed-width bit sets ordered as unsigned integers.

use std::cmp::Ordering;
use std::fmt;

/// A set of indices below a fixed width.
///
/// Ordering compares the sets as binary numbers where index `i` carries
/// weight `2^i`, so the empty set is smallest.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let had = self.contains(i);
        self.words[i / 64] |= 1 << (i % 64);
        !had
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i);
        } else {
            self.remove(i);
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0) && self.words.len() <= other.words.len()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for k in (0..n).rev() {
            let a = self.words.get(k).copied().unwrap_or(0);
            let b = other.words.get(k).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_order() {
        let a = BitSet::from_indices(70, [0, 1]);
        let b = BitSet::from_indices(70, [2]);
        let c = BitSet::from_indices(70, [65]);
        assert!(BitSet::new(70) < a);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn subset_and_union() {
        let mut a = BitSet::from_indices(10, [1, 3]);
        let b = BitSet::from_indices(10, [1, 3, 5]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        a.union_with(&BitSet::from_indices(10, [5]));
        assert_eq!(a, b);
        assert_eq!(a.count(), 3);
    }
}
