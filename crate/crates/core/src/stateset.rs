//! Subsets of automaton states.
//!
//! A [`StateSet`] is a bitset over the universe `0..n`. Universes of up to 64
//! states fit in a single inline machine word; larger universes spill onto the
//! heap with one `u64` per 64 states. The number of words is fixed by the
//! universe size, so two sets over the same universe are equal (and hash
//! equally) exactly when they have the same members.

use std::cmp::Ordering;
use std::fmt;

use smallvec::{smallvec, SmallVec};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    bits: SmallVec<[u64; 1]>,
}

impl StateSet {
    fn words_for(universe: usize) -> usize {
        universe.div_ceil(WORD_BITS).max(1)
    }

    /// The empty subset of `0..universe`.
    pub fn empty(universe: usize) -> Self {
        StateSet {
            bits: smallvec![0; Self::words_for(universe)],
        }
    }

    /// All of `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for q in 0..universe {
            set.insert(q);
        }
        set
    }

    pub fn singleton(universe: usize, q: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(q);
        set
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(universe: usize, states: I) -> Self {
        let mut set = Self::empty(universe);
        for q in states {
            set.insert(q);
        }
        set
    }

    pub fn insert(&mut self, q: usize) {
        self.bits[q / WORD_BITS] |= 1 << (q % WORD_BITS);
    }

    pub fn contains(&self, q: usize) -> bool {
        self.bits
            .get(q / WORD_BITS)
            .is_some_and(|w| w & (1 << (q % WORD_BITS)) != 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_singleton(&self) -> bool {
        self.len() == 1
    }

    /// The only member, if the set has exactly one.
    pub fn single_member(&self) -> Option<usize> {
        if self.is_singleton() {
            self.iter().next()
        } else {
            None
        }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .all(|(a, b)| a & !b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Members<'_> {
        Members {
            bits: &self.bits,
            word: 0,
            current: self.bits.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Ascending iterator over the members of a [`StateSet`].
pub struct Members<'a> {
    bits: &'a [u64],
    word: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * WORD_BITS + bit);
            }
            self.word += 1;
            self.current = *self.bits.get(self.word)?;
        }
    }
}

/// Canonical order: lexicographic on the ascending member sequence, so
/// `{0,3} < {1,2} < {1,2,3} < {2}`.
impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints as comma-joined state indices, e.g. `0,2,3`.
impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn members_are_ascending_across_words() {
        let set = StateSet::from_states(130, [129, 0, 64, 63, 5]);
        assert_eq!(set.to_vec(), vec![0, 5, 63, 64, 129]);
        assert_eq!(set.len(), 5);
        assert!(set.contains(64));
        assert!(!set.contains(65));
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let a = StateSet::from_states(4, [0, 3]);
        let b = StateSet::from_states(4, [1, 2]);
        let c = StateSet::from_states(4, [1, 2, 3]);
        let d = StateSet::singleton(4, 2);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn subset_and_singletons() {
        let full = StateSet::full(70);
        let s = StateSet::singleton(70, 69);
        assert!(s.is_subset(&full));
        assert!(!full.is_subset(&s));
        assert_eq!(s.single_member(), Some(69));
        assert_eq!(full.single_member(), None);
        assert!(StateSet::empty(3).is_empty());
        assert_eq!(format!("{:?}", StateSet::from_states(5, [4, 1])), "{1,4}");
    }

    proptest::proptest! {
        #[test]
        fn behaves_like_btreeset(xs in proptest::collection::vec(0usize..100, 0..20),
                                 ys in proptest::collection::vec(0usize..100, 0..20)) {
            let a = StateSet::from_states(100, xs.iter().copied());
            let b = StateSet::from_states(100, ys.iter().copied());
            let ra: BTreeSet<usize> = xs.into_iter().collect();
            let rb: BTreeSet<usize> = ys.into_iter().collect();
            proptest::prop_assert_eq!(a.to_vec(), ra.iter().copied().collect::<Vec<_>>());
            proptest::prop_assert_eq!(a.is_subset(&b), ra.is_subset(&rb));
            proptest::prop_assert_eq!(a.cmp(&b), ra.iter().cmp(rb.iter()));
            proptest::prop_assert_eq!(a == b, ra == rb);
        }
    }
}
