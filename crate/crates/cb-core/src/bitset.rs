//! Fixed-width bitsets used as carriers for event sets, past/future sets
//! and closure-matrix rows.

/// A set of event indices over a universe of fixed size `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct EventSet {
    n: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for EventSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl EventSet {
    pub fn new(n: usize) -> Self {
        EventSet { n, words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for i in 0..n {
            s.insert(i as u32);
        }
        s
    }

    pub fn from_indices(n: usize, idx: &[u32]) -> Self {
        let mut s = Self::new(n);
        for &i in idx {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn universe_len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, i: u32) {
        debug_assert!((i as usize) < self.n);
        self.words[(i / 64) as usize] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: u32) {
        self.words[(i / 64) as usize] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        (i as usize) < self.n && self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn union_with(&mut self, other: &EventSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &EventSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &EventSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn union(&self, other: &EventSet) -> EventSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &EventSet) -> EventSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &EventSet) -> EventSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &EventSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Count of members of `self` that are not members of `other`.
    pub fn difference_count(&self, other: &EventSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<u32> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some((wi * 64) as u32 + w.trailing_zeros());
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some((wi * 64) as u32 + b)
                }
            })
        })
    }

    /// 64-bit FNV-1a over the ascending member indices, each serialized as a
    /// little-endian u32. Stable identity for deduplication and reports.
    pub fn fnv1a(&self) -> u64 {
        const OFFSET: u64 = 0xcbf29ce484222325;
        const PRIME: u64 = 0x100000001b3;
        let mut h = OFFSET;
        for i in self.iter() {
            for byte in i.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = EventSet::new(130);
        a.insert(0);
        a.insert(64);
        a.insert(129);
        assert!(a.contains(64));
        assert!(!a.contains(63));
        assert_eq!(a.count(), 3);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);

        let b = EventSet::from_indices(130, &[64]);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.difference_count(&b), 2);
        assert!(a.intersects(&b));

        let mut c = a.clone();
        c.difference_with(&b);
        assert!(!c.contains(64));
        assert_eq!(c.count(), 2);
    }

    #[test]
    fn hash_depends_on_members_only() {
        let a = EventSet::from_indices(100, &[3, 17, 99]);
        let mut b = EventSet::new(100);
        b.insert(99);
        b.insert(3);
        b.insert(17);
        assert_eq!(a.fnv1a(), b.fnv1a());
        let c = EventSet::from_indices(100, &[3, 17]);
        assert_ne!(a.fnv1a(), c.fnv1a());
    }

    #[test]
    fn empty_and_full() {
        let e = EventSet::new(70);
        assert!(e.is_empty());
        assert_eq!(e.first(), None);
        let f = EventSet::full(70);
        assert_eq!(f.count(), 70);
        assert!(e.is_subset(&f));
    }
}
