//! Finite Z-linear combinations of keys: virtual root multisets and
//! elements of character group rings.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignedMultiset<K: Ord> {
    entries: BTreeMap<K, i64>,
}

impl<K: Ord> Default for SignedMultiset<K> {
    fn default() -> Self {
        SignedMultiset {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SignedMultiset<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(k: K) -> Self {
        Self::with_multiplicity(k, 1)
    }

    pub fn with_multiplicity(k: K, m: i64) -> Self {
        let mut s = Self::new();
        s.insert(k, m);
        s
    }

    pub fn insert(&mut self, k: K, m: i64) {
        if m == 0 {
            return;
        }
        match self.entries.entry(k) {
            Entry::Vacant(v) => {
                v.insert(m);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += m;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn multiplicity(&self, k: &K) -> i64 {
        self.entries.get(k).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.entries.iter().map(|(k, m)| (k, *m))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Sum of multiplicities (the virtual rank).
    pub fn rank(&self) -> i64 {
        self.entries.values().sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (k, m) in other.iter() {
            s.insert(k.clone(), m);
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::new();
        }
        SignedMultiset {
            entries: self
                .entries
                .iter()
                .map(|(k, m)| (k.clone(), m * c))
                .collect(),
        }
    }

    pub fn positive_part(&self) -> Self {
        SignedMultiset {
            entries: self
                .entries
                .iter()
                .filter(|(_, m)| **m > 0)
                .map(|(k, m)| (k.clone(), *m))
                .collect(),
        }
    }

    /// The negative part with multiplicities made positive.
    pub fn negative_part(&self) -> Self {
        SignedMultiset {
            entries: self
                .entries
                .iter()
                .filter(|(_, m)| **m < 0)
                .map(|(k, m)| (k.clone(), -*m))
                .collect(),
        }
    }

    /// Keys listed with repetition; panics on negative multiplicities.
    pub fn to_vec(&self) -> Vec<K> {
        let mut v = Vec::new();
        for (k, m) in self.iter() {
            assert!(m >= 0, "negative multiplicity");
            v.extend(std::iter::repeat_n(k.clone(), m as usize));
        }
        v
    }

    pub fn map_keys(&self, mut f: impl FnMut(&K) -> K) -> Self {
        let mut s = Self::new();
        for (k, m) in self.iter() {
            s.insert(f(k), m);
        }
        s
    }

    /// Group-ring product with `combine` as the key operation.
    pub fn mul(&self, other: &Self, mut combine: impl FnMut(&K, &K) -> K) -> Self {
        let mut s = Self::new();
        for (a, m) in self.iter() {
            for (b, n) in other.iter() {
                s.insert(combine(a, b), m * n);
            }
        }
        s
    }
}

impl<K: Ord + Clone> FromIterator<K> for SignedMultiset<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut s = Self::new();
        for k in iter {
            s.insert(k, 1);
        }
        s
    }
}

/// Coefficients `λ^0..λ^N` of `prod_k (1 + [k] t)^(m_k)` in the group ring,
/// where `unit` is the identity key and `combine` the key operation. A line
/// with negative multiplicity contributes `sum_j (-1)^j [k]^j t^j`.
pub fn exterior_powers<K: Ord + Clone>(
    s: &SignedMultiset<K>,
    trunc: usize,
    unit: &K,
    mut combine: impl FnMut(&K, &K) -> K,
) -> Vec<SignedMultiset<K>> {
    let mut acc: Vec<SignedMultiset<K>> = vec![SignedMultiset::new(); trunc + 1];
    acc[0] = SignedMultiset::singleton(unit.clone());
    for (k, m) in s.iter() {
        // powers [k]^j
        let mut pows = vec![unit.clone()];
        for j in 1..=trunc {
            let next = combine(&pows[j - 1], k);
            pows.push(next);
        }
        for _ in 0..m.unsigned_abs() {
            let mut next: Vec<SignedMultiset<K>> = vec![SignedMultiset::new(); trunc + 1];
            for (d, a) in acc.iter().enumerate() {
                if a.is_empty() {
                    continue;
                }
                if m > 0 {
                    next[d] = next[d].add(a);
                    if d < trunc {
                        next[d + 1] = next[d + 1].add(&a.map_keys(|x| combine(x, k)));
                    }
                } else {
                    for (j, p) in pows.iter().enumerate().take(trunc - d + 1) {
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        next[d + j] = next[d + j].add(&a.map_keys(|x| combine(x, p)).scale(sign));
                    }
                }
            }
            acc = next;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: &[(i64, i64)]) -> SignedMultiset<i64> {
        let mut s = SignedMultiset::new();
        for &(k, m) in v {
            s.insert(k, m);
        }
        s
    }

    #[test]
    fn insert_cancels() {
        let mut s = ms(&[(1, 2), (3, -1)]);
        s.insert(3, 1);
        assert_eq!(s, ms(&[(1, 2)]));
        assert_eq!(s.rank(), 2);
        assert_eq!(s.sub(&s), SignedMultiset::new());
    }

    #[test]
    fn exterior_powers_of_lines() {
        // keys add; {1, 2}: λ^1 = {1, 2}, λ^2 = {3}
        let s = ms(&[(1, 1), (2, 1)]);
        let l = exterior_powers(&s, 3, &0, |a, b| a + b);
        assert_eq!(l[0], ms(&[(0, 1)]));
        assert_eq!(l[1], ms(&[(1, 1), (2, 1)]));
        assert_eq!(l[2], ms(&[(3, 1)]));
        assert!(l[3].is_empty());
    }

    #[test]
    fn exterior_powers_of_negative_line() {
        let s = ms(&[(5, -1)]);
        let l = exterior_powers(&s, 3, &0, |a, b| a + b);
        assert_eq!(l[1], ms(&[(5, -1)]));
        assert_eq!(l[2], ms(&[(10, 1)]));
        assert_eq!(l[3], ms(&[(15, -1)]));
        // λ_t(x) λ_t(-x) = 1
        let pos = exterior_powers(&s.neg(), 3, &0, |a, b| a + b);
        for n in 1..=3 {
            let mut c = SignedMultiset::new();
            for i in 0..=n {
                c = c.add(&l[i].mul(&pos[n - i], |a, b| a + b));
            }
            assert!(c.is_empty());
        }
    }
}
