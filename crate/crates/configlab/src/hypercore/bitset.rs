//! Fixed-width vertex sets and growable edge-index sets.
//!
//! `VertexSet` is two machine words wide, which covers the desk-scale cap of
//! 128 vertices; span arithmetic in the detectors lives entirely on these.
//! `EdgeIndexSet` grows with the hypergraph since edge counts are unbounded.

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Hard cap on vertex count, dictated by the fixed [`VertexSet`] width.
pub const MAX_VERTICES: usize = 128;

/// A set of vertex ids in `0..128`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: [u64; 2],
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.words[v >> 6] |= 1u64 << (v & 63);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < MAX_VERTICES);
        self.words[v >> 6] &= !(1u64 << (v & 63));
    }

    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < MAX_VERTICES);
        self.words[v >> 6] & (1u64 << (v & 63)) != 0
    }

    pub fn len(&self) -> usize {
        (self.words[0].count_ones() + self.words[1].count_ones()) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.words == [0, 0]
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            words: [
                self.words[0] | other.words[0],
                self.words[1] | other.words[1],
            ],
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        self.words[0] |= other.words[0];
        self.words[1] |= other.words[1];
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            words: [
                self.words[0] & other.words[0],
                self.words[1] & other.words[1],
            ],
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self {
            words: [
                self.words[0] & !other.words[0],
                self.words[1] & !other.words[1],
            ],
        }
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        ((self.words[0] & other.words[0]).count_ones()
            + (self.words[1] & other.words[1]).count_ones()) as usize
    }

    /// Size of `self \ other` without materializing the difference.
    pub fn difference_len(&self, other: &Self) -> usize {
        ((self.words[0] & !other.words[0]).count_ones()
            + (self.words[1] & !other.words[1]).count_ones()) as usize
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words[0] & !other.words[0] == 0 && self.words[1] & !other.words[1] == 0
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words[0] & other.words[0] == 0 && self.words[1] & other.words[1] == 0
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let words = self.words;
        (0..2).flat_map(move |w| {
            let mut bits = words[w];
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some((w << 6) | tz)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = Self::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of edge indices, backed by a growable bit vector.
///
/// Trailing zero words are trimmed after every mutation so that derived
/// equality and hashing see a unique representation.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgeIndexSet {
    words: Vec<u64>,
}

impl EdgeIndexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: usize) {
        let w = i >> 6;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (i & 63);
    }

    pub fn remove(&mut self, i: usize) {
        let w = i >> 6;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (i & 63));
            self.trim();
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        let w = i >> 6;
        w < self.words.len() && self.words[w] & (1u64 << (i & 63)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        if other.words.len() > out.words.len() {
            out.words.resize(other.words.len(), 0);
        }
        for (w, o) in out.words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().enumerate().all(|(i, w)| {
            let o = other.words.get(i).copied().unwrap_or(0);
            w & !o == 0
        })
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some((w << 6) | tz)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<usize> for EdgeIndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = Self::new();
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl fmt::Debug for EdgeIndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// Both set types serialize as ascending index arrays.

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.len()))?;
        for i in self.iter() {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = VertexSet;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a sequence of vertex ids below 128")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut set = VertexSet::new();
                while let Some(i) = seq.next_element::<usize>()? {
                    if i >= MAX_VERTICES {
                        return Err(serde::de::Error::custom(format!(
                            "vertex id {i} exceeds the {MAX_VERTICES}-vertex cap"
                        )));
                    }
                    set.insert(i);
                }
                Ok(set)
            }
        }
        de.deserialize_seq(V)
    }
}

impl Serialize for EdgeIndexSet {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.len()))?;
        for i in self.iter() {
            seq.serialize_element(&i)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EdgeIndexSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = EdgeIndexSet;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a sequence of edge indices")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut set = EdgeIndexSet::new();
                while let Some(i) = seq.next_element::<usize>()? {
                    set.insert(i);
                }
                Ok(set)
            }
        }
        de.deserialize_seq(V)
    }
}
