//! Fixed-width bitsets over hypothesis indices.

use std::fmt;

/// A set of row indices into a [`FiniteClass`](super::FiniteClass).
///
/// The width is fixed at construction; set operations require equal widths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HypSet {
    width: usize,
    words: Vec<u64>,
}

impl HypSet {
    pub fn empty(width: usize) -> Self {
        Self {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut set = Self::empty(width);
        for (i, word) in set.words.iter_mut().enumerate() {
            let lo = i * 64;
            let n = (width - lo).min(64);
            *word = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        }
        set
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(width);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &HypSet) -> HypSet {
        debug_assert_eq!(self.width, other.width);
        HypSet {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &HypSet) -> HypSet {
        debug_assert_eq!(self.width, other.width);
        HypSet {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    /// Both `self ∩ other` and `self \ other` are non-empty.
    pub fn splits(&self, other: &HypSet) -> bool {
        let mut inside = false;
        let mut outside = false;
        for (a, b) in self.words.iter().zip(&other.words) {
            inside |= a & b != 0;
            outside |= a & !b != 0;
            if inside && outside {
                return true;
            }
        }
        false
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for HypSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
