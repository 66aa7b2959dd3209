//! Ground sets and element sets.
//!
//! Elements are dense indices `0..n`. The index order is fixed at
//! construction and is the canonical total order used by every tie-break.

use std::borrow::Cow;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type Element = usize;

/// A finite ground set of `size` elements with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(size: usize) -> Self {
        GroundSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::invalid(format!("duplicate element label {label:?}")));
            }
        }
        Ok(GroundSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, element: Element) -> Cow<'_, str> {
        match &self.labels {
            Some(labels) => Cow::Borrowed(labels[element].as_str()),
            None => Cow::Owned(element.to_string()),
        }
    }

    /// Resolves a label, falling back to a decimal index.
    pub fn lookup(&self, token: &str) -> Option<Element> {
        if let Some(labels) = &self.labels {
            if let Some(pos) = labels.iter().position(|l| l == token) {
                return Some(pos);
            }
        }
        token.parse::<usize>().ok().filter(|&e| e < self.size)
    }

    pub fn check(&self, element: Element) -> Result<()> {
        if element < self.size {
            Ok(())
        } else {
            Err(Error::UnknownElement {
                element,
                size: self.size,
            })
        }
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.size)
    }

    pub fn full_set(&self) -> ElementSet {
        let mut s = ElementSet::empty(self.size);
        s.bits.insert_range(..);
        s
    }
}

/// A subset of a ground set, stored as a bit set sized to the ground set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: FixedBitSet,
}

impl ElementSet {
    pub fn empty(capacity: usize) -> Self {
        ElementSet {
            bits: FixedBitSet::with_capacity(capacity),
        }
    }

    pub fn from_elements(capacity: usize, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut s = ElementSet::empty(capacity);
        for e in elements {
            if e >= capacity {
                return Err(Error::UnknownElement {
                    element: e,
                    size: capacity,
                });
            }
            s.bits.insert(e);
        }
        Ok(s)
    }

    /// Builds the set whose members are the one-bits of `mask`.
    pub fn from_mask(capacity: usize, mask: u64) -> Self {
        debug_assert!(capacity <= 64);
        let mut s = ElementSet::empty(capacity);
        for e in 0..capacity {
            if mask >> e & 1 == 1 {
                s.bits.insert(e);
            }
        }
        s
    }

    /// The set as a bit mask. Only valid for ground sets of at most 64 elements.
    pub fn mask(&self) -> u64 {
        debug_assert!(self.capacity() <= 64);
        self.bits.ones().fold(0u64, |m, e| m | 1 << e)
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits.contains(e)
    }

    pub fn insert(&mut self, e: Element) {
        self.bits.insert(e);
    }

    pub fn remove(&mut self, e: Element) {
        self.bits.set(e, false);
    }

    pub fn with(&self, e: Element) -> Self {
        let mut s = self.clone();
        s.bits.insert(e);
        s
    }

    pub fn without(&self, e: Element) -> Self {
        let mut s = self.clone();
        s.bits.set(e, false);
        s
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &ElementSet) -> Self {
        let mut s = self.clone();
        s.bits.union_with(&other.bits);
        s
    }

    pub fn difference(&self, other: &ElementSet) -> Self {
        let mut s = self.clone();
        s.bits.difference_with(&other.bits);
        s
    }

    pub fn intersection(&self, other: &ElementSet) -> Self {
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        s
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
