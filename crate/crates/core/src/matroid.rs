//! Matroid independence oracles.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{Element, ElementSet, GroundSet};
use crate::validate;

/// A user/resource pair, the ground-set element of a partition (welfare) instance.
///
/// Pairs are indexed user-major: `user * resources + resource`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairElement {
    pub user: usize,
    pub resource: usize,
}

impl PairElement {
    pub fn new(user: usize, resource: usize) -> Self {
        PairElement { user, resource }
    }

    pub fn index(self, resources: usize) -> Element {
        self.user * resources + self.resource
    }

    pub fn from_index(index: Element, resources: usize) -> Self {
        PairElement {
            user: index / resources,
            resource: index % resources,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatroidKind {
    Uniform {
        rank: usize,
    },
    Partition {
        blocks: Vec<Vec<Element>>,
        capacities: Vec<usize>,
    },
    /// At most one user per resource.
    PairPartition {
        users: usize,
        resources: usize,
    },
    Explicit {
        independent_sets: Vec<ElementSet>,
    },
}

#[derive(Clone, Debug)]
pub struct Matroid {
    ground: GroundSet,
    kind: MatroidKind,
    rank: usize,
    block_of: Vec<usize>,
    family: HashSet<ElementSet>,
}

impl Matroid {
    pub fn uniform(ground: GroundSet, rank: usize) -> Result<Self> {
        if rank == 0 || rank > ground.size() {
            return Err(Error::invalid(format!(
                "uniform matroid rank must lie in 1..={}, got {rank}",
                ground.size()
            )));
        }
        Ok(Matroid {
            ground,
            kind: MatroidKind::Uniform { rank },
            rank,
            block_of: Vec::new(),
            family: HashSet::new(),
        })
    }

    pub fn partition(ground: GroundSet, blocks: Vec<Vec<Element>>, capacities: Vec<usize>) -> Result<Self> {
        if blocks.len() != capacities.len() {
            return Err(Error::invalid(format!(
                "{} blocks but {} capacities",
                blocks.len(),
                capacities.len()
            )));
        }
        let n = ground.size();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                ground.check(e)?;
                if block_of[e] != usize::MAX {
                    return Err(Error::invalid(format!("element {e} appears in more than one block")));
                }
                block_of[e] = b;
            }
            if capacities[b] == 0 || capacities[b] > block.len() {
                return Err(Error::invalid(format!(
                    "capacity of block {b} must lie in 1..={}, got {}",
                    block.len(),
                    capacities[b]
                )));
            }
        }
        if let Some(e) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::invalid(format!("element {e} is not covered by any block")));
        }
        let rank = capacities.iter().sum();
        Ok(Matroid {
            ground,
            kind: MatroidKind::Partition { blocks, capacities },
            rank,
            block_of,
            family: HashSet::new(),
        })
    }

    pub fn pair_partition(users: usize, resources: usize) -> Result<Self> {
        if users == 0 || resources == 0 {
            return Err(Error::EmptyInstance(format!(
                "partition instance needs at least one user and one resource (got {users} users, {resources} resources)"
            )));
        }
        let block_of = (0..users * resources).map(|i| i % resources).collect();
        Ok(Matroid {
            ground: GroundSet::new(users * resources),
            kind: MatroidKind::PairPartition { users, resources },
            rank: resources,
            block_of,
            family: HashSet::new(),
        })
    }

    /// An explicitly listed family of independent sets, checked against all
    /// three matroid axioms before it is accepted.
    pub fn explicit(ground: GroundSet, independent_sets: Vec<ElementSet>) -> Result<Self> {
        let m = Matroid::explicit_unchecked(ground, independent_sets)?;
        let violations = validate::matroid_violations(&m);
        if let Some(first) = violations.first() {
            return Err(Error::MatroidAxiom(format!(
                "{first} ({} violation(s) in total)",
                violations.len()
            )));
        }
        if m.rank == 0 {
            return Err(Error::MatroidAxiom("family has rank 0".into()));
        }
        Ok(m)
    }

    /// Builds an explicit family without checking the axioms. Intended for
    /// feeding suspect input to [`validate::validate_oracles`].
    pub fn explicit_unchecked(ground: GroundSet, independent_sets: Vec<ElementSet>) -> Result<Self> {
        let mut family = HashSet::new();
        let mut canonical = Vec::new();
        for s in independent_sets {
            if s.capacity() != ground.size() {
                return Err(Error::invalid(format!(
                    "independent set sized for {} elements, ground set has {}",
                    s.capacity(),
                    ground.size()
                )));
            }
            if family.insert(s.clone()) {
                canonical.push(s);
            }
        }
        canonical.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
        let rank = canonical.iter().map(ElementSet::len).max().unwrap_or(0);
        Ok(Matroid {
            ground,
            kind: MatroidKind::Explicit {
                independent_sets: canonical,
            },
            rank,
            block_of: Vec::new(),
            family,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn with_ground(mut self, ground: GroundSet) -> Result<Self> {
        if ground.size() != self.ground.size() {
            return Err(Error::invalid("relabelled ground set has a different size"));
        }
        self.ground = ground;
        Ok(self)
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Block structure of partition-type matroids: `(blocks, capacities)`.
    pub fn blocks(&self) -> Option<(Vec<Vec<Element>>, Vec<usize>)> {
        match &self.kind {
            MatroidKind::Partition { blocks, capacities } => Some((blocks.clone(), capacities.clone())),
            MatroidKind::PairPartition { users, resources } => {
                let blocks = (0..*resources)
                    .map(|r| (0..*users).map(|u| PairElement::new(u, r).index(*resources)).collect())
                    .collect();
                Some((blocks, vec![1; *resources]))
            }
            _ => None,
        }
    }

    pub fn is_independent(&self, set: &ElementSet) -> bool {
        match &self.kind {
            MatroidKind::Uniform { rank } => set.len() <= *rank,
            MatroidKind::Partition { capacities, .. } => {
                let mut counts = vec![0usize; capacities.len()];
                set.iter().all(|e| {
                    let b = self.block_of[e];
                    counts[b] += 1;
                    counts[b] <= capacities[b]
                })
            }
            MatroidKind::PairPartition { resources, .. } => {
                let mut used = vec![false; *resources];
                set.iter()
                    .all(|e| !std::mem::replace(&mut used[self.block_of[e]], true))
            }
            MatroidKind::Explicit { .. } => self.family.contains(set),
        }
    }

    /// Whether `set ∪ {x}` is independent, for an independent `set` not containing `x`.
    pub fn can_extend(&self, set: &ElementSet, x: Element) -> bool {
        match &self.kind {
            MatroidKind::Uniform { rank } => set.len() < *rank,
            MatroidKind::Partition { capacities, .. } => {
                let b = self.block_of[x];
                set.iter().filter(|&e| self.block_of[e] == b).count() < capacities[b]
            }
            MatroidKind::PairPartition { .. } => {
                let r = self.block_of[x];
                !set.iter().any(|e| self.block_of[e] == r)
            }
            MatroidKind::Explicit { .. } => self.family.contains(&set.with(x)),
        }
    }

    pub(crate) fn check_set(&self, set: &ElementSet) -> Result<()> {
        if set.capacity() != self.ground.size() {
            return Err(Error::invalid(format!(
                "set sized for {} elements, ground set has {}",
                set.capacity(),
                self.ground.size()
            )));
        }
        Ok(())
    }

    /// The elements `x ∉ set` with `set ∪ {x}` independent. Empty exactly when
    /// `set` is a basis.
    pub fn eligible_extensions(&self, set: &ElementSet) -> Result<ElementSet> {
        self.check_set(set)?;
        if !self.is_independent(set) {
            return Err(Error::precondition(format!("set {set:?} is not independent")));
        }
        Ok(self.eligible_unchecked(set))
    }

    pub(crate) fn eligible_unchecked(&self, set: &ElementSet) -> ElementSet {
        let mut out = self.ground.empty_set();
        for x in 0..self.ground.size() {
            if !set.contains(x) && self.can_extend(set, x) {
                out.insert(x);
            }
        }
        out
    }

    pub fn is_basis(&self, set: &ElementSet) -> bool {
        set.capacity() == self.ground.size() && set.len() == self.rank && self.is_independent(set)
    }
}
