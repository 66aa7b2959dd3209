use crate::error::{Error, Result};
use crate::matroid::{Matroid, MatroidKind, PairElement};
use crate::set::GroundSet;
use crate::valuation::{Valuation, ValuationKind};

/// A maximisation problem: a valuation constrained by a matroid on the same ground set.
#[derive(Clone, Debug)]
pub struct Instance {
    matroid: Matroid,
    valuation: Valuation,
}

/// Borrowed view of a welfare (user × resource) instance.
#[derive(Clone, Copy, Debug)]
pub struct PartitionView<'a> {
    pub users: usize,
    pub resources: usize,
    pub per_user: &'a [Valuation],
}

impl PartitionView<'_> {
    pub fn pair(&self, index: usize) -> PairElement {
        PairElement::from_index(index, self.resources)
    }

    pub fn index(&self, user: usize, resource: usize) -> usize {
        PairElement::new(user, resource).index(self.resources)
    }
}

impl Instance {
    pub fn new(matroid: Matroid, valuation: Valuation) -> Result<Self> {
        if matroid.ground().size() != valuation.size() {
            return Err(Error::invalid(format!(
                "matroid has {} elements but valuation has {}",
                matroid.ground().size(),
                valuation.size()
            )));
        }
        match (matroid.kind(), valuation.kind()) {
            (
                MatroidKind::PairPartition { users, resources },
                ValuationKind::PartitionSum {
                    users: vu,
                    resources: vr,
                    ..
                },
            ) if users != vu || resources != vr => {
                return Err(Error::invalid(format!(
                    "matroid is {users}x{resources} but valuation is {vu}x{vr}"
                )));
            }
            _ => {}
        }
        Ok(Instance { matroid, valuation })
    }

    /// A welfare instance: `users` valuations on `resources`, each resource
    /// allocated to at most one user.
    pub fn partition(users: usize, resources: usize, per_user: Vec<Valuation>) -> Result<Self> {
        let valuation = Valuation::partition_sum(users, resources, per_user)?;
        let labels = (0..users * resources)
            .map(|i| {
                let p = PairElement::from_index(i, resources);
                format!("u{}:r{}", p.user + 1, p.resource + 1)
            })
            .collect();
        let matroid = Matroid::pair_partition(users, resources)?.with_ground(GroundSet::with_labels(labels)?)?;
        Instance::new(matroid, valuation)
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn ground(&self) -> &GroundSet {
        self.matroid.ground()
    }

    pub fn rank(&self) -> usize {
        self.matroid.rank()
    }

    /// The welfare structure, when the matroid is a pair partition and the
    /// valuation a per-user sum.
    pub fn partition_view(&self) -> Option<PartitionView<'_>> {
        match (self.matroid.kind(), self.valuation.kind()) {
            (MatroidKind::PairPartition { users, resources }, ValuationKind::PartitionSum { per_user, .. }) => {
                Some(PartitionView {
                    users: *users,
                    resources: *resources,
                    per_user,
                })
            }
            _ => None,
        }
    }
}
