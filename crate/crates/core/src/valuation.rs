//! Set-function value oracles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{Element, ElementSet};

/// Largest ground set a tabular oracle may cover (2^20 stored values).
pub const MAX_TABULAR_ELEMENTS: usize = 20;

/// One summand of a [`ValuationKind::Discounted`] function.
///
/// The element contributes `full` on its own and `reduced` once its
/// `trigger` element is also present.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscountTerm {
    pub full: f64,
    pub reduced: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trigger: Option<Element>,
}

impl DiscountTerm {
    pub fn plain(value: f64) -> Self {
        DiscountTerm {
            full: value,
            reduced: value,
            trigger: None,
        }
    }

    pub fn triggered(full: f64, reduced: f64, trigger: Element) -> Self {
        DiscountTerm {
            full,
            reduced,
            trigger: Some(trigger),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValuationKind {
    /// All 2^n values, indexed by bit mask.
    Tabular {
        table: Vec<f64>,
    },
    Modular {
        weights: Vec<f64>,
    },
    /// Weighted coverage: `Z(S)` is the total weight of universe items covered by `S`.
    Coverage {
        covers: Vec<Vec<usize>>,
        universe_weights: Vec<f64>,
    },
    Discounted {
        terms: Vec<DiscountTerm>,
    },
    /// `Z(S) = Σ_u Z_u(S_u)` over user/resource pairs, each `Z_u` defined on resources.
    PartitionSum {
        users: usize,
        resources: usize,
        per_user: Vec<Valuation>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Valuation {
    size: usize,
    kind: ValuationKind,
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::invalid(format!("{what}[{i}] is not finite"))),
        None => Ok(()),
    }
}

impl Valuation {
    pub fn tabular(size: usize, table: Vec<f64>) -> Result<Self> {
        if size > MAX_TABULAR_ELEMENTS {
            return Err(Error::invalid(format!(
                "tabular valuations support at most {MAX_TABULAR_ELEMENTS} elements, got {size}"
            )));
        }
        if table.len() != 1 << size {
            return Err(Error::invalid(format!(
                "tabular valuation on {size} elements needs {} values, got {}",
                1usize << size,
                table.len()
            )));
        }
        check_finite(&table, "table")?;
        if table[0] != 0.0 {
            return Err(Error::invalid(format!(
                "value of the empty set must be 0, got {}",
                table[0]
            )));
        }
        Ok(Valuation {
            size,
            kind: ValuationKind::Tabular { table },
        })
    }

    /// Tabulates `f` over every subset. Values are normalised so that `Z(∅) = 0`.
    pub fn tabulate(size: usize, f: impl Fn(&ElementSet) -> f64) -> Result<Self> {
        if size > MAX_TABULAR_ELEMENTS {
            return Err(Error::invalid(format!(
                "tabular valuations support at most {MAX_TABULAR_ELEMENTS} elements, got {size}"
            )));
        }
        let base = f(&ElementSet::empty(size));
        let table = (0..1u64 << size)
            .map(|mask| f(&ElementSet::from_mask(size, mask)) - base)
            .collect();
        Valuation::tabular(size, table)
    }

    pub fn modular(weights: Vec<f64>) -> Result<Self> {
        check_finite(&weights, "weights")?;
        Ok(Valuation {
            size: weights.len(),
            kind: ValuationKind::Modular { weights },
        })
    }

    pub fn coverage(covers: Vec<Vec<usize>>, universe_weights: Vec<f64>) -> Result<Self> {
        check_finite(&universe_weights, "universe_weights")?;
        for (e, items) in covers.iter().enumerate() {
            if let Some(&bad) = items.iter().find(|&&i| i >= universe_weights.len()) {
                return Err(Error::invalid(format!(
                    "element {e} covers item {bad}, universe has {} items",
                    universe_weights.len()
                )));
            }
        }
        Ok(Valuation {
            size: covers.len(),
            kind: ValuationKind::Coverage {
                covers,
                universe_weights,
            },
        })
    }

    pub fn discounted(terms: Vec<DiscountTerm>) -> Result<Self> {
        let n = terms.len();
        for (e, t) in terms.iter().enumerate() {
            if !t.full.is_finite() || !t.reduced.is_finite() {
                return Err(Error::invalid(format!("term {e} has a non-finite value")));
            }
            match t.trigger {
                Some(x) if x >= n => {
                    return Err(Error::UnknownElement { element: x, size: n });
                }
                Some(x) if x == e => {
                    return Err(Error::invalid(format!("term {e} cannot be triggered by itself")));
                }
                None if t.reduced != t.full => {
                    return Err(Error::invalid(format!("term {e} has a reduced value but no trigger")));
                }
                _ => {}
            }
        }
        Ok(Valuation {
            size: n,
            kind: ValuationKind::Discounted { terms },
        })
    }

    pub fn partition_sum(users: usize, resources: usize, per_user: Vec<Valuation>) -> Result<Self> {
        if users == 0 || resources == 0 {
            return Err(Error::EmptyInstance(format!(
                "partition valuation needs at least one user and one resource (got {users} users, {resources} resources)"
            )));
        }
        if per_user.len() != users {
            return Err(Error::invalid(format!(
                "expected {users} per-user valuations, got {}",
                per_user.len()
            )));
        }
        if let Some(u) = per_user.iter().position(|z| z.size != resources) {
            return Err(Error::invalid(format!(
                "valuation of user {u} is defined on {} resources, expected {resources}",
                per_user[u].size
            )));
        }
        if per_user
            .iter()
            .any(|z| matches!(z.kind, ValuationKind::PartitionSum { .. }))
        {
            return Err(Error::invalid(
                "per-user valuations cannot themselves be partition sums",
            ));
        }
        Ok(Valuation {
            size: users * resources,
            kind: ValuationKind::PartitionSum {
                users,
                resources,
                per_user,
            },
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> &ValuationKind {
        &self.kind
    }

    pub fn per_user(&self) -> Option<&[Valuation]> {
        match &self.kind {
            ValuationKind::PartitionSum { per_user, .. } => Some(per_user),
            _ => None,
        }
    }

    fn check_set(&self, set: &ElementSet) -> Result<()> {
        if set.capacity() != self.size {
            return Err(Error::invalid(format!(
                "set sized for {} elements, valuation is defined on {}",
                set.capacity(),
                self.size
            )));
        }
        Ok(())
    }

    pub fn value(&self, set: &ElementSet) -> Result<f64> {
        self.check_set(set)?;
        Ok(self.eval(set))
    }

    /// `Z(S ∪ {q}) − Z(S)`.
    pub fn marginal_gain(&self, set: &ElementSet, q: Element) -> Result<f64> {
        self.check_set(set)?;
        if q >= self.size {
            return Err(Error::UnknownElement {
                element: q,
                size: self.size,
            });
        }
        if set.contains(q) {
            return Err(Error::precondition(format!("element {q} is already in the set")));
        }
        Ok(self.gain(set, q))
    }

    pub(crate) fn eval(&self, set: &ElementSet) -> f64 {
        match &self.kind {
            ValuationKind::Tabular { table } => table[set.mask() as usize],
            ValuationKind::Modular { weights } => set.iter().map(|e| weights[e]).sum(),
            ValuationKind::Coverage {
                covers,
                universe_weights,
            } => {
                let mut covered = vec![false; universe_weights.len()];
                for e in set.iter() {
                    for &i in &covers[e] {
                        covered[i] = true;
                    }
                }
                covered
                    .iter()
                    .zip(universe_weights)
                    .filter(|(c, _)| **c)
                    .map(|(_, w)| w)
                    .sum()
            }
            ValuationKind::Discounted { terms } => set
                .iter()
                .map(|e| {
                    let t = &terms[e];
                    match t.trigger {
                        Some(x) if set.contains(x) => t.reduced,
                        _ => t.full,
                    }
                })
                .sum(),
            ValuationKind::PartitionSum {
                users,
                resources,
                per_user,
            } => (0..*users)
                .map(|u| per_user[u].eval(&user_share(set, u, *resources)))
                .sum(),
        }
    }

    /// Marginal gain without bounds checks; `q ∉ set` is assumed.
    pub(crate) fn gain(&self, set: &ElementSet, q: Element) -> f64 {
        match &self.kind {
            ValuationKind::Tabular { table } => {
                let m = set.mask() as usize;
                table[m | 1 << q] - table[m]
            }
            ValuationKind::Modular { weights } => weights[q],
            ValuationKind::Coverage {
                covers,
                universe_weights,
            } => {
                let mut covered = vec![false; universe_weights.len()];
                for e in set.iter() {
                    for &i in &covers[e] {
                        covered[i] = true;
                    }
                }
                let mut gain = 0.0;
                for &i in &covers[q] {
                    if !std::mem::replace(&mut covered[i], true) {
                        gain += universe_weights[i];
                    }
                }
                gain
            }
            ValuationKind::Discounted { terms } => {
                let own = &terms[q];
                let mut gain = match own.trigger {
                    Some(x) if set.contains(x) => own.reduced,
                    _ => own.full,
                };
                for j in set.iter() {
                    if terms[j].trigger == Some(q) {
                        gain += terms[j].reduced - terms[j].full;
                    }
                }
                gain
            }
            ValuationKind::PartitionSum {
                resources, per_user, ..
            } => {
                let u = q / resources;
                per_user[u].gain(&user_share(set, u, *resources), q % resources)
            }
        }
    }
}

/// The resources held by user `u` in a set of user/resource pairs.
pub fn user_share(set: &ElementSet, user: usize, resources: usize) -> ElementSet {
    let mut share = ElementSet::empty(resources);
    for e in set.iter() {
        if e / resources == user {
            share.insert(e % resources);
        }
    }
    share
}
