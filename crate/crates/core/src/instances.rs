//! Instance generators: the two tight families and seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::TiePolicy;
use crate::instance::Instance;
use crate::matroid::{Matroid, PairElement};
use crate::set::{Element, ElementSet, GroundSet};
use crate::tolerance::Tolerance;
use crate::validate::{validate_oracles, ValidationConfig};
use crate::valuation::{DiscountTerm, Valuation};

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// `1/(1/d + c)`, the value both tight families approach.
pub fn ratio_limit(c: f64, d: f64) -> f64 {
    1.0 / (1.0 / d + c)
}

fn check_curvature(c: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::invalid(format!("c = {c} violates 0 <= c <= 1")));
    }
    Ok(())
}

/// Parameters of the two-user welfare family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TightPartitionParams {
    pub c: f64,
    pub d: f64,
    pub epsilon: f64,
    pub resources: usize,
}

impl TightPartitionParams {
    pub fn new(c: f64, d: f64, resources: usize) -> Self {
        TightPartitionParams {
            c,
            d,
            epsilon: DEFAULT_EPSILON,
            resources,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let TightPartitionParams {
            c,
            d,
            epsilon,
            resources,
        } = *self;
        check_curvature(c)?;
        if d.is_nan() || d < 1.0 {
            return Err(Error::invalid(format!("d = {d} violates d >= 1")));
        }
        if c < 1.0 {
            let limit = 1.0 / (1.0 - c);
            if d > limit && !Tolerance::default().eq(d, limit) {
                return Err(Error::invalid(format!("d = {d} violates d <= 1/(1-c) = {limit}")));
            }
        }
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::invalid(format!("epsilon = {epsilon} violates epsilon > 0")));
        }
        if d - epsilon < 1.0 {
            return Err(Error::invalid(format!(
                "d - epsilon = {} violates d - epsilon >= 1",
                d - epsilon
            )));
        }
        if resources == 0 {
            return Err(Error::invalid("at least one resource is required"));
        }
        Ok(())
    }

    fn d_minus(&self) -> f64 {
        self.d - self.epsilon
    }

    fn q(&self) -> f64 {
        self.d * (1.0 - self.c)
    }

    fn q_minus(&self) -> f64 {
        self.d_minus() * (1.0 - self.c)
    }

    /// Value of resource `i` (1-based) for the user it is "leading" for:
    /// `d^i (1-c)^{i-1}`.
    fn leading(&self, i: usize) -> f64 {
        self.d * self.q().powi(i as i32 - 1)
    }

    /// Conditional value of resource `i ≥ 2` for the trailing user, without and
    /// with the preceding resource: `d₋^{i-1}(1-c)^{i-2}` and `d₋^{i-1}(1-c)^{i-1}`.
    fn trailing(&self, i: usize) -> (f64, f64) {
        let dm = self.d_minus();
        (
            dm * self.q_minus().powi(i as i32 - 2),
            self.q_minus().powi(i as i32 - 1),
        )
    }
}

/// Two users over `n` resources. User 1 leads on odd resources and user 2 on
/// even ones; a trailing user's value for resource `i` drops by a factor
/// `1-c` when it also holds resource `i-1`. User 2 values resource 1 at 1.
pub fn gen_tight_partition(p: &TightPartitionParams) -> Result<Instance> {
    p.validate()?;
    let n = p.resources;
    let user_terms = |user: usize| -> Vec<DiscountTerm> {
        (1..=n)
            .map(|i| {
                let leads = (i % 2 == 1) == (user == 0);
                if leads {
                    DiscountTerm::plain(p.leading(i))
                } else if i == 1 {
                    DiscountTerm::plain(1.0)
                } else {
                    let (full, reduced) = p.trailing(i);
                    DiscountTerm::triggered(full, reduced, i - 2)
                }
            })
            .collect()
    };
    let per_user = vec![
        Valuation::discounted(user_terms(0))?,
        Valuation::discounted(user_terms(1))?,
    ];
    Instance::partition(2, n, per_user)
}

/// The allocation `(u1,r1), (u2,r2), (u1,r3), …` as pair indices.
pub fn tight_partition_greedy_pairs(resources: usize) -> Vec<Element> {
    (0..resources)
        .map(|r| PairElement::new(r % 2, r).index(resources))
        .collect()
}

/// The allocation `(u2,r1), (u1,r2), (u2,r3), …` as pair indices.
pub fn tight_partition_alternating(resources: usize) -> Vec<Element> {
    (0..resources)
        .map(|r| PairElement::new(1 - r % 2, r).index(resources))
        .collect()
}

/// `Σ_{i=1}^{n} d q^{i-1}` with `q = d(1-c)`.
pub fn tight_partition_greedy_value(p: &TightPartitionParams) -> f64 {
    (1..=p.resources).map(|i| p.leading(i)).sum()
}

/// Value of the alternating allocation: `1 + Σ_{i=2}^{n} d₋ q₋^{i-2}`.
pub fn tight_partition_alternating_value(p: &TightPartitionParams) -> f64 {
    1.0 + (2..=p.resources).map(|i| p.trailing(i).0).sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableDivergence {
    pub user: usize,
    pub resource: usize,
    pub explicit: f64,
    pub pattern: f64,
}

/// Entries of the first four resources where the explicitly listed values
/// differ from the general odd/even pattern. The generator uses the listed
/// values.
pub fn first_table_divergences(p: &TightPartitionParams) -> Vec<TableDivergence> {
    let (c, d, dm) = (p.c, p.d, p.d_minus());
    let k = 1.0 - c;
    // (user, resource, value without predecessor) as listed for r1..r4
    let listed = [
        (0, 1, d),
        (0, 2, dm),
        (0, 3, d.powi(3) * k.powi(2)),
        (0, 4, dm.powi(3) * k.powi(2)),
        (1, 1, 1.0),
        (1, 2, d.powi(2) * k),
        (1, 3, dm.powi(2) * k),
        (1, 4, d.powi(4) * k.powi(3)),
    ];
    let pattern = |user: usize, i: i32| {
        let leads = (i % 2 == 1) == (user == 0);
        if leads {
            d.powi(i) * k.powi(i - 1)
        } else {
            dm.powi(i - 1) * k.powi(i - 2)
        }
    };
    let tol = Tolerance::default();
    listed
        .iter()
        .filter(|&&(_, i, _)| i <= p.resources)
        .filter_map(|&(user, i, explicit)| {
            let general = pattern(user, i as i32);
            (!tol.eq(explicit, general)).then_some(TableDivergence {
                user,
                resource: i - 1,
                explicit,
                pattern: general,
            })
        })
        .collect()
}

/// Parameters of the `2K`-element family on pairs `{ν_i, ε_i}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TightGeneralParams {
    pub c: f64,
    pub d: f64,
    pub rank: usize,
}

impl TightGeneralParams {
    pub fn validate(&self) -> Result<()> {
        check_curvature(self.c)?;
        if !self.d.is_finite() || self.d < 1.0 {
            return Err(Error::invalid(format!("d = {} violates d >= 1", self.d)));
        }
        if self.rank == 0 {
            return Err(Error::invalid("rank must be at least 1"));
        }
        Ok(())
    }

    fn q(&self) -> f64 {
        self.d * (1.0 - self.c)
    }

    /// `d q^k`; every full value of the family has this form.
    fn dq(&self, k: usize) -> f64 {
        self.d * self.q().powi(k as i32)
    }
}

/// Index of `ν_i` (1-based `i`).
pub fn nu(i: usize) -> Element {
    2 * (i - 1)
}

/// Index of `ε_i` (1-based `i`).
pub fn eps(i: usize) -> Element {
    2 * (i - 1) + 1
}

/// Ground set `ν_1, ε_1, …, ν_K, ε_K`, at most one of each pair. `ε_i` is
/// worth `d q^{i-1}`; `ν_1` is worth 1 and `ν_i` is worth `d q^{i-2}`, or
/// `q^{i-1}` when `ε_{i-1}` is present.
pub fn gen_tight_general(p: &TightGeneralParams) -> Result<Instance> {
    p.validate()?;
    let k = p.rank;
    let mut labels = Vec::with_capacity(2 * k);
    let mut terms = Vec::with_capacity(2 * k);
    for i in 1..=k {
        labels.push(format!("nu{i}"));
        labels.push(format!("eps{i}"));
        terms.push(if i == 1 {
            DiscountTerm::plain(1.0)
        } else {
            DiscountTerm::triggered(p.dq(i - 2), p.q().powi(i as i32 - 1), eps(i - 1))
        });
        terms.push(DiscountTerm::plain(p.dq(i - 1)));
    }
    let ground = GroundSet::with_labels(labels)?;
    let blocks = (1..=k).map(|i| vec![nu(i), eps(i)]).collect();
    let matroid = Matroid::partition(ground, blocks, vec![1; k])?;
    Instance::new(matroid, Valuation::discounted(terms)?)
}

/// Tie policy steering every tie toward the `ε` elements.
pub fn epsilon_first(rank: usize) -> TiePolicy {
    TiePolicy::Prefer((1..=rank).map(eps).collect())
}

/// `Z(S)` evaluated from the index-set form: `ε_i` adds `d q^{i-1}`, `ν_i`
/// adds `q^{i-1}` when `ε_{i-1} ∈ S` or `i = 1`, and `d q^{i-2}` otherwise.
pub fn tight_general_closed_form(p: &TightGeneralParams, set: &ElementSet) -> f64 {
    let q = p.q();
    let mut total = 0.0;
    for i in 1..=p.rank {
        if set.contains(eps(i)) {
            total += p.d * q.powi(i as i32 - 1);
        }
        if set.contains(nu(i)) {
            if i == 1 || set.contains(eps(i - 1)) {
                total += q.powi(i as i32 - 1);
            } else {
                total += p.d * q.powi(i as i32 - 2);
            }
        }
    }
    total
}

/// Marginal increment of `x ∉ S` from the per-element table.
pub fn tight_general_increment(p: &TightGeneralParams, set: &ElementSet, x: Element) -> f64 {
    let q = p.q();
    let i = x / 2 + 1;
    if x.is_multiple_of(2) {
        if i == 1 || set.contains(eps(i - 1)) {
            q.powi(i as i32 - 1)
        } else {
            p.d * q.powi(i as i32 - 2)
        }
    } else if i < p.rank && set.contains(nu(i + 1)) {
        q.powi(i as i32)
    } else {
        p.d * q.powi(i as i32 - 1)
    }
}

/// `Z({ε_1, …, ε_K}) = Σ_{i=1}^{K} d q^{i-1}`.
pub fn tight_general_greedy_value(p: &TightGeneralParams) -> f64 {
    (1..=p.rank).map(|i| p.dq(i - 1)).sum()
}

/// `Z({ν_1, …, ν_K}) = 1 + Σ_{k=0}^{K-2} d q^k`.
pub fn tight_general_nu_value(p: &TightGeneralParams) -> f64 {
    1.0 + (0..p.rank.saturating_sub(1)).map(|k| p.dq(k)).sum::<f64>()
}

pub fn nu_set(rank: usize) -> ElementSet {
    ElementSet::from_elements(2 * rank, (1..=rank).map(nu)).expect("in range")
}

pub fn eps_set(rank: usize) -> ElementSet {
    ElementSet::from_elements(2 * rank, (1..=rank).map(eps)).expect("in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MatroidShape {
    Uniform,
    Partition,
    /// A binary linear matroid listed as an explicit family.
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum RandomShape {
    Tabular { elements: usize, matroid: MatroidShape },
    Partition { users: usize, resources: usize },
}

/// Largest ground set for random tabular instances.
pub const MAX_RANDOM_ELEMENTS: usize = 12;

/// A random monotone submodular table on `n` elements: a weighted mix of a
/// coverage function, a capped additive function and a modular one.
pub fn random_submodular(rng: &mut impl Rng, n: usize) -> Result<Valuation> {
    let items = rng.random_range(1..=2 * n.max(1));
    let density: f64 = rng.random_range(0.15..0.6);
    let covers: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..items).filter(|_| rng.random_bool(density)).collect())
        .collect();
    let item_weights: Vec<f64> = (0..items).map(|_| rng.random::<f64>()).collect();
    let budget_weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let budget = budget_weights.iter().sum::<f64>() * rng.random_range(0.2..1.0);
    let linear: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let mix: [f64; 3] = [rng.random(), rng.random(), rng.random::<f64>() * rng.random::<f64>()];
    let coverage = Valuation::coverage(covers, item_weights)?;
    Valuation::tabulate(n, |s| {
        let capped = s.iter().map(|e| budget_weights[e]).sum::<f64>().min(budget);
        let modular: f64 = s.iter().map(|e| linear[e]).sum();
        mix[0] * coverage.eval(s) + mix[1] * capped + mix[2] * modular
    })
}

fn random_partition_matroid(rng: &mut impl Rng, n: usize) -> Result<Matroid> {
    let count = rng.random_range(1..=n.min(4));
    let mut order: Vec<Element> = (0..n).collect();
    order.shuffle(rng);
    let mut blocks = vec![Vec::new(); count];
    for (pos, e) in order.into_iter().enumerate() {
        let b = if pos < count { pos } else { rng.random_range(0..count) };
        blocks[b].push(e);
    }
    for block in &mut blocks {
        block.sort_unstable();
    }
    let caps = blocks.iter().map(|b| rng.random_range(1..=b.len())).collect();
    Matroid::partition(GroundSet::new(n), blocks, caps)
}

/// A random binary linear matroid: each element is a non-zero vector in
/// GF(2)^r, and a set is independent when its vectors are.
pub fn random_linear_matroid(rng: &mut impl Rng, n: usize) -> Result<Matroid> {
    if n == 0 || n > MAX_RANDOM_ELEMENTS {
        return Err(Error::invalid(format!(
            "linear matroids are generated for 1..={MAX_RANDOM_ELEMENTS} elements"
        )));
    }
    let dim = rng.random_range(1..=n.min(4));
    let vectors: Vec<u8> = (0..n).map(|_| rng.random_range(1..(1u8 << dim))).collect();
    let independent = |mask: u64| {
        let mut basis = [0u8; 8];
        for (e, &vector) in vectors.iter().enumerate() {
            if mask >> e & 1 == 0 {
                continue;
            }
            let mut v = vector;
            for bit in (0..8).rev() {
                if v >> bit & 1 == 0 {
                    continue;
                }
                if basis[bit] == 0 {
                    basis[bit] = v;
                    break;
                }
                v ^= basis[bit];
            }
            if v == 0 {
                return false;
            }
        }
        true
    };
    let family = (0..1u64 << n)
        .filter(|&mask| independent(mask))
        .map(|mask| ElementSet::from_mask(n, mask))
        .collect();
    Matroid::explicit(GroundSet::new(n), family)
}

pub fn random_matroid(rng: &mut impl Rng, n: usize, shape: MatroidShape) -> Result<Matroid> {
    match shape {
        MatroidShape::Uniform => Matroid::uniform(GroundSet::new(n), rng.random_range(1..=n)),
        MatroidShape::Partition => random_partition_matroid(rng, n),
        MatroidShape::Explicit => random_linear_matroid(rng, n),
    }
}

/// A seeded random instance; identical seeds and shapes give identical instances.
pub fn gen_random(seed: u64, shape: &RandomShape) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instance = match *shape {
        RandomShape::Tabular { elements, matroid } => {
            if elements == 0 || elements > MAX_RANDOM_ELEMENTS {
                return Err(Error::invalid(format!(
                    "random tabular instances need 1..={MAX_RANDOM_ELEMENTS} elements, got {elements}"
                )));
            }
            let m = random_matroid(&mut rng, elements, matroid)?;
            let z = random_submodular(&mut rng, elements)?;
            Instance::new(m, z)?
        }
        RandomShape::Partition { users, resources } => {
            if users == 0 || resources == 0 {
                return Err(Error::EmptyInstance(format!(
                    "random partition instances need users and resources (got {users}, {resources})"
                )));
            }
            if resources > MAX_RANDOM_ELEMENTS {
                return Err(Error::invalid(format!(
                    "random partition instances support at most {MAX_RANDOM_ELEMENTS} resources"
                )));
            }
            let per_user = (0..users)
                .map(|_| {
                    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
                    let z = random_submodular(&mut rng, resources)?;
                    Valuation::tabulate(resources, |s| scale * z.eval(s))
                })
                .collect::<Result<Vec<_>>>()?;
            Instance::partition(users, resources, per_user)?
        }
    };
    let report = validate_oracles(instance.valuation(), instance.matroid(), &ValidationConfig::default());
    if !report.passed() {
        return Err(Error::Validation(format!(
            "generated instance failed validation: {}",
            report
                .matroid
                .iter()
                .chain(&report.valuation)
                .next()
                .map(ToString::to_string)
                .unwrap_or_default()
        )));
    }
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_partition_parameter_checks() {
        assert!(TightPartitionParams::new(0.5, 2.0, 4).validate().is_ok());
        assert!(TightPartitionParams::new(0.5, 2.1, 4).validate().is_err());
        assert!(TightPartitionParams::new(0.5, 0.9, 4).validate().is_err());
        assert!(TightPartitionParams::new(1.2, 1.5, 4).validate().is_err());
        let mut p = TightPartitionParams::new(0.5, 1.0, 4);
        assert!(p.validate().is_err(), "d - epsilon < 1");
        p.d = 1.5;
        p.epsilon = 0.0;
        assert!(p.validate().is_err());
        assert!(TightPartitionParams::new(0.5, 1.5, 0).validate().is_err());
    }

    #[test]
    fn listed_table_diverges_only_at_the_first_resource_of_user_two() {
        let d = first_table_divergences(&TightPartitionParams::new(0.5, 1.5, 6));
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].user, d[0].resource), (1, 0));
        assert_eq!(d[0].explicit, 1.0);
        assert_eq!(d[0].pattern, 2.0);
        assert!(first_table_divergences(&TightPartitionParams::new(0.0, 1.0 + 1e-3, 6)).is_empty());
    }

    #[test]
    fn tight_general_shape() {
        let p = TightGeneralParams {
            c: 0.5,
            d: 1.5,
            rank: 3,
        };
        let inst = gen_tight_general(&p).unwrap();
        assert_eq!(inst.ground().size(), 6);
        assert_eq!(inst.matroid().blocks().unwrap().0.len(), 3);
        assert_eq!(inst.ground().label(eps(2)), "eps2");
        assert!(gen_tight_general(&TightGeneralParams {
            c: 0.5,
            d: 0.5,
            rank: 3
        })
        .is_err());
    }

    #[test]
    fn random_generation_is_deterministic() {
        let shape = RandomShape::Tabular {
            elements: 6,
            matroid: MatroidShape::Explicit,
        };
        let a = gen_random(7, &shape).unwrap();
        let b = gen_random(7, &shape).unwrap();
        assert_eq!(a.valuation(), b.valuation());
        assert_eq!(a.matroid().kind(), b.matroid().kind());
    }

    #[test]
    fn linear_matroids_are_matroids() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=8 {
            let m = random_linear_matroid(&mut rng, n).unwrap();
            assert!(m.rank() >= 1);
        }
    }
}
