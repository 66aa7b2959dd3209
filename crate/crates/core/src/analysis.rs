//! Curvature, discriminants and the guarantees derived from them.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::greedy::{Algorithm, GreedyTrace};
use crate::instance::{Instance, PartitionView};
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet};
use crate::tolerance::Tolerance;
use crate::valuation::Valuation;

/// Ratio between the chosen gain and the best rival gain of a greedy step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Discriminant {
    Finite(f64),
    /// No rival, or every rival gains nothing.
    Infinite,
}

impl Discriminant {
    /// Ties within tolerance give exactly 1.
    pub fn from_gains(gain: f64, rival: Option<f64>, tol: Tolerance) -> Self {
        match rival {
            None => Discriminant::Infinite,
            Some(r) if r <= 0.0 || tol.is_zero(r) => Discriminant::Infinite,
            Some(r) if tol.eq(gain, r) => Discriminant::Finite(1.0),
            Some(r) => Discriminant::Finite(gain / r),
        }
    }

    /// `1/d`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Discriminant::Finite(d) => 1.0 / d,
            Discriminant::Infinite => 0.0,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Discriminant::Finite(d) => d,
            Discriminant::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Discriminant::Infinite)
    }

    pub fn min(self, other: Self) -> Self {
        if other.value() < self.value() {
            other
        } else {
            self
        }
    }
}

impl Serialize for Discriminant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Discriminant::Finite(d) => s.serialize_f64(*d),
            Discriminant::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `1 − min_j ρ_j(N∖{j}) / ρ_j(∅)` over elements with a positive singleton
/// gain. For submodular `Z` the set `N∖{j}` minimises the numerator, so this
/// equals the minimum over all sets.
pub fn curvature(z: &Valuation, tol: Tolerance) -> Result<f64> {
    let n = z.size();
    let empty = ElementSet::empty(n);
    let mut full = ElementSet::empty(n);
    for e in 0..n {
        full.insert(e);
    }
    let mut worst: Option<f64> = None;
    for j in 0..n {
        let first = z.gain(&empty, j);
        if tol.lt(first, 0.0) {
            return Err(Error::Validation(format!(
                "element {j} has negative gain {first} on the empty set"
            )));
        }
        if first <= 0.0 || tol.is_zero(first) {
            continue;
        }
        let last = z.gain(&full.without(j), j);
        if tol.lt(last, 0.0) {
            return Err(Error::Validation(format!(
                "element {j} has negative gain {last} on the rest of the ground set"
            )));
        }
        let ratio = (last / first).max(0.0);
        worst = Some(worst.map_or(ratio, |w| w.min(ratio)));
    }
    Ok(worst.map_or(0.0, |w| (1.0 - w).clamp(0.0, 1.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    /// For welfare instances this is the largest per-user curvature.
    pub global: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_user: Option<Vec<f64>>,
}

pub fn curvature_report(z: &Valuation, tol: Tolerance) -> Result<CurvatureReport> {
    match z.per_user() {
        Some(users) => {
            let per_user = users.iter().map(|zu| curvature(zu, tol)).collect::<Result<Vec<_>>>()?;
            Ok(CurvatureReport {
                global: per_user.iter().copied().fold(0.0, f64::max),
                per_user: Some(per_user),
            })
        }
        None => Ok(CurvatureReport {
            global: curvature(z, tol)?,
            per_user: None,
        }),
    }
}

fn mismatch(i: usize, what: impl std::fmt::Display) -> Error {
    Error::invalid(format!("trace does not match the instance at step {i}: {what}"))
}

/// Replays a greedy trace and computes `d_i` for every step, including those
/// at or after `i0`.
pub fn discriminant_general(
    trace: &GreedyTrace,
    z: &Valuation,
    m: &Matroid,
    tol: Tolerance,
) -> Result<Vec<Discriminant>> {
    let n = m.ground().size();
    if z.size() != n || trace.final_set.capacity() != n {
        return Err(Error::invalid("trace, valuation and matroid sizes differ"));
    }
    let mut g = m.ground().empty_set();
    let mut out = Vec::with_capacity(trace.steps.len());
    for step in &trace.steps {
        let i = step.iteration;
        let eligible = m.eligible_unchecked(&g);
        if step.chosen >= n || !eligible.contains(step.chosen) {
            return Err(mismatch(i, format!("element {} is not eligible", step.chosen)));
        }
        if eligible.len() != step.eligible_count {
            return Err(mismatch(
                i,
                format!(
                    "{} eligible elements, trace records {}",
                    eligible.len(),
                    step.eligible_count
                ),
            ));
        }
        let gain = z.gain(&g, step.chosen);
        if !tol.eq(gain, step.gain) {
            return Err(mismatch(i, format!("gain is {gain}, trace records {}", step.gain)));
        }
        let rival = eligible
            .iter()
            .filter(|&x| x != step.chosen)
            .map(|x| z.gain(&g, x))
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
        out.push(Discriminant::from_gains(gain, rival, tol));
        g.insert(step.chosen);
    }
    Ok(out)
}

/// First iteration `i` at which exactly `K − i + 1` elements were eligible;
/// `K + 1` when that never happens.
pub fn compute_i0(trace: &GreedyTrace, m: &Matroid) -> usize {
    let rank = m.rank();
    trace
        .steps
        .iter()
        .find(|s| s.iteration <= rank && s.eligible_count == rank - s.iteration + 1)
        .map_or(rank + 1, |s| s.iteration)
}

/// The eligible extensions of `set` when there are exactly as many as the
/// elements still missing from a basis; they then belong to every basis
/// extending `set`.
pub fn forced_tail(m: &Matroid, set: &ElementSet) -> Result<Option<ElementSet>> {
    let eligible = m.eligible_extensions(set)?;
    let missing = m.rank().saturating_sub(set.len());
    Ok((eligible.len() == missing).then_some(eligible))
}

fn welfare_discriminants(
    trace: &GreedyTrace,
    instance: &Instance,
    expected: Algorithm,
    tol: Tolerance,
) -> Result<Vec<Discriminant>> {
    if trace.algorithm != expected {
        return Err(Error::invalid(format!(
            "expected a {expected} trace, got a {} trace",
            trace.algorithm
        )));
    }
    let view: PartitionView<'_> = instance
        .partition_view()
        .ok_or_else(|| Error::invalid("instance is not a partition instance"))?;
    let mut shares = vec![ElementSet::empty(view.resources); view.users];
    let mut allocated = vec![false; view.resources];
    let mut out = Vec::with_capacity(trace.steps.len());
    for step in &trace.steps {
        if step.chosen >= view.users * view.resources {
            return Err(mismatch(step.iteration, "unknown pair"));
        }
        let p = view.pair(step.chosen);
        if std::mem::replace(&mut allocated[p.resource], true) {
            return Err(mismatch(
                step.iteration,
                format!("resource {} allocated twice", p.resource),
            ));
        }
        let gains: Vec<f64> = (0..view.users)
            .map(|u| view.per_user[u].gain(&shares[u], p.resource))
            .collect();
        if !tol.eq(gains[p.user], step.gain) {
            return Err(mismatch(
                step.iteration,
                format!("gain is {}, trace records {}", gains[p.user], step.gain),
            ));
        }
        let rival = gains
            .iter()
            .enumerate()
            .filter(|(u, _)| *u != p.user)
            .map(|(_, g)| *g)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
        out.push(Discriminant::from_gains(gains[p.user], rival, tol));
        shares[p.user].insert(p.resource);
    }
    Ok(out)
}

/// Chosen user's gain against the best other user for the same resource,
/// per step of a welfare greedy trace.
pub fn discriminant_partition(trace: &GreedyTrace, instance: &Instance, tol: Tolerance) -> Result<Vec<Discriminant>> {
    welfare_discriminants(trace, instance, Algorithm::GreedyM, tol)
}

/// As [`discriminant_partition`], for an online trace.
pub fn discriminant_online(trace: &GreedyTrace, instance: &Instance, tol: Tolerance) -> Result<Vec<Discriminant>> {
    welfare_discriminants(trace, instance, Algorithm::GreedyOn, tol)
}

/// `min(1, 1/x)`, reading `1/0` as unbounded.
fn capped_inverse(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        (1.0 / x).min(1.0)
    }
}

/// Guarantee of the offline greedy: `min(1, 1/(c + max_{i<i0} 1/d_i))`,
/// where an empty maximum counts as 0.
pub fn discriminant_bound(c: f64, discriminants: &[Discriminant], i0: usize) -> f64 {
    let upto = i0.saturating_sub(1).min(discriminants.len());
    let worst = discriminants[..upto].iter().map(|d| d.reciprocal()).fold(0.0, f64::max);
    capped_inverse(c + worst)
}

/// Guarantee of the welfare greedy from per-step `(c_u, d_i)` pairs:
/// `min(1, 1/max_i (c_{u_i} + 1/d_i))`.
pub fn partition_bound(terms: &[(f64, Discriminant)]) -> f64 {
    let worst = terms.iter().map(|(c, d)| c + d.reciprocal()).fold(0.0, f64::max);
    capped_inverse(worst)
}

/// Competitive guarantee of the online greedy for one arrival order; same
/// shape as [`partition_bound`].
pub fn online_bound(terms: &[(f64, Discriminant)]) -> f64 {
    partition_bound(terms)
}

/// The curvature-free guarantee of greedy on any matroid.
pub const HALF_BOUND: f64 = 0.5;

/// The curvature guarantee `1/(1+c)`.
pub fn curvature_bound(c: f64) -> f64 {
    1.0 / (1.0 + c)
}

/// Orders basis `b` against the ordered basis `a` so that `A^{i−1} ∪ {b_i}`
/// is independent for every `i`, and common elements keep their position.
///
/// Positions are filled from `K` down to 1; each takes `a_i` when it lies in
/// `b`, otherwise the lowest-index feasible unassigned element.
pub fn basis_ordering(m: &Matroid, a: &[Element], b: &ElementSet) -> Result<Vec<Element>> {
    let n = m.ground().size();
    let a_set = ElementSet::from_elements(n, a.iter().copied())?;
    if a_set.len() != a.len() || !m.is_basis(&a_set) {
        return Err(Error::invalid(format!("{a:?} is not a basis")));
    }
    m.check_set(b)?;
    if !m.is_basis(b) {
        return Err(Error::invalid(format!("{b:?} is not a basis")));
    }
    let k = a.len();
    let mut prefixes = Vec::with_capacity(k);
    let mut acc = ElementSet::empty(n);
    for &x in a {
        prefixes.push(acc.clone());
        acc.insert(x);
    }
    let mut assigned = ElementSet::empty(n);
    let mut order = vec![0; k];
    for i in (0..k).rev() {
        let prefix = &prefixes[i];
        let pick = if b.contains(a[i]) {
            Some(a[i])
        } else {
            b.iter()
                .find(|&x| !assigned.contains(x) && !prefix.contains(x) && m.can_extend(prefix, x))
        };
        let Some(x) = pick else {
            return Err(Error::MatroidAxiom(format!(
                "no element of {b:?} can fill position {} against {a:?}",
                i + 1
            )));
        };
        assigned.insert(x);
        order[i] = x;
    }
    Ok(order)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedBound {
    pub value: f64,
    /// The optimum, ordered against the greedy solution.
    pub ordering: Vec<Element>,
    /// `ρ_i / ρ_{ω_i}(G^{i−1})` per step; absent where `ω_i = g_i`.
    pub d_prime: Vec<Option<Discriminant>>,
}

/// Guarantee computed against a known optimum `omega`:
/// `min(1, 1/(c + max 1/d'_i))` over steps before `i0` where the optimum's
/// matched element differs from greedy's pick.
pub fn refined_bound(
    trace: &GreedyTrace,
    z: &Valuation,
    m: &Matroid,
    omega: &ElementSet,
    c: f64,
    tol: Tolerance,
) -> Result<RefinedBound> {
    let greedy = trace.order();
    let ordering = basis_ordering(m, &greedy, omega)?;
    let i0 = compute_i0(trace, m);
    let mut prefix = m.ground().empty_set();
    let mut d_prime = Vec::with_capacity(greedy.len());
    let mut worst: f64 = 0.0;
    for (idx, step) in trace.steps.iter().enumerate() {
        let w = ordering[idx];
        let d = if w == step.chosen {
            None
        } else {
            let rival = z.gain(&prefix, w);
            Some(Discriminant::from_gains(step.gain, Some(rival), tol))
        };
        if let Some(d) = d {
            if step.iteration < i0 {
                worst = worst.max(d.reciprocal());
            }
        }
        d_prime.push(d);
        prefix.insert(step.chosen);
    }
    Ok(RefinedBound {
        value: capped_inverse(c + worst),
        ordering,
        d_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub half: f64,
    pub curvature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub online: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined: Option<f64>,
}

impl Bounds {
    /// The bounds that apply, by name.
    pub fn named(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![("half", self.half), ("curvature", self.curvature)];
        for (name, v) in [
            ("discriminant", self.discriminant),
            ("partition", self.partition),
            ("online", self.online),
            ("refined", self.refined),
        ] {
            if let Some(v) = v {
                out.push((name, v));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuaranteeReport {
    pub curvature: CurvatureReport,
    pub discriminants: Vec<Discriminant>,
    /// Per step: whether it falls at or after `i0` and so is excluded from `d_min`.
    pub post_i0: Vec<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i0: Option<usize>,
    pub d_min: Discriminant,
    /// Set when the matroid has a single basis, so greedy is trivially optimal.
    pub unique_basis: bool,
    pub bounds: Bounds,
}

/// Computes curvature, discriminants and every applicable bound for a trace.
pub fn analyze(trace: &GreedyTrace, instance: &Instance, tol: Tolerance) -> Result<GuaranteeReport> {
    let curv = curvature_report(instance.valuation(), tol)?;
    let c = curv.global;
    let steps = trace.steps.len();
    let mut bounds = Bounds {
        half: HALF_BOUND,
        curvature: curvature_bound(c),
        discriminant: None,
        partition: None,
        online: None,
        refined: None,
    };
    let report = match trace.algorithm {
        Algorithm::Greedy => {
            let discriminants = discriminant_general(trace, instance.valuation(), instance.matroid(), tol)?;
            let i0 = compute_i0(trace, instance.matroid());
            let d_min = discriminants[..i0.saturating_sub(1).min(steps)]
                .iter()
                .fold(Discriminant::Infinite, |a, &d| a.min(d));
            bounds.discriminant = Some(discriminant_bound(c, &discriminants, i0));
            GuaranteeReport {
                curvature: curv,
                post_i0: (1..=steps).map(|i| i >= i0).collect(),
                discriminants,
                i0: Some(i0),
                d_min,
                unique_basis: i0 == 1,
                bounds,
            }
        }
        Algorithm::GreedyM | Algorithm::GreedyOn => {
            let discriminants = welfare_discriminants(trace, instance, trace.algorithm, tol)?;
            let per_user = curv.per_user.clone().unwrap_or_default();
            let terms: Vec<(f64, Discriminant)> = trace
                .steps
                .iter()
                .zip(&discriminants)
                .map(|(s, &d)| (per_user[s.pair.map_or(0, |p| p.user)], d))
                .collect();
            let value = partition_bound(&terms);
            if trace.algorithm == Algorithm::GreedyM {
                bounds.partition = Some(value);
            } else {
                bounds.online = Some(value);
            }
            GuaranteeReport {
                curvature: curv,
                post_i0: vec![false; steps],
                d_min: discriminants.iter().fold(Discriminant::Infinite, |a, &d| a.min(d)),
                discriminants,
                i0: None,
                unique_basis: false,
                bounds,
            }
        }
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greedy::{run_greedy, GreedyConfig};
    use crate::set::GroundSet;

    const TOL: Tolerance = Tolerance {
        relative: 1e-9,
        absolute: 1e-12,
    };

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_elements(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn discriminant_conventions() {
        assert_eq!(Discriminant::from_gains(2.0, None, TOL), Discriminant::Infinite);
        assert_eq!(Discriminant::from_gains(2.0, Some(0.0), TOL), Discriminant::Infinite);
        assert_eq!(
            Discriminant::from_gains(2.0, Some(2.0 + 1e-12), TOL),
            Discriminant::Finite(1.0)
        );
        assert_eq!(Discriminant::from_gains(3.0, Some(2.0), TOL), Discriminant::Finite(1.5));
        assert_eq!(Discriminant::Infinite.reciprocal(), 0.0);
        assert_eq!(serde_json::to_string(&Discriminant::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn curvature_of_simple_functions() {
        assert_eq!(
            curvature(&Valuation::modular(vec![1.0, 2.0]).unwrap(), TOL).unwrap(),
            0.0
        );
        let cover = Valuation::coverage(vec![vec![0, 1], vec![1, 2]], vec![1.0; 3]).unwrap();
        assert!((curvature(&cover, TOL).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(
            curvature(&Valuation::modular(vec![0.0, 0.0]).unwrap(), TOL).unwrap(),
            0.0
        );
        let bad = Valuation::tabular(1, vec![0.0, -1.0]).unwrap();
        assert!(matches!(curvature(&bad, TOL), Err(Error::Validation(_))));
    }

    #[test]
    fn bound_formulas() {
        let one = Discriminant::Finite(1.0);
        assert_eq!(discriminant_bound(1.0, &[one], 2), 0.5);
        assert_eq!(discriminant_bound(0.0, &[Discriminant::Finite(3.0)], 2), 1.0);
        let b = discriminant_bound(0.5, &[Discriminant::Finite(1.5)], 2);
        assert!((b - 6.0 / 7.0).abs() < 1e-15);
        // empty range
        assert_eq!(discriminant_bound(0.7, &[one], 1), 1.0);
        assert_eq!(partition_bound(&[(0.5, Discriminant::Infinite)]), 1.0);
        assert_eq!(partition_bound(&[(0.0, Discriminant::Infinite)]), 1.0);
        assert!((partition_bound(&[(0.5, Discriminant::Finite(1.5))]) - 6.0 / 7.0).abs() < 1e-15);
        assert_eq!(partition_bound(&[(0.25, one), (0.25, one)]), curvature_bound(0.25));
    }

    #[test]
    fn i0_on_uniform_matroids() {
        let z = Valuation::modular(vec![3.0, 2.0, 1.0]).unwrap();
        let cfg = GreedyConfig::default();
        let tight = Matroid::uniform(GroundSet::new(3), 3).unwrap();
        assert_eq!(compute_i0(&run_greedy(&z, &tight, &cfg).unwrap(), &tight), 1);
        // one spare element: K - i + 2 stay eligible at every step
        let loose = Matroid::uniform(GroundSet::new(3), 2).unwrap();
        assert_eq!(compute_i0(&run_greedy(&z, &loose, &cfg).unwrap(), &loose), 3);
    }

    #[test]
    fn forced_tail_cases() {
        let m = Matroid::uniform(GroundSet::new(3), 3).unwrap();
        assert_eq!(forced_tail(&m, &set(3, &[])).unwrap(), Some(set(3, &[0, 1, 2])));
        let m = Matroid::uniform(GroundSet::new(4), 3).unwrap();
        assert_eq!(forced_tail(&m, &set(4, &[])).unwrap(), None);
        assert_eq!(forced_tail(&m, &set(4, &[0, 1])).unwrap(), None);
    }

    #[test]
    fn ordering_pins_common_elements() {
        let m = Matroid::uniform(GroundSet::new(5), 3).unwrap();
        let a = [4, 1, 0];
        let order = basis_ordering(&m, &a, &set(5, &[1, 2, 3])).unwrap();
        assert_eq!(order[1], 1);
        assert_eq!(basis_ordering(&m, &a, &set(5, &[0, 1, 4])).unwrap(), a.to_vec());
        assert!(basis_ordering(&m, &a, &set(5, &[0, 1])).is_err());
    }

    #[test]
    fn refined_bound_is_one_when_greedy_is_optimal() {
        let z = Valuation::coverage(vec![vec![0, 1], vec![1, 2], vec![3]], vec![1.0; 4]).unwrap();
        let m = Matroid::uniform(GroundSet::new(3), 2).unwrap();
        let trace = run_greedy(&z, &m, &GreedyConfig::default()).unwrap();
        let c = curvature(&z, TOL).unwrap();
        let r = refined_bound(&trace, &z, &m, &trace.final_set, c, TOL).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.d_prime.iter().all(Option::is_none));
    }
}
