//! Checks of the matroid axioms and of normalised monotone submodularity.
//!
//! Violations are collected with witnesses rather than raised as errors.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matroid::{Matroid, MatroidKind, PairElement};
use crate::set::{Element, ElementSet};
use crate::tolerance::Tolerance;
use crate::valuation::{Valuation, ValuationKind};

/// Number of stored witnesses per report; further violations are only counted.
const MAX_WITNESSES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    EmptySetIndependent,
    Hereditary,
    Augmentation,
    Normalization,
    Monotonicity,
    Submodularity,
}

/// One violated axiom. `set` is `S`, `superset` is `T`, `element` is `x` in
/// the axiom's statement; unused parts are absent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub set: Vec<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superset: Option<Vec<Element>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<Element>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: S={:?}", self.axiom, self.set)?;
        if let Some(t) = &self.superset {
            write!(f, " T={t:?}")?;
        }
        if let Some(x) = self.element {
            write!(f, " x={x}")?;
        }
        write!(f, " ({})", self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct ValidationConfig {
    /// Ground sets up to this size are checked exhaustively.
    pub exhaustive_limit: usize,
    /// Random probes used above the limit.
    pub samples: usize,
    pub seed: u64,
    pub tolerance: Tolerance,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            exhaustive_limit: 12,
            samples: 4096,
            seed: 0,
            tolerance: Tolerance::default(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    /// False when some part was only spot-checked.
    pub exhaustive: bool,
    pub matroid: Vec<Violation>,
    pub valuation: Vec<Violation>,
    pub total_violations: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.total_violations == 0
    }
}

#[derive(Default)]
struct Collector {
    found: Vec<Violation>,
    total: usize,
}

impl Collector {
    fn push(&mut self, v: Violation) {
        self.total += 1;
        if self.found.len() < MAX_WITNESSES {
            self.found.push(v);
        }
    }
}

pub fn validate_oracles(z: &Valuation, m: &Matroid, cfg: &ValidationConfig) -> ValidationReport {
    let mut mc = Collector::default();
    let matroid_exhaustive = check_matroid(m, cfg.exhaustive_limit, &mut mc);
    let mut vc = Collector::default();
    let valuation_exhaustive = check_valuation(z, cfg, &mut vc);
    ValidationReport {
        exhaustive: matroid_exhaustive && valuation_exhaustive,
        total_violations: mc.total + vc.total,
        matroid: mc.found,
        valuation: vc.found,
    }
}

/// All matroid-axiom violations, checked exhaustively for explicit families
/// and for other kinds on ground sets of at most 12 elements.
pub fn matroid_violations(m: &Matroid) -> Vec<Violation> {
    let mut c = Collector::default();
    check_matroid(m, ValidationConfig::default().exhaustive_limit, &mut c);
    c.found
}

pub fn valuation_violations(z: &Valuation, cfg: &ValidationConfig) -> Vec<Violation> {
    let mut c = Collector::default();
    check_valuation(z, cfg, &mut c);
    c.found
}

fn check_matroid(m: &Matroid, limit: usize, out: &mut Collector) -> bool {
    let n = m.ground().size();
    let family: Vec<ElementSet> = match m.kind() {
        MatroidKind::Explicit { independent_sets } => independent_sets.clone(),
        _ if n <= limit => (0..1u64 << n)
            .map(|mask| ElementSet::from_mask(n, mask))
            .filter(|s| m.is_independent(s))
            .collect(),
        // the structured kinds satisfy the axioms by construction
        _ => return false,
    };
    check_family(n, &family, out);
    true
}

fn check_family(n: usize, family: &[ElementSet], out: &mut Collector) {
    let members: HashSet<&ElementSet> = family.iter().collect();
    let empty = ElementSet::empty(n);
    if !members.contains(&empty) {
        out.push(Violation {
            axiom: Axiom::EmptySetIndependent,
            set: Vec::new(),
            superset: None,
            element: None,
            detail: "the empty set is not independent".into(),
        });
    }
    let mut reported = HashSet::new();
    let mut hereditary = true;
    for s in family {
        for x in s.iter() {
            let sub = s.without(x);
            if !members.contains(&sub) {
                hereditary = false;
                if reported.insert(sub.clone()) {
                    out.push(Violation {
                        axiom: Axiom::Hereditary,
                        set: sub.to_vec(),
                        superset: Some(s.to_vec()),
                        element: None,
                        detail: "subset of an independent set is not independent".into(),
                    });
                }
            }
        }
    }
    // With the hereditary property, exchanging between consecutive sizes is
    // equivalent to the general augmentation axiom.
    let max_len = family.iter().map(ElementSet::len).max().unwrap_or(0);
    let mut by_len: Vec<Vec<&ElementSet>> = vec![Vec::new(); max_len + 1];
    for s in family {
        by_len[s.len()].push(s);
    }
    for k in 0..max_len {
        let pairs = by_len[k].iter().flat_map(|s| {
            let larger: Vec<&ElementSet> = if hereditary {
                by_len[k + 1].clone()
            } else {
                by_len[k + 1..].iter().flatten().copied().collect()
            };
            larger.into_iter().map(move |t| (*s, t))
        });
        for (s, t) in pairs {
            let extendable = t.difference(s).iter().any(|x| members.contains(&s.with(x)));
            if !extendable {
                out.push(Violation {
                    axiom: Axiom::Augmentation,
                    set: s.to_vec(),
                    superset: Some(t.to_vec()),
                    element: None,
                    detail: "no element of T \\ S extends S".into(),
                });
            }
        }
    }
}

fn check_valuation(z: &Valuation, cfg: &ValidationConfig, out: &mut Collector) -> bool {
    let tol = cfg.tolerance;
    let n = z.size();
    let empty = z.eval(&ElementSet::empty(n));
    if !tol.is_zero(empty) {
        out.push(Violation {
            axiom: Axiom::Normalization,
            set: Vec::new(),
            superset: None,
            element: None,
            detail: format!("value of the empty set is {empty}"),
        });
    }
    match z.kind() {
        ValuationKind::Modular { weights } => {
            for (e, &w) in weights.iter().enumerate() {
                if tol.lt(w, 0.0) {
                    out.push(monotone_witness(vec![], e, w));
                }
            }
            true
        }
        ValuationKind::Coverage {
            covers,
            universe_weights,
        } => {
            for (i, &w) in universe_weights.iter().enumerate() {
                if tol.lt(w, 0.0) {
                    if let Some(e) = covers.iter().position(|c| c.contains(&i)) {
                        out.push(monotone_witness(vec![], e, w));
                    }
                }
            }
            true
        }
        ValuationKind::Discounted { terms } => {
            for (x, t) in terms.iter().enumerate() {
                if let Some(trigger) = t.trigger {
                    if tol.gt(t.reduced, t.full) {
                        out.push(Violation {
                            axiom: Axiom::Submodularity,
                            set: Vec::new(),
                            superset: Some(vec![trigger]),
                            element: Some(x),
                            detail: format!(
                                "gain rises from {} to {} when the trigger is present",
                                t.full, t.reduced
                            ),
                        });
                    }
                }
                // the smallest gain of x: every term it discounts is present,
                // and so is its own trigger when that lowers its value
                let mut worst = ElementSet::empty(n);
                for (j, tj) in terms.iter().enumerate() {
                    if tj.trigger == Some(x) && tj.reduced < tj.full {
                        worst.insert(j);
                    }
                }
                if let Some(trigger) = t.trigger {
                    if t.reduced < t.full {
                        worst.insert(trigger);
                    }
                }
                let gain = z.gain(&worst, x);
                if tol.lt(gain, 0.0) {
                    out.push(monotone_witness(worst.to_vec(), x, gain));
                }
            }
            true
        }
        ValuationKind::PartitionSum {
            resources, per_user, ..
        } => {
            let mut exhaustive = true;
            for (u, zu) in per_user.iter().enumerate() {
                let mut inner = Collector::default();
                exhaustive &= check_valuation(zu, cfg, &mut inner);
                let lift = |r: Element| PairElement::new(u, r).index(*resources);
                out.total += inner.total.saturating_sub(inner.found.len());
                for v in inner.found {
                    out.push(Violation {
                        set: v.set.into_iter().map(lift).collect(),
                        superset: v.superset.map(|t| t.into_iter().map(lift).collect()),
                        element: v.element.map(lift),
                        detail: format!("user {u}: {}", v.detail),
                        ..v
                    });
                }
            }
            exhaustive
        }
        ValuationKind::Tabular { .. } => {
            if n <= cfg.exhaustive_limit {
                for mask in 0..1u64 << n {
                    check_at(z, &ElementSet::from_mask(n, mask), None, tol, out);
                }
                true
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                for _ in 0..cfg.samples {
                    let mask = rng.random::<u64>() & ((1u64 << n) - 1);
                    let probe = rng.random_range(0..n);
                    check_at(z, &ElementSet::from_mask(n, mask), Some(probe), tol, out);
                }
                false
            }
        }
    }
}

fn monotone_witness(set: Vec<Element>, x: Element, gain: f64) -> Violation {
    let mut superset = set.clone();
    superset.push(x);
    superset.sort_unstable();
    Violation {
        axiom: Axiom::Monotonicity,
        set,
        superset: Some(superset),
        element: Some(x),
        detail: format!("adding {x} changes the value by {gain}"),
    }
}

/// Local monotonicity and diminishing-returns checks at `s`. With `only`,
/// the second element of each pair is restricted to that one.
fn check_at(z: &Valuation, s: &ElementSet, only: Option<Element>, tol: Tolerance, out: &mut Collector) {
    let n = z.size();
    let zs = z.eval(s);
    let outside: Vec<Element> = (0..n).filter(|&x| !s.contains(x)).collect();
    for &x in &outside {
        let zsx = z.eval(&s.with(x));
        if tol.lt(zsx, zs) {
            out.push(Violation {
                axiom: Axiom::Monotonicity,
                set: s.to_vec(),
                superset: Some(s.with(x).to_vec()),
                element: Some(x),
                detail: format!("value drops from {zs} to {zsx}"),
            });
        }
        for &y in &outside {
            if y == x || only.is_some_and(|o| o != y) {
                continue;
            }
            let t = s.with(y);
            let zt = z.eval(&t);
            let ztx = z.eval(&t.with(x));
            let small = zsx - zs;
            let large = ztx - zt;
            let scale = zs.abs().max(zsx.abs()).max(zt.abs()).max(ztx.abs());
            let slack = (tol.relative * scale).max(tol.absolute);
            if large - small > slack {
                out.push(Violation {
                    axiom: Axiom::Submodularity,
                    set: s.to_vec(),
                    superset: Some(t.to_vec()),
                    element: Some(x),
                    detail: format!("gain of {x} rises from {small} to {large}"),
                });
            }
        }
    }
}
