//! The offline greedy, the welfare greedy and the online welfare greedy.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{curvature, Discriminant};
use crate::error::{Error, Result};
use crate::instance::{Instance, PartitionView};
use crate::matroid::{Matroid, PairElement};
use crate::set::{Element, ElementSet, GroundSet};
use crate::tolerance::Tolerance;
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Best eligible element at every step.
    Greedy,
    /// Best unallocated user/resource pair, ties broken by curvature and discriminant.
    GreedyM,
    /// Resources arrive in a given order and go to the best user.
    GreedyOn,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::GreedyM => "greedy-m",
            Algorithm::GreedyOn => "greedy-on",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "greedy-m" => Ok(Algorithm::GreedyM),
            "greedy-on" => Ok(Algorithm::GreedyOn),
            other => Err(Error::Usage(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// How the offline greedy chooses among elements whose gains tie.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum TiePolicy {
    #[default]
    LowestIndex,
    HighestIndex,
    /// Earlier entries win; unlisted elements come after all listed ones, by index.
    Prefer(Vec<Element>),
}

impl TiePolicy {
    /// Picks from a non-empty, ascending tie set.
    pub fn pick(&self, ties: &[Element]) -> Element {
        match self {
            TiePolicy::LowestIndex => ties[0],
            TiePolicy::HighestIndex => ties[ties.len() - 1],
            TiePolicy::Prefer(order) => order.iter().copied().find(|e| ties.contains(e)).unwrap_or(ties[0]),
        }
    }

    /// Parses `lowest`, `highest` or `prefer:<items>`, where items are labels,
    /// indices, or label prefixes ending in `*`, separated by commas.
    pub fn parse(spec: &str, ground: &GroundSet) -> Result<Self> {
        match spec {
            "lowest" | "lowest-index" => return Ok(TiePolicy::LowestIndex),
            "highest" | "highest-index" => return Ok(TiePolicy::HighestIndex),
            _ => {}
        }
        let Some(list) = spec.strip_prefix("prefer:") else {
            return Err(Error::Usage(format!(
                "tie policy must be lowest, highest or prefer:<elements>, got {spec:?}"
            )));
        };
        let mut order = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let matches: Vec<Element> = match item.strip_suffix('*') {
                Some(prefix) => (0..ground.size())
                    .filter(|&e| ground.label(e).starts_with(prefix))
                    .collect(),
                None => ground.lookup(item).into_iter().collect(),
            };
            if matches.is_empty() {
                return Err(Error::Usage(format!("tie preference {item:?} matches no element")));
            }
            for e in matches {
                if !order.contains(&e) {
                    order.push(e);
                }
            }
        }
        Ok(TiePolicy::Prefer(order))
    }

    /// Canonical text form; parsing it back yields the same policy.
    pub fn describe(&self, ground: &GroundSet) -> String {
        match self {
            TiePolicy::LowestIndex => "lowest-index".into(),
            TiePolicy::HighestIndex => "highest-index".into(),
            TiePolicy::Prefer(order) => {
                let items: Vec<String> = order.iter().map(|&e| ground.label(e).into_owned()).collect();
                format!("prefer:{}", items.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct GreedyConfig {
    pub tie_policy: TiePolicy,
    pub tolerance: Tolerance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    /// 1-based.
    pub iteration: usize,
    pub chosen: Element,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairElement>,
    pub gain: f64,
    /// Number of elements that could legally be added before this step.
    pub eligible_count: usize,
    /// Best competing gain, absent when there was no competitor.
    pub runner_up_gain: Option<f64>,
    /// Elements whose gain tied the maximum, ascending.
    pub tie_set: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyTrace {
    pub algorithm: Algorithm,
    pub steps: Vec<StepRecord>,
    #[serde(serialize_with = "serialize_set")]
    pub final_set: ElementSet,
    pub final_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arrival: Option<Vec<usize>>,
}

fn serialize_set<S: serde::Serializer>(set: &ElementSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

impl GreedyTrace {
    /// Chosen elements in pick order.
    pub fn order(&self) -> Vec<Element> {
        self.steps.iter().map(|s| s.chosen).collect()
    }

    /// The partial solution before step `i` (1-based).
    pub fn prefix(&self, i: usize) -> ElementSet {
        let mut s = ElementSet::empty(self.final_set.capacity());
        for step in &self.steps[..i - 1] {
            s.insert(step.chosen);
        }
        s
    }
}

fn best_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

/// Picks, for `rank` steps, the eligible element of largest marginal gain.
pub fn run_greedy(z: &Valuation, m: &Matroid, cfg: &GreedyConfig) -> Result<GreedyTrace> {
    if z.size() != m.ground().size() {
        return Err(Error::invalid(format!(
            "valuation has {} elements but matroid has {}",
            z.size(),
            m.ground().size()
        )));
    }
    let tol = cfg.tolerance;
    let rank = m.rank();
    let mut g = m.ground().empty_set();
    let mut steps = Vec::with_capacity(rank);
    for iteration in 1..=rank {
        let eligible = m.eligible_unchecked(&g);
        if eligible.is_empty() {
            return Err(Error::RankInconsistency { iteration, rank });
        }
        let gains: Vec<(Element, f64)> = eligible.iter().map(|x| (x, z.gain(&g, x))).collect();
        let best = best_of(gains.iter().map(|p| p.1)).unwrap_or(0.0);
        let tie_set: Vec<Element> = gains.iter().filter(|p| tol.eq(p.1, best)).map(|p| p.0).collect();
        let chosen = cfg.tie_policy.pick(&tie_set);
        let gain = gains.iter().find(|p| p.0 == chosen).map_or(best, |p| p.1);
        let runner_up_gain = best_of(gains.iter().filter(|p| p.0 != chosen).map(|p| p.1));
        steps.push(StepRecord {
            iteration,
            chosen,
            pair: None,
            gain,
            eligible_count: eligible.len(),
            runner_up_gain,
            tie_set,
        });
        g.insert(chosen);
    }
    Ok(GreedyTrace {
        algorithm: Algorithm::Greedy,
        steps,
        final_value: z.eval(&g),
        final_set: g,
        arrival: None,
    })
}

fn welfare(instance: &Instance) -> Result<PartitionView<'_>> {
    instance.partition_view().ok_or_else(|| {
        Error::Usage(
            "this algorithm needs a partition instance (pair-partition matroid with per-user valuations)".into(),
        )
    })
}

fn user_curvatures(view: &PartitionView<'_>, tol: Tolerance) -> Result<Vec<f64>> {
    view.per_user.iter().map(|z| curvature(z, tol)).collect()
}

struct Shares {
    sets: Vec<ElementSet>,
}

impl Shares {
    fn new(view: &PartitionView<'_>) -> Self {
        Shares {
            sets: vec![ElementSet::empty(view.resources); view.users],
        }
    }

    fn gains(&self, view: &PartitionView<'_>, resource: usize) -> Vec<f64> {
        (0..view.users)
            .map(|u| view.per_user[u].gain(&self.sets[u], resource))
            .collect()
    }
}

fn best_rival(gains: &[f64], user: usize) -> Option<f64> {
    best_of(gains.iter().enumerate().filter(|(v, _)| *v != user).map(|(_, g)| *g))
}

/// Allocates every resource, each step taking the best unallocated
/// user/resource pair. Ties prefer the smallest `c_u + 1/d(u, r)`, then the
/// highest pair index.
pub fn run_greedy_m(instance: &Instance, cfg: &GreedyConfig) -> Result<GreedyTrace> {
    let view = welfare(instance)?;
    let tol = cfg.tolerance;
    let curv = user_curvatures(&view, tol)?;
    let mut shares = Shares::new(&view);
    let mut unallocated: Vec<usize> = (0..view.resources).collect();
    let mut g = instance.ground().empty_set();
    let mut steps = Vec::with_capacity(view.resources);
    for iteration in 1..=view.resources {
        let table: Vec<(usize, Vec<f64>)> = unallocated.iter().map(|&r| (r, shares.gains(&view, r))).collect();
        let best = best_of(table.iter().flat_map(|(_, gs)| gs.iter().copied())).unwrap_or(0.0);
        let mut ties: Vec<(usize, usize)> = Vec::new();
        for (r, gs) in &table {
            for (u, &gain) in gs.iter().enumerate() {
                if tol.eq(gain, best) {
                    ties.push((u, *r));
                }
            }
        }
        let key = |&(u, r): &(usize, usize)| {
            let gs = &table.iter().find(|(rr, _)| *rr == r).unwrap().1;
            curv[u] + Discriminant::from_gains(gs[u], best_rival(gs, u), tol).reciprocal()
        };
        let (user, resource) = if ties.len() == 1 {
            ties[0]
        } else {
            let lowest = ties.iter().map(key).fold(f64::INFINITY, f64::min);
            *ties
                .iter()
                .filter(|t| tol.eq(key(t), lowest))
                .max_by_key(|(u, r)| view.index(*u, *r))
                .unwrap()
        };
        let gains = &table.iter().find(|(r, _)| *r == resource).unwrap().1;
        let mut tie_set: Vec<Element> = ties.iter().map(|&(u, r)| view.index(u, r)).collect();
        tie_set.sort_unstable();
        let chosen = view.index(user, resource);
        steps.push(StepRecord {
            iteration,
            chosen,
            pair: Some(PairElement::new(user, resource)),
            gain: gains[user],
            eligible_count: view.users * unallocated.len(),
            runner_up_gain: best_rival(gains, user),
            tie_set,
        });
        shares.sets[user].insert(resource);
        g.insert(chosen);
        unallocated.retain(|&r| r != resource);
    }
    Ok(GreedyTrace {
        algorithm: Algorithm::GreedyM,
        steps,
        final_value: instance.valuation().eval(&g),
        final_set: g,
        arrival: None,
    })
}

/// Checks that `arrival` is a permutation of `0..n`.
pub fn check_permutation(arrival: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &r in arrival {
        if r >= n || std::mem::replace(&mut seen[r], true) {
            return Err(Error::invalid(format!(
                "arrival order {arrival:?} is not a permutation of 0..{n}"
            )));
        }
    }
    if arrival.len() != n {
        return Err(Error::invalid(format!(
            "arrival order {arrival:?} is not a permutation of 0..{n}"
        )));
    }
    Ok(())
}

/// Allocates resources irrevocably in arrival order, each to the user with
/// the largest gain; ties go to the least curved user, then the lowest index.
pub fn run_greedy_on(instance: &Instance, arrival: &[usize], cfg: &GreedyConfig) -> Result<GreedyTrace> {
    let view = welfare(instance)?;
    check_permutation(arrival, view.resources)?;
    let tol = cfg.tolerance;
    let curv = user_curvatures(&view, tol)?;
    let mut shares = Shares::new(&view);
    let mut g = instance.ground().empty_set();
    let mut steps = Vec::with_capacity(view.resources);
    for (t, &resource) in arrival.iter().enumerate() {
        let gains = shares.gains(&view, resource);
        let best = best_of(gains.iter().copied()).unwrap_or(0.0);
        let ties: Vec<usize> = (0..view.users).filter(|&u| tol.eq(gains[u], best)).collect();
        let least = ties.iter().map(|&u| curv[u]).fold(f64::INFINITY, f64::min);
        let user = *ties.iter().find(|&&u| tol.eq(curv[u], least)).unwrap();
        let chosen = view.index(user, resource);
        steps.push(StepRecord {
            iteration: t + 1,
            chosen,
            pair: Some(PairElement::new(user, resource)),
            gain: gains[user],
            eligible_count: view.users * (view.resources - t),
            runner_up_gain: best_rival(&gains, user),
            tie_set: ties.iter().map(|&u| view.index(u, resource)).collect(),
        });
        shares.sets[user].insert(resource);
        g.insert(chosen);
    }
    Ok(GreedyTrace {
        algorithm: Algorithm::GreedyOn,
        steps,
        final_value: instance.valuation().eval(&g),
        final_set: g,
        arrival: Some(arrival.to_vec()),
    })
}

/// Runs `algorithm` on `instance`; the arrival order defaults to `0..n`.
pub fn run(
    instance: &Instance,
    algorithm: Algorithm,
    arrival: Option<&[usize]>,
    cfg: &GreedyConfig,
) -> Result<GreedyTrace> {
    match algorithm {
        Algorithm::Greedy => {
            if arrival.is_some() {
                return Err(Error::Usage("an arrival order only applies to greedy-on".into()));
            }
            run_greedy(instance.valuation(), instance.matroid(), cfg)
        }
        Algorithm::GreedyM => {
            if arrival.is_some() {
                return Err(Error::Usage("an arrival order only applies to greedy-on".into()));
            }
            run_greedy_m(instance, cfg)
        }
        Algorithm::GreedyOn => {
            let identity: Vec<usize>;
            let order = match arrival {
                Some(a) => a,
                None => {
                    let n = welfare(instance)?.resources;
                    identity = (0..n).collect();
                    &identity
                }
            };
            run_greedy_on(instance, order, cfg)
        }
    }
}
