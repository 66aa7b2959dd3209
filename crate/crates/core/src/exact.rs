//! Exact references: optimal bases, exhaustive curvature, competitive ratios
//! and end-to-end guarantee checks.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::analysis::{self, analyze, discriminant_online, online_bound, refined_bound, Discriminant};
use crate::error::{Error, Result};
use crate::greedy::{self, Algorithm, GreedyConfig, GreedyTrace};
use crate::instance::Instance;
use crate::matroid::Matroid;
use crate::set::{Element, ElementSet};
use crate::tolerance::Tolerance;
use crate::valuation::{DiscountTerm, Valuation, ValuationKind};

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Largest ground set for exhaustive curvature.
pub const MAX_CURVATURE_ELEMENTS: usize = 12;

/// Largest resource count for the all-permutations sweep.
pub const MAX_PERMUTED_RESOURCES: usize = 8;

/// Enumeration cap: `SUBMATROID_CAP` if set and valid, else [`DEFAULT_CAP`].
pub fn enumeration_cap() -> u64 {
    std::env::var("SUBMATROID_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimumMethod {
    /// Every basis enumerated.
    Enumeration,
    /// Dynamic programme over a chain of capacity-one blocks.
    BlockChain,
    /// Every user assignment of a welfare instance enumerated.
    Assignment,
}

fn serialize_set<S: Serializer>(set: &ElementSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(set.iter())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimumCertificate {
    #[serde(serialize_with = "serialize_set")]
    pub optimum_set: ElementSet,
    pub optimum_value: f64,
    /// Bases (or DP transitions, or assignments) examined.
    pub enumerated: u64,
    pub method: OptimumMethod,
}

struct Search<'a> {
    z: &'a Valuation,
    m: &'a Matroid,
    n: usize,
    k: usize,
    cap: u64,
    tol: Tolerance,
    count: u64,
    best: Option<(f64, ElementSet)>,
}

impl Search<'_> {
    fn dfs(&mut self, next: usize, current: &mut ElementSet, len: usize) -> Result<()> {
        if len == self.k {
            self.count += 1;
            if self.count > self.cap {
                return Err(Error::CapExceeded {
                    what: "bases",
                    cap: self.cap,
                    reached: self.count,
                });
            }
            let v = self.z.eval(current);
            if self.best.as_ref().is_none_or(|(b, _)| self.tol.gt(v, *b)) {
                self.best = Some((v, current.clone()));
            }
            return Ok(());
        }
        for x in next..self.n {
            if self.n - x < self.k - len {
                break;
            }
            if self.m.can_extend(current, x) {
                current.insert(x);
                self.dfs(x + 1, current, len + 1)?;
                current.remove(x);
            }
        }
        Ok(())
    }
}

/// Best basis by exhaustive search over rank-sized independent sets in
/// lexicographic order; the first maximiser wins ties.
pub fn brute_force_optimum(z: &Valuation, m: &Matroid, cap: u64, tol: Tolerance) -> Result<OptimumCertificate> {
    let n = m.ground().size();
    if z.size() != n {
        return Err(Error::invalid("valuation and matroid sizes differ"));
    }
    let mut search = Search {
        z,
        m,
        n,
        k: m.rank(),
        cap,
        tol,
        count: 0,
        best: None,
    };
    search.dfs(0, &mut ElementSet::empty(n), 0)?;
    let (value, set) = search
        .best
        .ok_or_else(|| Error::MatroidAxiom(format!("no independent set of size {}", m.rank())))?;
    Ok(OptimumCertificate {
        optimum_set: set,
        optimum_value: value,
        enumerated: search.count,
        method: OptimumMethod::Enumeration,
    })
}

/// The valuation as per-element discount terms over the whole ground set, if
/// it has that form.
fn discount_terms(z: &Valuation) -> Option<Vec<DiscountTerm>> {
    match z.kind() {
        ValuationKind::Discounted { terms } => Some(terms.clone()),
        ValuationKind::Modular { weights } => Some(weights.iter().map(|&w| DiscountTerm::plain(w)).collect()),
        ValuationKind::PartitionSum {
            resources, per_user, ..
        } => {
            let mut all = Vec::with_capacity(z.size());
            for (u, zu) in per_user.iter().enumerate() {
                for t in discount_terms(zu)? {
                    all.push(DiscountTerm {
                        trigger: t.trigger.map(|r| u * resources + r),
                        ..t
                    });
                }
            }
            Some(all)
        }
        _ => None,
    }
}

/// Exact optimum by dynamic programming, when the matroid is a chain of
/// capacity-one blocks and every discount trigger sits in the block just
/// before its element. Returns `None` when the structure does not apply.
pub fn chain_optimum(z: &Valuation, m: &Matroid, tol: Tolerance) -> Option<OptimumCertificate> {
    let (blocks, caps) = m.blocks()?;
    if caps.iter().any(|&c| c != 1) || z.size() != m.ground().size() {
        return None;
    }
    let terms = discount_terms(z)?;
    let mut block_of = vec![0; z.size()];
    for (b, block) in blocks.iter().enumerate() {
        for &e in block {
            block_of[e] = b;
        }
    }
    for (e, t) in terms.iter().enumerate() {
        if let Some(x) = t.trigger {
            if block_of[e] == 0 || block_of[x] != block_of[e] - 1 {
                return None;
            }
        }
    }
    let contrib = |x: Element, prev: Option<Element>| {
        let t = &terms[x];
        if t.trigger.is_some() && t.trigger == prev {
            t.reduced
        } else {
            t.full
        }
    };
    let mut transitions = 0u64;
    // best[b][k]: best value of blocks 0..=b with blocks[b][k] chosen, and its predecessor slot
    let mut best: Vec<Vec<(f64, usize)>> = Vec::with_capacity(blocks.len());
    best.push(blocks[0].iter().map(|&x| (contrib(x, None), 0)).collect());
    for b in 1..blocks.len() {
        let prev = &best[b - 1];
        let row = blocks[b]
            .iter()
            .map(|&x| {
                let mut choice: Option<(f64, usize)> = None;
                for (k, &p) in blocks[b - 1].iter().enumerate() {
                    transitions += 1;
                    let v = prev[k].0 + contrib(x, Some(p));
                    if choice.is_none_or(|(c, _)| tol.gt(v, c)) {
                        choice = Some((v, k));
                    }
                }
                choice.unwrap()
            })
            .collect();
        best.push(row);
    }
    let last = best.len() - 1;
    let (mut slot, _) = best[last]
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bk, bv), (k, &(v, _))| {
            if bv == f64::NEG_INFINITY || tol.gt(v, bv) {
                (k, v)
            } else {
                (bk, bv)
            }
        });
    let mut set = m.ground().empty_set();
    for b in (0..blocks.len()).rev() {
        set.insert(blocks[b][slot]);
        slot = best[b][slot].1;
    }
    Some(OptimumCertificate {
        optimum_value: z.eval(&set),
        optimum_set: set,
        enumerated: transitions,
        method: OptimumMethod::BlockChain,
    })
}

/// Exact optimum, by the block-chain programme when it applies and by
/// enumeration otherwise.
pub fn exact_optimum(z: &Valuation, m: &Matroid, cap: u64, tol: Tolerance) -> Result<OptimumCertificate> {
    match chain_optimum(z, m, tol) {
        Some(cert) => Ok(cert),
        None => brute_force_optimum(z, m, cap, tol),
    }
}

/// Optimum of a welfare instance over all `m^n` assignments of resources to
/// users, independent of the matroid enumeration.
pub fn assignment_optimum(instance: &Instance, cap: u64, tol: Tolerance) -> Result<OptimumCertificate> {
    let view = instance
        .partition_view()
        .ok_or_else(|| Error::invalid("instance is not a partition instance"))?;
    let total = (view.users as u64)
        .checked_pow(view.resources as u32)
        .unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "assignments",
            cap,
            reached: total,
        });
    }
    let mut owner = vec![0usize; view.resources];
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..total {
        let value: f64 = (0..view.users)
            .map(|u| {
                let share = ElementSet::from_elements(view.resources, (0..view.resources).filter(|&r| owner[r] == u))
                    .expect("resources are in range");
                view.per_user[u].eval(&share)
            })
            .sum();
        if best.as_ref().is_none_or(|(b, _)| tol.gt(value, *b)) {
            best = Some((value, owner.clone()));
        }
        for slot in owner.iter_mut().rev() {
            *slot += 1;
            if *slot < view.users {
                break;
            }
            *slot = 0;
        }
    }
    let (value, owner) = best.expect("at least one assignment");
    let set = ElementSet::from_elements(
        instance.ground().size(),
        owner.iter().enumerate().map(|(r, &u)| view.index(u, r)),
    )?;
    Ok(OptimumCertificate {
        optimum_set: set,
        optimum_value: value,
        enumerated: total,
        method: OptimumMethod::Assignment,
    })
}

/// Curvature by minimising `ρ_j(S)/ρ_j(∅)` over every set `S` not containing `j`.
pub fn brute_force_curvature(z: &Valuation, tol: Tolerance) -> Result<f64> {
    let n = z.size();
    if n > MAX_CURVATURE_ELEMENTS {
        return Err(Error::CapExceeded {
            what: "elements for exhaustive curvature",
            cap: MAX_CURVATURE_ELEMENTS as u64,
            reached: n as u64,
        });
    }
    let empty = ElementSet::empty(n);
    let mut worst: Option<f64> = None;
    for j in 0..n {
        let first = z.gain(&empty, j);
        if tol.lt(first, 0.0) {
            return Err(Error::Validation(format!("element {j} has negative gain {first}")));
        }
        if first <= 0.0 || tol.is_zero(first) {
            continue;
        }
        for mask in 0..1u64 << n {
            if mask >> j & 1 == 1 {
                continue;
            }
            let ratio = z.gain(&ElementSet::from_mask(n, mask), j) / first;
            worst = Some(worst.map_or(ratio, |w| w.min(ratio)));
        }
    }
    Ok(worst.map_or(0.0, |w| (1.0 - w).clamp(0.0, 1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum PermutationMode {
    All,
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompetitiveRatio {
    pub mode: PermutationMode,
    /// False for sampled sweeps, whose worst ratio only bounds the true one from above.
    pub exhaustive: bool,
    pub permutations: u64,
    pub optimum_value: f64,
    pub worst_sigma: Vec<usize>,
    pub worst_ratio: f64,
    /// Smallest `ratio − bound` over the sweep, and the order attaining it.
    pub worst_slack: f64,
    pub worst_slack_sigma: Vec<usize>,
    pub worst_slack_bound: f64,
    /// Orders whose ratio fell below their own bound by more than the tolerance.
    pub violations: u64,
}

fn ratio(value: f64, optimum: f64, tol: Tolerance) -> f64 {
    if optimum <= 0.0 || tol.is_zero(optimum) {
        1.0
    } else {
        value / optimum
    }
}

fn online_guarantee(trace: &GreedyTrace, instance: &Instance, curv: &[f64], tol: Tolerance) -> Result<f64> {
    let d = discriminant_online(trace, instance, tol)?;
    let terms: Vec<(f64, Discriminant)> = trace
        .steps
        .iter()
        .zip(d)
        .map(|(s, d)| (curv[s.pair.map_or(0, |p| p.user)], d))
        .collect();
    Ok(online_bound(&terms))
}

/// Worst ratio of the online greedy to the offline optimum over arrival
/// orders, with each order also checked against its own guarantee.
pub fn exhaustive_competitive_ratio(
    instance: &Instance,
    mode: PermutationMode,
    cfg: &GreedyConfig,
    cap: u64,
) -> Result<CompetitiveRatio> {
    let tol = cfg.tolerance;
    let view = instance
        .partition_view()
        .ok_or_else(|| Error::Usage("competitive ratios need a partition instance".into()))?;
    let n = view.resources;
    let sigmas: Box<dyn Iterator<Item = Vec<usize>>> = match mode {
        PermutationMode::All => {
            if n > MAX_PERMUTED_RESOURCES {
                return Err(Error::CapExceeded {
                    what: "resources for the all-permutations sweep",
                    cap: MAX_PERMUTED_RESOURCES as u64,
                    reached: n as u64,
                });
            }
            Box::new((0..n).permutations(n))
        }
        PermutationMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new((0..count).map(move |_| {
                let mut sigma: Vec<usize> = (0..n).collect();
                sigma.shuffle(&mut rng);
                sigma
            }))
        }
    };
    let optimum = exact_optimum(instance.valuation(), instance.matroid(), cap, tol)?;
    let curv = analysis::curvature_report(instance.valuation(), tol)?
        .per_user
        .unwrap_or_default();
    let mut out = CompetitiveRatio {
        mode,
        exhaustive: mode == PermutationMode::All,
        permutations: 0,
        optimum_value: optimum.optimum_value,
        worst_sigma: Vec::new(),
        worst_ratio: f64::INFINITY,
        worst_slack: f64::INFINITY,
        worst_slack_sigma: Vec::new(),
        worst_slack_bound: 1.0,
        violations: 0,
    };
    for sigma in sigmas {
        let trace = greedy::run_greedy_on(instance, &sigma, cfg)?;
        let r = ratio(trace.final_value, optimum.optimum_value, tol);
        let bound = online_guarantee(&trace, instance, &curv, tol)?;
        let slack = r - bound;
        out.permutations += 1;
        if r < out.worst_ratio {
            out.worst_ratio = r;
            out.worst_sigma = sigma.clone();
        }
        if slack < out.worst_slack {
            out.worst_slack = slack;
            out.worst_slack_bound = bound;
            out.worst_slack_sigma = sigma;
        }
        if slack < -tol.relative {
            out.violations += 1;
        }
    }
    if out.permutations == 0 {
        out.worst_ratio = 1.0;
        out.worst_slack = 0.0;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub algorithm: Algorithm,
    pub optimum: OptimumCertificate,
    /// Greedy value; for the online algorithm, the value under the worst order.
    pub value: f64,
    pub ratio: f64,
    pub checks: Vec<BoundCheck>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub online: Option<CompetitiveRatio>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub greedy: GreedyConfig,
    pub permutations: PermutationMode,
    pub cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            greedy: GreedyConfig::default(),
            permutations: PermutationMode::All,
            cap: enumeration_cap(),
        }
    }
}

fn check(name: &str, ratio: f64, bound: f64, tol: Tolerance) -> BoundCheck {
    let slack = ratio - bound;
    BoundCheck {
        name: name.into(),
        bound,
        slack,
        pass: slack >= -tol.relative,
    }
}

/// Runs `algorithm`, computes the exact optimum and checks the measured ratio
/// against every applicable bound. The online algorithm is checked under
/// every arrival order of the sweep.
pub fn verify_guarantee(instance: &Instance, algorithm: Algorithm, opts: &VerifyOptions) -> Result<VerificationRecord> {
    let tol = opts.greedy.tolerance;
    if algorithm == Algorithm::GreedyOn {
        let sweep = exhaustive_competitive_ratio(instance, opts.permutations, &opts.greedy, opts.cap)?;
        let optimum = exact_optimum(instance.valuation(), instance.matroid(), opts.cap, tol)?;
        let c = analysis::curvature_report(instance.valuation(), tol)?.global;
        let worst = sweep.worst_ratio;
        let mut checks = vec![
            check("half", worst, analysis::HALF_BOUND, tol),
            check("curvature", worst, analysis::curvature_bound(c), tol),
        ];
        checks.push(BoundCheck {
            name: "online".into(),
            bound: sweep.worst_slack_bound,
            slack: sweep.worst_slack,
            pass: sweep.violations == 0,
        });
        return Ok(VerificationRecord {
            algorithm,
            value: worst * optimum.optimum_value,
            ratio: worst,
            pass: checks.iter().all(|c| c.pass),
            checks,
            optimum,
            online: Some(sweep),
        });
    }
    let trace = greedy::run(instance, algorithm, None, &opts.greedy)?;
    verify_trace(instance, &trace, opts)
}

/// Checks an existing offline trace against the exact optimum.
pub fn verify_trace(instance: &Instance, trace: &GreedyTrace, opts: &VerifyOptions) -> Result<VerificationRecord> {
    let tol = opts.greedy.tolerance;
    let optimum = exact_optimum(instance.valuation(), instance.matroid(), opts.cap, tol)?;
    let report = analyze(trace, instance, tol)?;
    let r = ratio(trace.final_value, optimum.optimum_value, tol);
    let mut checks: Vec<BoundCheck> = report
        .bounds
        .named()
        .into_iter()
        .map(|(name, b)| check(name, r, b, tol))
        .collect();
    if trace.algorithm == Algorithm::Greedy {
        let refined = refined_bound(
            trace,
            instance.valuation(),
            instance.matroid(),
            &optimum.optimum_set,
            report.curvature.global,
            tol,
        )?;
        checks.push(check("refined", r, refined.value, tol));
    }
    Ok(VerificationRecord {
        algorithm: trace.algorithm,
        value: trace.final_value,
        ratio: r,
        pass: checks.iter().all(|c| c.pass),
        checks,
        optimum,
        online: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::GroundSet;

    const TOL: Tolerance = Tolerance {
        relative: 1e-9,
        absolute: 1e-12,
    };

    #[test]
    fn modular_optimum_takes_top_weights() {
        let z = Valuation::modular(vec![1.0, 4.0, 2.0, 3.0]).unwrap();
        let m = Matroid::uniform(GroundSet::new(4), 2).unwrap();
        let cert = brute_force_optimum(&z, &m, DEFAULT_CAP, TOL).unwrap();
        assert_eq!(cert.optimum_set.to_vec(), vec![1, 3]);
        assert_eq!(cert.optimum_value, 7.0);
        assert_eq!(cert.enumerated, 6);
    }

    #[test]
    fn ties_resolve_to_the_lexicographically_first_basis() {
        let z = Valuation::modular(vec![1.0; 4]).unwrap();
        let m = Matroid::uniform(GroundSet::new(4), 2).unwrap();
        let cert = brute_force_optimum(&z, &m, DEFAULT_CAP, TOL).unwrap();
        assert_eq!(cert.optimum_set.to_vec(), vec![0, 1]);
    }

    #[test]
    fn cap_is_enforced() {
        let z = Valuation::modular(vec![1.0; 10]).unwrap();
        let m = Matroid::uniform(GroundSet::new(10), 5).unwrap();
        let err = brute_force_optimum(&z, &m, 100, TOL).unwrap_err();
        assert!(matches!(
            err,
            Error::CapExceeded {
                cap: 100,
                reached: 101,
                ..
            }
        ));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn chain_programme_matches_enumeration() {
        // three blocks of two; the second element of each block is discounted
        // when the first element of the previous block is present
        let terms = vec![
            DiscountTerm::plain(1.0),
            DiscountTerm::plain(1.2),
            DiscountTerm::triggered(2.0, 0.5, 0),
            DiscountTerm::plain(1.4),
            DiscountTerm::triggered(2.0, 0.1, 2),
            DiscountTerm::plain(1.5),
        ];
        let z = Valuation::discounted(terms).unwrap();
        let m = Matroid::partition(GroundSet::new(6), vec![vec![0, 1], vec![2, 3], vec![4, 5]], vec![1; 3]).unwrap();
        let chain = chain_optimum(&z, &m, TOL).unwrap();
        let brute = brute_force_optimum(&z, &m, DEFAULT_CAP, TOL).unwrap();
        assert!(TOL.eq(chain.optimum_value, brute.optimum_value));
        assert_eq!(chain.method, OptimumMethod::BlockChain);
    }

    #[test]
    fn chain_programme_declines_other_structures() {
        let z = Valuation::discounted(vec![DiscountTerm::triggered(1.0, 0.5, 1), DiscountTerm::plain(1.0)]).unwrap();
        let m = Matroid::partition(GroundSet::new(2), vec![vec![0], vec![1]], vec![1, 1]).unwrap();
        assert!(chain_optimum(&z, &m, TOL).is_none());
        let m = Matroid::uniform(GroundSet::new(2), 1).unwrap();
        assert!(chain_optimum(&z, &m, TOL).is_none());
    }

    #[test]
    fn assignment_and_pair_enumeration_agree() {
        let z1 = Valuation::tabular(2, vec![0.0, 3.0, 2.0, 4.0]).unwrap();
        let z2 = Valuation::tabular(2, vec![0.0, 2.5, 2.5, 3.0]).unwrap();
        let inst = Instance::partition(2, 2, vec![z1, z2]).unwrap();
        let a = assignment_optimum(&inst, DEFAULT_CAP, TOL).unwrap();
        let b = brute_force_optimum(inst.valuation(), inst.matroid(), DEFAULT_CAP, TOL).unwrap();
        assert!(TOL.eq(a.optimum_value, b.optimum_value));
        assert_eq!(a.optimum_value, 5.5);
    }

    #[test]
    fn exhaustive_curvature_of_coverage() {
        let z = Valuation::coverage(vec![vec![0, 1], vec![1, 2]], vec![1.0; 3]).unwrap();
        assert!((brute_force_curvature(&z, TOL).unwrap() - 0.5).abs() < 1e-15);
        let big = Valuation::modular(vec![1.0; 13]).unwrap();
        assert!(matches!(
            brute_force_curvature(&big, TOL),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn single_resource_is_one_decision() {
        let inst = Instance::partition(
            2,
            1,
            vec![
                Valuation::modular(vec![1.0]).unwrap(),
                Valuation::modular(vec![2.0]).unwrap(),
            ],
        )
        .unwrap();
        let sweep =
            exhaustive_competitive_ratio(&inst, PermutationMode::All, &GreedyConfig::default(), DEFAULT_CAP).unwrap();
        assert_eq!(sweep.permutations, 1);
        assert_eq!(sweep.worst_ratio, 1.0);
    }

    #[test]
    fn permutation_sweep_limits() {
        let z = Valuation::modular(vec![1.0; 9]).unwrap();
        let inst = Instance::partition(1, 9, vec![z]).unwrap();
        let cfg = GreedyConfig::default();
        assert!(matches!(
            exhaustive_competitive_ratio(&inst, PermutationMode::All, &cfg, DEFAULT_CAP),
            Err(Error::CapExceeded { .. })
        ));
        let sampled =
            exhaustive_competitive_ratio(&inst, PermutationMode::Sampled { count: 5, seed: 3 }, &cfg, DEFAULT_CAP)
                .unwrap();
        assert!(!sampled.exhaustive);
        assert_eq!(sampled.permutations, 5);
    }

    #[test]
    fn modular_instance_verifies_with_zero_slack() {
        let z = Valuation::modular(vec![3.0, 1.0, 2.0]).unwrap();
        let inst = Instance::new(Matroid::uniform(GroundSet::new(3), 2).unwrap(), z).unwrap();
        let rec = verify_guarantee(&inst, Algorithm::Greedy, &VerifyOptions::default()).unwrap();
        assert!(rec.pass);
        assert_eq!(rec.ratio, 1.0);
        let disc = rec.checks.iter().find(|c| c.name == "discriminant").unwrap();
        assert_eq!((disc.bound, disc.slack), (1.0, 0.0));
    }
}
