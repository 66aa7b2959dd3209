//! Machine-readable run reports.

use serde::Serialize;

use crate::analysis::{analyze, Discriminant, GuaranteeReport};
use crate::error::Result;
use crate::exact::{verify_guarantee, PermutationMode, VerificationRecord, VerifyOptions};
use crate::greedy::{self, Algorithm, GreedyConfig, GreedyTrace};
use crate::instance::Instance;
use crate::matroid::PairElement;
use crate::set::Element;
use crate::tolerance::Tolerance;
use crate::validate::ValidationReport;

pub const REPORT_VERSION: u32 = 1;

/// The settings a run was made with, echoed so a report is reproducible.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub algorithm: Algorithm,
    pub tie_policy: String,
    pub tolerance: Tolerance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arrival: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutations: Option<PermutationMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub iteration: usize,
    pub chosen: Element,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairElement>,
    pub gain: f64,
    pub eligible_count: usize,
    pub runner_up_gain: Option<f64>,
    pub tie_set: Vec<Element>,
    pub discriminant: Discriminant,
    pub post_i0: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub format_version: u32,
    pub algorithm: Algorithm,
    pub steps: Vec<StepReport>,
    pub final_set: Vec<Element>,
    pub final_labels: Vec<String>,
    pub final_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arrival: Option<Vec<usize>>,
    pub analysis: GuaranteeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationRecord>,
    pub config: ConfigEcho,
}

impl RunReport {
    pub fn new(
        instance: &Instance,
        trace: &GreedyTrace,
        analysis: GuaranteeReport,
        verification: Option<VerificationRecord>,
        config: ConfigEcho,
    ) -> Self {
        let ground = instance.ground();
        let steps = trace
            .steps
            .iter()
            .enumerate()
            .map(|(k, s)| StepReport {
                iteration: s.iteration,
                chosen: s.chosen,
                label: ground.label(s.chosen).into_owned(),
                pair: s.pair,
                gain: s.gain,
                eligible_count: s.eligible_count,
                runner_up_gain: s.runner_up_gain,
                tie_set: s.tie_set.clone(),
                discriminant: analysis.discriminants[k],
                post_i0: analysis.post_i0[k],
            })
            .collect();
        let final_set = trace.final_set.to_vec();
        RunReport {
            format_version: REPORT_VERSION,
            algorithm: trace.algorithm,
            steps,
            final_labels: final_set.iter().map(|&e| ground.label(e).into_owned()).collect(),
            final_set,
            final_value: trace.final_value,
            arrival: trace.arrival.clone(),
            analysis,
            verification,
            config,
        }
    }

    /// True unless an attached verification found a violated bound.
    pub fn passed(&self) -> bool {
        self.verification.as_ref().is_none_or(|v| v.pass)
    }
}

impl ConfigEcho {
    pub fn new(algorithm: Algorithm, cfg: &GreedyConfig, instance: &Instance) -> Self {
        ConfigEcho {
            algorithm,
            tie_policy: cfg.tie_policy.describe(instance.ground()),
            tolerance: cfg.tolerance,
            seed: None,
            arrival: None,
            permutations: None,
            cap: None,
        }
    }
}

/// Runs `algorithm` and analyses the trace without consulting the optimum.
pub fn solve_report(
    instance: &Instance,
    algorithm: Algorithm,
    arrival: Option<&[usize]>,
    cfg: &GreedyConfig,
) -> Result<RunReport> {
    let trace = greedy::run(instance, algorithm, arrival, cfg)?;
    let analysis = analyze(&trace, instance, cfg.tolerance)?;
    let mut config = ConfigEcho::new(algorithm, cfg, instance);
    config.arrival = trace.arrival.clone();
    Ok(RunReport::new(instance, &trace, analysis, None, config))
}

/// Verifies `algorithm` against the exact optimum. For the online algorithm
/// the reported trace is the one under the worst arrival order.
pub fn verify_report(instance: &Instance, algorithm: Algorithm, opts: &VerifyOptions) -> Result<RunReport> {
    let record = verify_guarantee(instance, algorithm, opts)?;
    let arrival = record.online.as_ref().map(|sweep| sweep.worst_sigma.clone());
    let trace = greedy::run(instance, algorithm, arrival.as_deref(), &opts.greedy)?;
    let analysis = analyze(&trace, instance, opts.greedy.tolerance)?;
    let mut config = ConfigEcho::new(algorithm, &opts.greedy, instance);
    config.cap = Some(opts.cap);
    if algorithm == Algorithm::GreedyOn {
        config.permutations = Some(opts.permutations);
        config.arrival = arrival;
        if let PermutationMode::Sampled { seed, .. } = opts.permutations {
            config.seed = Some(seed);
        }
    }
    Ok(RunReport::new(instance, &trace, analysis, Some(record), config))
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationOutput {
    pub passed: bool,
    #[serde(flatten)]
    pub report: ValidationReport,
}

impl From<ValidationReport> for ValidationOutput {
    fn from(report: ValidationReport) -> Self {
        ValidationOutput {
            passed: report.passed(),
            report,
        }
    }
}
