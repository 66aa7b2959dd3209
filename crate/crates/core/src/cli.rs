//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::exact::{enumeration_cap, PermutationMode, VerifyOptions};
use crate::format::{emit_instance, load_instance, to_json, write_text};
use crate::greedy::{Algorithm, GreedyConfig, TiePolicy};
use crate::instance::Instance;
use crate::instances::{
    first_table_divergences, gen_random, gen_tight_general, gen_tight_partition, MatroidShape, RandomShape,
    TightGeneralParams, TightPartitionParams, DEFAULT_EPSILON,
};
use crate::report::{solve_report, verify_report, ValidationOutput};
use crate::tolerance::Tolerance;
use crate::validate::{validate_oracles, ValidationConfig};

#[derive(Debug, Parser)]
#[command(
    name = "submatroid",
    version,
    about = "Greedy maximisation of submodular functions over matroids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an algorithm and report its trace, discriminants and bounds.
    Solve(SolveArgs),
    /// Compare an algorithm with the exact optimum and check every bound.
    Verify(VerifyArgs),
    /// Write a generated instance as JSON.
    Generate(GenerateArgs),
    /// Check an instance file against the matroid and valuation axioms.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunOptions {
    #[arg(long, short, value_enum, default_value = "greedy")]
    pub algorithm: Algorithm,
    /// lowest, highest, or prefer:<labels|indices|prefix*>,...
    #[arg(long, default_value = "lowest")]
    pub tie_policy: String,
    /// Relative tolerance for value comparisons.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub run: RunOptions,
    /// Arrival order for greedy-on, as comma-separated resource indices.
    #[arg(long, value_delimiter = ',')]
    pub arrival: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub run: RunOptions,
    /// Sweep every arrival order (the default for greedy-on).
    #[arg(long, conflicts_with = "sample")]
    pub all_permutations: bool,
    /// Sweep this many random arrival orders instead.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub family: Family,
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Tabular,
    Partition,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Two users whose online greedy meets the welfare bound.
    TightPartition {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = 30)]
        resources: usize,
    },
    /// Rank-K partition matroid where greedy meets the discriminant bound.
    TightGeneral {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        rank: usize,
    },
    /// Seeded random instance; always passes validation.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "tabular")]
        shape: Shape,
        #[arg(long, default_value_t = 6)]
        elements: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        matroid: MatroidShape,
        #[arg(long, default_value_t = 2)]
        users: usize,
        #[arg(long, default_value_t = 4)]
        resources: usize,
    },
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Solve(args) => solve(args, stdout),
        Command::Verify(args) => verify(args, stdout),
        Command::Generate(args) => generate(args, stdout, stderr),
        Command::Validate(args) => validate(args, stdout),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_text(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn tolerance(relative: f64) -> Result<Tolerance> {
    if !relative.is_finite() || relative < 0.0 {
        return Err(Error::Usage(format!(
            "tolerance must be a finite non-negative number, got {relative}"
        )));
    }
    Ok(Tolerance::new(relative))
}

fn greedy_config(run: &RunOptions, instance: &Instance) -> Result<GreedyConfig> {
    Ok(GreedyConfig {
        tie_policy: TiePolicy::parse(&run.tie_policy, instance.ground())?,
        tolerance: tolerance(run.tolerance)?,
    })
}

fn solve(args: SolveArgs, stdout: &mut dyn Write) -> Result<i32> {
    let instance = load_instance(&args.instance, true)?;
    let cfg = greedy_config(&args.run, &instance)?;
    let report = solve_report(&instance, args.run.algorithm, args.arrival.as_deref(), &cfg)?;
    emit(args.run.out.as_deref(), &to_json(&report), stdout)?;
    Ok(0)
}

fn verify(args: VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let instance = load_instance(&args.instance, true)?;
    let cfg = greedy_config(&args.run, &instance)?;
    if args.run.algorithm != Algorithm::GreedyOn && (args.all_permutations || args.sample.is_some()) {
        return Err(Error::Usage(
            "--all-permutations and --sample apply only to greedy-on".into(),
        ));
    }
    let permutations = match args.sample {
        Some(0) => return Err(Error::Usage("--sample needs at least one order".into())),
        Some(count) => PermutationMode::Sampled { count, seed: args.seed },
        None => PermutationMode::All,
    };
    let opts = VerifyOptions {
        greedy: cfg,
        permutations,
        cap: enumeration_cap(),
    };
    let report = verify_report(&instance, args.run.algorithm, &opts)?;
    emit(args.run.out.as_deref(), &to_json(&report), stdout)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn as_usage(e: Error) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::Usage(msg),
        other => other,
    }
}

fn generate(args: GenerateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let instance = match args.family {
        Family::TightPartition {
            c,
            d,
            epsilon,
            resources,
        } => {
            let params = TightPartitionParams {
                c,
                d,
                epsilon,
                resources,
            };
            params.validate().map_err(as_usage)?;
            for div in first_table_divergences(&params) {
                let _ = writeln!(
                    stderr,
                    "warning: user {} resource {} uses the explicit value {} rather than the pattern value {}",
                    div.user + 1,
                    div.resource + 1,
                    div.explicit,
                    div.pattern
                );
            }
            gen_tight_partition(&params)?
        }
        Family::TightGeneral { c, d, rank } => {
            let params = TightGeneralParams { c, d, rank };
            params.validate().map_err(as_usage)?;
            gen_tight_general(&params)?
        }
        Family::Random {
            seed,
            shape,
            elements,
            matroid,
            users,
            resources,
        } => {
            let shape = match shape {
                Shape::Tabular => RandomShape::Tabular { elements, matroid },
                Shape::Partition => RandomShape::Partition { users, resources },
            };
            gen_random(seed, &shape).map_err(as_usage)?
        }
    };
    emit(args.out.as_deref(), &emit_instance(&instance), stdout)?;
    Ok(0)
}

fn validate(args: ValidateArgs, stdout: &mut dyn Write) -> Result<i32> {
    let instance = load_instance(&args.instance, false)?;
    let cfg = ValidationConfig {
        seed: args.seed,
        tolerance: tolerance(args.tolerance)?,
        ..ValidationConfig::default()
    };
    let report = validate_oracles(instance.valuation(), instance.matroid(), &cfg);
    let passed = report.passed();
    emit(args.out.as_deref(), &to_json(&ValidationOutput::from(report)), stdout)?;
    Ok(if passed { 0 } else { 2 })
}
