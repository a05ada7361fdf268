//! `bench` — run the diagonal-partition solver or a DIRECT baseline on a
//! named test function or a generated class, and emit a report.
//!
//! Examples:
//!
//! ```text
//! bench run --algorithm adc --problem branin
//! bench run --algorithm direct --class N=2,M=10,fstar=-1,rho=0.10,r=0.90,seed=42 \
//!     --tmax 100000 --format md --jobs 8
//! bench run --algorithm adc --problem six-hump-camel --snapshot boxes.csv
//! bench run --algorithm directl --class N=2,M=10,fstar=-1,rho=0.10,r=0.90,seed=42 \
//!     --compare adc_run.csv
//! ```

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use adc_core::bench::{
    self, default_delta, emit_report, parse_report_trials, Algorithm, ReportFormat, RunSpec,
    Snapshot, StopRule,
};
use adc_core::problem::{ProblemInstance, TargetTest};
use adc_core::testbed::{classic, classic_names, generate_class, shift, GklsParams};
use adc_core::{AdcSolver, DirectConfig, DirectSolver, DirectVariant, SolverConfig};

#[derive(Parser)]
#[command(name = "bench", about, version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an algorithm on a problem or a generated class and print a report.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Algorithm: adc, direct, or directl.
    #[arg(long)]
    algorithm: String,

    /// Named classic problem (e.g. branin, shekel5, shubert).
    #[arg(long, conflicts_with = "class")]
    problem: Option<String>,

    /// Generated class, e.g. N=2,M=10,fstar=-1,rho=0.10,r=0.90,seed=42.
    #[arg(long)]
    class: Option<String>,

    /// Constant added to every objective value.
    #[arg(long)]
    shift: Option<f64>,

    /// Margin parameter of the subdivision filter.
    #[arg(long, default_value_t = 1e-4)]
    epsilon: f64,

    /// Trial budget per problem.
    #[arg(long, default_value_t = 1_000_000)]
    tmax: u64,

    /// Accuracy coefficient of the stopping rule; defaults by dimension.
    #[arg(long)]
    delta: Option<f64>,

    /// Report format: csv or md.
    #[arg(long, default_value = "csv")]
    format: String,

    /// Write a partition snapshot CSV (single-problem runs only).
    #[arg(long)]
    snapshot: Option<String>,

    /// Previous CSV report to compare against (win/loss counts).
    #[arg(long)]
    compare: Option<String>,

    /// Worker threads for class runs (0 = automatic, 1 = sequential).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(CliError::Argument(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Err(CliError::Runtime(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::FAILURE
            }
        },
    }
}

enum CliError {
    Argument(String),
    Runtime(String),
}

impl From<adc_core::Error> for CliError {
    fn from(e: adc_core::Error) -> Self {
        use adc_core::Error::*;
        match e {
            InvalidArgument(_) | UnknownFunction(_) | Generation(_) | ReportMismatch { .. }
            | MalformedReport(_) | InvalidProblem(_) => CliError::Argument(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn parse_class_spec(spec: &str) -> Result<GklsParams, CliError> {
    let mut n = None;
    let mut m = None;
    let mut fstar = None;
    let mut rho = None;
    let mut r = None;
    let mut seed = None;
    for part in spec.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            CliError::Argument(format!("class parameter `{part}` is not key=value"))
        })?;
        let bad = |v: &str| CliError::Argument(format!("bad value `{v}` for `{key}`"));
        match key {
            "N" => n = Some(value.parse::<usize>().map_err(|_| bad(value))?),
            "M" => m = Some(value.parse::<usize>().map_err(|_| bad(value))?),
            "fstar" => fstar = Some(value.parse::<f64>().map_err(|_| bad(value))?),
            "rho" => rho = Some(value.parse::<f64>().map_err(|_| bad(value))?),
            "r" => r = Some(value.parse::<f64>().map_err(|_| bad(value))?),
            "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad(value))?),
            _ => {
                return Err(CliError::Argument(format!(
                    "unknown class parameter `{key}` (expected N, M, fstar, rho, r, seed)"
                )))
            }
        }
    }
    let missing = |k: &str| CliError::Argument(format!("class parameter `{k}` is required"));
    Ok(GklsParams {
        dimension: n.ok_or_else(|| missing("N"))?,
        minima: m.ok_or_else(|| missing("M"))?,
        global_value: fstar.ok_or_else(|| missing("fstar"))?,
        global_radius: rho.ok_or_else(|| missing("rho"))?,
        global_dist: r.ok_or_else(|| missing("r"))?,
        seed: seed.ok_or_else(|| missing("seed"))?,
    })
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let algorithm = Algorithm::parse(&args.algorithm)?;
    let format = ReportFormat::parse(&args.format)?;

    let (problems, class_label) = match (&args.problem, &args.class) {
        (Some(name), None) => {
            let p = classic(name)?;
            (vec![p], name.clone())
        }
        (None, Some(spec)) => {
            let params = parse_class_spec(spec)?;
            let label = format!(
                "N={} M={} fstar={} rho={} r={} seed={}",
                params.dimension,
                params.minima,
                params.global_value,
                params.global_radius,
                params.global_dist,
                params.seed
            );
            (generate_class(&params)?, label)
        }
        (None, None) => {
            return Err(CliError::Argument(format!(
                "one of --problem or --class is required; known problems: {}",
                classic_names().join(", ")
            )))
        }
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };

    let problems: Vec<ProblemInstance> = match args.shift {
        Some(c) => problems.iter().map(|p| shift(p, c)).collect(),
        None => problems,
    };

    let dimension = problems[0].dimension();
    let delta = match args.delta {
        Some(d) => d,
        None => default_delta(dimension),
    };
    let rule = StopRule::new(delta, args.tmax)?;
    let spec = RunSpec {
        algorithm,
        epsilon: args.epsilon,
        rule,
        jobs: args.jobs,
    };

    if let Some(path) = &args.snapshot {
        if problems.len() != 1 {
            return Err(CliError::Argument(
                "--snapshot needs a single --problem run".into(),
            ));
        }
        let snapshot = run_with_snapshot(&problems[0], &spec)?;
        if !snapshot.supports_box_rows() {
            eprintln!(
                "note: {dimension}-dimensional run; snapshot keeps diagram rows only"
            );
        }
        fs::write(path, snapshot.to_csv())
            .map_err(|e| CliError::Runtime(format!("writing {path}: {e}")))?;
    }

    let mut report = bench::run_class(&problems, &class_label, &spec)?;

    if let Some(path) = &args.compare {
        let bytes =
            fs::read(path).map_err(|e| CliError::Runtime(format!("reading {path}: {e}")))?;
        let reference = parse_report_trials(&bytes)?;
        if reference.len() != report.rows.len() {
            return Err(CliError::Argument(format!(
                "reference report has {} problems, this run has {}",
                reference.len(),
                report.rows.len()
            )));
        }
        for (r, row) in reference.iter().zip(&report.rows) {
            if r.0 != row.problem_id {
                return Err(CliError::Argument(format!(
                    "reference problem `{}` does not match `{}`",
                    r.0, row.problem_id
                )));
            }
        }
        let trials: Vec<u64> = reference.iter().map(|r| r.1).collect();
        report.compare_with(&trials)?;
    }

    let bytes = emit_report(&report, format);
    std::io::stdout()
        .write_all(&bytes)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(())
}

/// Single run that keeps the solver around long enough to export its final
/// partition.
fn run_with_snapshot(
    problem: &ProblemInstance,
    spec: &RunSpec,
) -> Result<Snapshot, CliError> {
    let target = TargetTest::for_problem(problem, spec.rule.delta)?;
    Ok(match spec.algorithm {
        Algorithm::Adc => {
            let mut solver = AdcSolver::new(
                problem.clone(),
                SolverConfig {
                    epsilon: spec.epsilon,
                    t_max: spec.rule.t_max,
                    target,
                    ..Default::default()
                },
            )?;
            solver.run()?;
            Snapshot::from_adc(&solver)
        }
        Algorithm::Direct | Algorithm::DirectL => {
            let mut solver = DirectSolver::new(
                problem.clone(),
                DirectConfig {
                    epsilon: spec.epsilon,
                    t_max: spec.rule.t_max,
                    target,
                    variant: if spec.algorithm == Algorithm::Direct {
                        DirectVariant::Classic
                    } else {
                        DirectVariant::LocallyBiased
                    },
                    ..Default::default()
                },
            )?;
            solver.run()?;
            Snapshot::from_direct(&solver)
        }
    })
}
