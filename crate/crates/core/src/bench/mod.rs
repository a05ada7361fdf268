//! Benchmark harness: stopping rule, batch execution, class-level criteria,
//! and report emission.
//!
//! Problems of a class run independently, so with the `parallel` feature the
//! batch fans out over a rayon pool (`jobs = 0` picks the default width,
//! `jobs = 1` forces the sequential path). Reports are byte-deterministic.

mod report;
mod snapshot;

pub use report::{emit_report, parse_report_trials, ReportFormat};
pub use snapshot::Snapshot;

use crate::adc::{AdcSolver, RunResult, SolverConfig, StopReason};
use crate::direct::{DirectConfig, DirectSolver, DirectVariant};
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, TargetTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Adc,
    Direct,
    DirectL,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Adc => "adc",
            Algorithm::Direct => "direct",
            Algorithm::DirectL => "directl",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "adc" => Ok(Algorithm::Adc),
            "direct" => Ok(Algorithm::Direct),
            "directl" => Ok(Algorithm::DirectL),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm `{other}` (expected adc, direct, or directl)"
            ))),
        }
    }
}

/// When a run counts as solved: a trial inside the accuracy box of a known
/// minimizer, within the trial budget.
#[derive(Debug, Clone)]
pub struct StopRule {
    pub delta: f64,
    pub t_max: u64,
}

impl StopRule {
    pub fn new(delta: f64, t_max: u64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "accuracy coefficient must lie in (0, 1], got {delta}"
            )));
        }
        Ok(Self { delta, t_max })
    }
}

/// Accuracy defaults by dimension, decreasing as the dimension grows.
pub fn default_delta(dimension: usize) -> f64 {
    match dimension {
        0..=2 => 1e-4,
        3 | 4 => 1e-6,
        5 => 1e-7,
        _ => 1e-7,
    }
}

/// Per-coordinate check of the accuracy box, in original coordinates.
pub fn target_hit(
    x_trial: &[f64],
    rule: &StopRule,
    problem: &ProblemInstance,
) -> bool {
    let n = problem.dimension() as f64;
    let tol = rule.delta.powf(1.0 / n);
    problem.known_minimizers().iter().any(|m| {
        m.iter().zip(x_trial).enumerate().all(|(j, (mi, xi))| {
            (mi - xi).abs() <= tol * (problem.upper()[j] - problem.lower()[j])
        })
    })
}

#[derive(Debug, Clone)]
pub struct ProblemReport {
    pub problem_id: String,
    pub algorithm: String,
    /// Trials performed; clamped to the budget when unsolved.
    pub trials: u64,
    pub intervals: u64,
    pub solved: bool,
    pub stop_reason: String,
}

/// Win/loss counts against a reference run over the same class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    /// Problems the reference solved with strictly fewer trials.
    pub reference_wins: usize,
    /// Problems this run solved with strictly fewer trials.
    pub run_wins: usize,
    pub ties: usize,
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub algorithm: String,
    pub class_label: String,
    pub delta: f64,
    pub t_max: u64,
    pub rows: Vec<ProblemReport>,
    pub comparison: Option<Comparison>,
}

impl ClassReport {
    pub fn trials(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.trials).collect()
    }

    /// Worst-case trials over the class and the problem attaining it.
    pub fn worst_case(&self) -> Option<(usize, u64)> {
        worst_case(&self.trials())
    }

    /// Interval count of the worst-case problem.
    pub fn intervals_at_worst(&self) -> Option<u64> {
        self.worst_case().map(|(s, _)| self.rows[s].intervals)
    }

    pub fn average_trials(&self) -> f64 {
        average(&self.trials())
    }

    /// Smallest per-problem budget that solves half the class.
    pub fn half_class_trials(&self) -> Option<u64> {
        half_class(&self.trials())
    }

    pub fn solved_count(&self) -> usize {
        self.rows.iter().filter(|r| r.solved).count()
    }

    /// Attach win/loss counts against a reference trial vector.
    pub fn compare_with(&mut self, reference: &[u64]) -> Result<Comparison> {
        let cmp = wins(reference, &self.trials())?;
        self.comparison = Some(cmp);
        Ok(cmp)
    }
}

/// Worst-case trial count and its (first) index.
pub fn worst_case(trials: &[u64]) -> Option<(usize, u64)> {
    trials
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, &t)| (i, t))
}

pub fn average(trials: &[u64]) -> f64 {
    if trials.is_empty() {
        return 0.0;
    }
    trials.iter().sum::<u64>() as f64 / trials.len() as f64
}

/// Smallest threshold `x` such that at least half the class satisfies
/// `T_s <= x`.
pub fn half_class(trials: &[u64]) -> Option<u64> {
    if trials.is_empty() {
        return None;
    }
    let mut sorted = trials.to_vec();
    sorted.sort_unstable();
    Some(sorted[trials.len().div_ceil(2) - 1])
}

/// Win/loss counts: `reference_wins` counts problems where the reference
/// used strictly fewer trials, `run_wins` the opposite.
pub fn wins(reference: &[u64], run: &[u64]) -> Result<Comparison> {
    if reference.len() != run.len() {
        return Err(Error::ReportMismatch {
            reference: reference.len(),
            run: run.len(),
        });
    }
    let mut cmp = Comparison {
        reference_wins: 0,
        run_wins: 0,
        ties: 0,
    };
    for (&r, &t) in reference.iter().zip(run) {
        if r < t {
            cmp.reference_wins += 1;
        } else if t < r {
            cmp.run_wins += 1;
        } else {
            cmp.ties += 1;
        }
    }
    Ok(cmp)
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub rule: StopRule,
    /// Worker count for class runs: 0 = default width, 1 = sequential.
    pub jobs: usize,
}

fn run_result(problem: &ProblemInstance, spec: &RunSpec) -> Result<RunResult> {
    let target = TargetTest::for_problem(problem, spec.rule.delta)?;
    match spec.algorithm {
        Algorithm::Adc => {
            let config = SolverConfig {
                epsilon: spec.epsilon,
                t_max: spec.rule.t_max,
                target,
                ..Default::default()
            };
            AdcSolver::new(problem.clone(), config)?.run()
        }
        Algorithm::Direct | Algorithm::DirectL => {
            let config = DirectConfig {
                epsilon: spec.epsilon,
                t_max: spec.rule.t_max,
                target,
                variant: if spec.algorithm == Algorithm::Direct {
                    DirectVariant::Classic
                } else {
                    DirectVariant::LocallyBiased
                },
                ..Default::default()
            };
            DirectSolver::new(problem.clone(), config)?.run()
        }
    }
}

/// Run one problem under the stopping rule.
pub fn run_one(problem: &ProblemInstance, spec: &RunSpec) -> Result<ProblemReport> {
    let result = run_result(problem, spec)?;
    let solved = result.stop == StopReason::TargetHit;
    Ok(ProblemReport {
        problem_id: problem.name().to_string(),
        algorithm: spec.algorithm.label().to_string(),
        trials: if solved {
            result.trials
        } else {
            result.trials.min(spec.rule.t_max)
        },
        intervals: result.intervals,
        solved,
        stop_reason: match result.stop {
            StopReason::TargetHit => "target".to_string(),
            StopReason::Budget => "budget".to_string(),
        },
    })
}

/// Run every problem of a class and assemble the criteria.
pub fn run_class(
    problems: &[ProblemInstance],
    class_label: &str,
    spec: &RunSpec,
) -> Result<ClassReport> {
    let rows = map_problems(problems, spec)?;
    Ok(ClassReport {
        algorithm: spec.algorithm.label().to_string(),
        class_label: class_label.to_string(),
        delta: spec.rule.delta,
        t_max: spec.rule.t_max,
        rows,
        comparison: None,
    })
}

#[cfg(feature = "parallel")]
fn map_problems(problems: &[ProblemInstance], spec: &RunSpec) -> Result<Vec<ProblemReport>> {
    use rayon::prelude::*;
    if spec.jobs == 1 {
        return map_problems_sequential(problems, spec);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    pool.install(|| problems.par_iter().map(|p| run_one(p, spec)).collect())
}

#[cfg(not(feature = "parallel"))]
fn map_problems(problems: &[ProblemInstance], spec: &RunSpec) -> Result<Vec<ProblemReport>> {
    map_problems_sequential(problems, spec)
}

/// Sequential fallback; also the `jobs = 1` path.
pub fn map_problems_sequential(
    problems: &[ProblemInstance],
    spec: &RunSpec,
) -> Result<Vec<ProblemReport>> {
    problems.iter().map(|p| run_one(p, spec)).collect()
}

/// Sequential class run, bypassing the worker pool entirely.
pub fn run_class_sequential(
    problems: &[ProblemInstance],
    class_label: &str,
    spec: &RunSpec,
) -> Result<ClassReport> {
    let rows = map_problems_sequential(problems, spec)?;
    Ok(ClassReport {
        algorithm: spec.algorithm.label().to_string(),
        class_label: class_label.to_string(),
        delta: spec.rule.delta,
        t_max: spec.rule.t_max,
        rows,
        comparison: None,
    })
}
