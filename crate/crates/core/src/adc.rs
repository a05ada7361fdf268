//! Two-phase diagonal-partition solver.
//!
//! The solver alternates between a local phase (refining boxes at least as
//! large as the record holder's box) and a global phase (probing the larger
//! half of the group range, far from the record). Phase switching is driven
//! by a one-percent improvement test on the record and by whether the
//! record's box has become the smallest of the partition. Every iteration
//! computes the non-dominated boxes over a group window, drops those whose
//! best admissible lower bound cannot undercut the record by the current
//! margin, and trisects the survivors.

use crate::error::{Error, Result};
use crate::geometry::{Partition, Vertex};
use crate::problem::{EvaluationCounter, ProblemInstance, TargetTest};
use crate::selection::{improvement_filter, non_dominated};
use crate::vertex_db::VertexDatabase;

/// How the subdivision margin is derived from the record each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiMode {
    /// `xi = epsilon * |f_min|` (the standard choice).
    Relative,
    /// `xi = epsilon` independent of the record.
    Absolute,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub xi_mode: XiMode,
    /// Trial budget; checked after every subdivision.
    pub t_max: u64,
    /// Ternary depth cap per coordinate.
    pub max_depth: u8,
    /// Optional accuracy-box stop against known minimizers.
    pub target: Option<TargetTest>,
    /// Keep a per-iteration trace (ranges, subdivisions, phase decisions).
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            xi_mode: XiMode::Relative,
            t_max: 1_000_000,
            max_depth: 64,
            target: None,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Trial budget exhausted.
    Budget,
    /// A trial landed inside the accuracy box of a known minimizer.
    TargetHit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Local,
    Global,
}

/// Outcome of a phase boundary, recorded in the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchDecision {
    /// Record improved enough: restart the local phase on the new record.
    LocalNewRecord,
    /// No sufficient improvement but the record's box is not yet the
    /// smallest: repeat the local phase, keeping the old reference record.
    LocalOldRecord,
    /// Local phase exhausted around the record: move to the global phase.
    EnterGlobal,
    /// Global loop finished without sufficient improvement: start another
    /// loop, keeping the old reference record.
    GlobalRepeat,
}

#[derive(Debug, Clone)]
pub struct TraceEvent {
    pub iteration: u64,
    pub phase: Phase,
    /// Loop counter value while the sub-step ran.
    pub substep: u32,
    /// True for the widened sub-step that closes a loop.
    pub widened: bool,
    pub group_lo: u32,
    pub group_hi: u32,
    pub subdivided: Vec<u64>,
    pub f_min: f64,
    pub decision: Option<SwitchDecision>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub best_value: f64,
    /// Best point in the problem's original coordinates.
    pub best_point: Vec<f64>,
    pub trials: u64,
    pub db_hits: u64,
    /// Hyperintervals generated (equals the live-box count).
    pub intervals: u64,
    pub iterations: u64,
    pub stop: StopReason,
    pub trace: Option<Vec<TraceEvent>>,
}

pub struct AdcSolver {
    problem: ProblemInstance,
    config: SolverConfig,
    partition: Partition,
    db: VertexDatabase,
    counter: EvaluationCounter,
    k: u64,
    f_min: f64,
    x_min: Vertex,
    f_min_prec: f64,
    phase: Phase,
    lcounter: u32,
    gcounter: u32,
    p_prime: u32,
    stopped: Option<StopReason>,
    trace: Vec<TraceEvent>,
}

/// One-percent improvement test on the record. At a zero reference the
/// inequality alone would accept equality, so strict improvement is
/// required as well.
fn improved_enough(f_min: f64, f_prec: f64) -> bool {
    f_min <= f_prec - 0.01 * f_prec.abs() && f_min < f_prec
}

impl AdcSolver {
    pub fn new(problem: ProblemInstance, config: SolverConfig) -> Result<Self> {
        if config.t_max < 2 {
            return Err(Error::InvalidArgument(
                "trial budget must allow the two initial corner trials".into(),
            ));
        }
        if !(config.epsilon >= 0.0) {
            return Err(Error::InvalidArgument(
                "epsilon must be non-negative".into(),
            ));
        }
        let dim = problem.dimension();
        let mut db = VertexDatabase::new();
        let mut counter = EvaluationCounter::default();

        let corner_a = Vertex::origin(dim);
        let corner_b = Vertex::ones(dim);
        let f_a = db.get_or_evaluate(&corner_a, &problem, &mut counter)?;
        let f_b = db.get_or_evaluate(&corner_b, &problem, &mut counter)?;

        let (f_min, x_min) = if f_b < f_a {
            (f_b, corner_b.clone())
        } else {
            (f_a, corner_a.clone())
        };

        let mut stopped = None;
        if let Some(t) = &config.target {
            if t.hit(&corner_a.to_f64()) || t.hit(&corner_b.to_f64()) {
                stopped = Some(StopReason::TargetHit);
            }
        }
        if stopped.is_none() && counter.evaluations >= config.t_max {
            stopped = Some(StopReason::Budget);
        }

        let partition = Partition::new_unit(dim, f_a, f_b, config.max_depth);
        Ok(Self {
            problem,
            config,
            partition,
            db,
            counter,
            k: 1,
            f_min_prec: f_min,
            f_min,
            x_min,
            phase: Phase::Local,
            lcounter: 1,
            gcounter: 1,
            p_prime: 0,
            stopped,
            trace: Vec::new(),
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn database(&self) -> &VertexDatabase {
        &self.db
    }

    pub fn counter(&self) -> EvaluationCounter {
        self.counter
    }

    pub fn f_min(&self) -> f64 {
        self.f_min
    }

    pub fn x_min(&self) -> &Vertex {
        &self.x_min
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn iteration(&self) -> u64 {
        self.k
    }

    pub fn stop_reason(&self) -> Option<StopReason> {
        self.stopped
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    /// The record-holding box: among the live boxes sharing the record
    /// vertex, the one in the largest group (smallest box), oldest id on
    /// ties.
    pub fn record_interval(&self) -> u64 {
        let owners = self.partition.owners_of(&self.x_min);
        debug_assert!(!owners.is_empty(), "record vertex lost its box");
        let mut best = owners[0];
        let mut best_group = self.partition.interval(best).group;
        for &id in &owners[1..] {
            let g = self.partition.interval(id).group;
            if g > best_group || (g == best_group && id < best) {
                best = id;
                best_group = g;
            }
        }
        best
    }

    /// Group index of the record-holding box.
    pub fn record_group(&self) -> u32 {
        self.partition.interval(self.record_interval()).group
    }

    fn xi(&self) -> f64 {
        match self.config.xi_mode {
            XiMode::Relative => self.config.epsilon * self.f_min.abs(),
            XiMode::Absolute => self.config.epsilon,
        }
    }

    /// Hull + margin filter + trisection over groups `lo..=hi`. Survivors
    /// are split in increasing-diagonal order; budget and target stops are
    /// checked after every subdivision.
    fn run_iteration(&mut self, lo: u32, hi: u32) -> Result<Vec<u64>> {
        let hull = non_dominated(&self.partition, lo, hi);
        let chosen = improvement_filter(&hull, self.f_min, self.xi());
        let mut done = Vec::with_capacity(chosen.len());

        for dot in chosen {
            let problem = &self.problem;
            let db = &mut self.db;
            let counter = &mut self.counter;
            let out = self
                .partition
                .subdivide(dot.interval_id, |v| db.get_or_evaluate(v, problem, counter))?;
            done.push(dot.interval_id);

            for (vert, val) in [(&out.u, out.f_u), (&out.v, out.f_v)] {
                if val < self.f_min {
                    self.f_min = val;
                    self.x_min = vert.clone();
                }
            }
            if let Some(t) = &self.config.target {
                if t.hit(&out.u.to_f64()) || t.hit(&out.v.to_f64()) {
                    self.stopped = Some(StopReason::TargetHit);
                    break;
                }
            }
            if self.counter.evaluations >= self.config.t_max {
                self.stopped = Some(StopReason::Budget);
                break;
            }
        }

        self.partition.advance_iteration();
        self.k += 1;
        Ok(done)
    }

    #[allow(clippy::too_many_arguments)]
    fn push_trace(
        &mut self,
        iteration: u64,
        phase: Phase,
        substep: u32,
        widened: bool,
        range: (u32, u32),
        subdivided: Vec<u64>,
        decision: Option<SwitchDecision>,
    ) {
        if self.config.record_trace {
            self.trace.push(TraceEvent {
                iteration,
                phase,
                substep,
                widened,
                group_lo: range.0,
                group_hi: range.1,
                subdivided,
                f_min: self.f_min,
                decision,
            });
        }
    }

    fn to_local(&mut self, new_record: bool) {
        if new_record {
            self.f_min_prec = self.f_min;
        }
        self.phase = Phase::Local;
        self.lcounter = 1;
        self.p_prime = self.record_group();
    }

    fn to_global(&mut self) {
        self.f_min_prec = self.f_min;
        self.phase = Phase::Global;
        self.gcounter = 1;
        self.p_prime = self.record_group();
    }

    /// Advance one sub-step of the current phase. Returns `false` once the
    /// solver has stopped.
    pub fn step(&mut self) -> Result<bool> {
        if self.stopped.is_some() {
            return Ok(false);
        }
        let n = self.problem.dimension() as u32;
        let q = self.partition.min_group();
        let k_before = self.k;

        match self.phase {
            Phase::Local => {
                if self.lcounter <= n {
                    // narrow sub-step: groups strictly larger than the
                    // record's box at phase start
                    let p_dprime = self.p_prime.saturating_sub(1).max(q);
                    let substep = self.lcounter;
                    let done = self.run_iteration(q, p_dprime)?;
                    self.lcounter += 1;
                    self.push_trace(k_before, Phase::Local, substep, false, (q, p_dprime), done, None);
                } else {
                    // widened sub-step includes the record's own group,
                    // then the phase decision
                    self.p_prime = self.p_prime.max(q);
                    let range = (q, self.p_prime);
                    let done = self.run_iteration(range.0, range.1)?;

                    let decision = if self.stopped.is_some() {
                        None
                    } else if improved_enough(self.f_min, self.f_min_prec) {
                        self.to_local(true);
                        Some(SwitchDecision::LocalNewRecord)
                    } else {
                        let p = self.record_group();
                        let q_now = self.partition.min_group();
                        let q_max = self.partition.max_group();
                        if p < q_max || q_now == q_max {
                            self.to_local(false);
                            Some(SwitchDecision::LocalOldRecord)
                        } else {
                            self.to_global();
                            Some(SwitchDecision::EnterGlobal)
                        }
                    };
                    self.push_trace(k_before, Phase::Local, n + 1, true, range, done, decision);
                }
            }
            Phase::Global => {
                let loop_len = 2u32.saturating_pow(n + 1);
                if self.gcounter <= loop_len {
                    self.p_prime = self.p_prime.max(q);
                    let r_prime = middle_group(q, self.p_prime);
                    let substep = self.gcounter;
                    let done = self.run_iteration(q, r_prime)?;

                    let decision = if self.stopped.is_some() {
                        None
                    } else if improved_enough(self.f_min, self.f_min_prec) {
                        self.to_local(true);
                        Some(SwitchDecision::LocalNewRecord)
                    } else {
                        self.gcounter += 1;
                        None
                    };
                    self.push_trace(k_before, Phase::Global, substep, false, (q, r_prime), done, decision);
                } else {
                    self.p_prime = self.p_prime.max(q);
                    let range = (q, self.p_prime);
                    let done = self.run_iteration(range.0, range.1)?;

                    let decision = if self.stopped.is_some() {
                        None
                    } else if improved_enough(self.f_min, self.f_min_prec) {
                        self.to_local(true);
                        Some(SwitchDecision::LocalNewRecord)
                    } else {
                        // keep the old reference record, refresh the group
                        // anchor, and run another loop
                        self.gcounter = 1;
                        self.p_prime = self.record_group();
                        Some(SwitchDecision::GlobalRepeat)
                    };
                    self.push_trace(k_before, Phase::Global, loop_len + 1, true, range, done, decision);
                }
            }
        }
        Ok(self.stopped.is_none())
    }

    /// Drive the solver to its stopping condition.
    pub fn run(&mut self) -> Result<RunResult> {
        while self.step()? {}
        Ok(self.result())
    }

    pub fn result(&self) -> RunResult {
        RunResult {
            best_value: self.f_min,
            best_point: self.problem.from_unit_cube(&self.x_min.to_f64()),
            trials: self.counter.evaluations,
            db_hits: self.counter.db_hits,
            intervals: self.partition.len() as u64,
            iterations: self.k,
            stop: self.stopped.unwrap_or(StopReason::Budget),
            trace: if self.config.record_trace {
                Some(self.trace.clone())
            } else {
                None
            },
        }
    }
}

/// Midpoint group index separating "large" from "small" boxes.
pub fn middle_group(q: u32, p_prime: u32) -> u32 {
    (q + p_prime).div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem_2d(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> ProblemInstance {
        ProblemInstance::new("t", vec![0.0, 0.0], vec![1.0, 1.0], f).unwrap()
    }

    fn cfg(t_max: u64) -> SolverConfig {
        SolverConfig {
            t_max,
            record_trace: true,
            ..Default::default()
        }
    }

    #[test]
    fn middle_group_worked_example() {
        assert_eq!(middle_group(10, 15), 13);
        assert_eq!(middle_group(3, 3), 3);
        assert_eq!(middle_group(0, 1), 1);
    }

    #[test]
    fn initialization_evaluates_both_corners() {
        let s = AdcSolver::new(problem_2d(|x| x[0]), cfg(100)).unwrap();
        assert_eq!(s.counter().evaluations, 2);
        assert_eq!(s.f_min(), 0.0);
        assert_eq!(s.x_min().to_f64(), vec![0.0, 0.0]);
    }

    #[test]
    fn constant_record_ties_to_first_corner() {
        let s = AdcSolver::new(problem_2d(|_| 4.25), cfg(100)).unwrap();
        assert_eq!(s.f_min(), 4.25);
        assert_eq!(s.x_min().to_f64(), vec![0.0, 0.0]);
    }

    #[test]
    fn first_step_splits_the_root() {
        let mut s = AdcSolver::new(problem_2d(|x| x[0] + x[1]), cfg(100)).unwrap();
        s.step().unwrap();
        assert_eq!(s.partition().len(), 3);
        let ev = &s.trace()[0];
        assert_eq!((ev.group_lo, ev.group_hi), (0, 0));
        assert_eq!(ev.subdivided, vec![0]);
        assert!(!ev.widened);
    }

    #[test]
    fn local_pass_shape_in_2d() {
        // two narrow sub-steps then one widened sub-step per local pass
        let mut s = AdcSolver::new(problem_2d(|x| x[0] + x[1]), cfg(1000)).unwrap();
        for _ in 0..3 {
            s.step().unwrap();
        }
        let w: Vec<bool> = s.trace().iter().map(|e| e.widened).collect();
        assert_eq!(w, vec![false, false, true]);
        assert!(s.trace()[2].decision.is_some());
        assert_eq!(s.trace()[0].substep, 1);
        assert_eq!(s.trace()[1].substep, 2);
        assert_eq!(s.trace()[2].substep, 3);
    }

    #[test]
    fn constant_function_runs_to_budget() {
        let mut s = AdcSolver::new(problem_2d(|_| 1.0), cfg(60)).unwrap();
        let r = s.run().unwrap();
        assert_eq!(r.stop, StopReason::Budget);
        assert_eq!(r.best_value, 1.0);
        assert_eq!(r.intervals, 1 + 2 * s.partition().subdivisions());
        assert!(r.trials >= 60);
        // overshoot is at most one subdivision's worth of trials
        assert!(r.trials <= 60 + 2);
    }

    #[test]
    fn every_iteration_subdivides_something() {
        let mut s = AdcSolver::new(problem_2d(|_| 0.0), cfg(500)).unwrap();
        while s.step().unwrap() {}
        for ev in s.trace() {
            assert!(
                !ev.subdivided.is_empty(),
                "iteration {} split nothing",
                ev.iteration
            );
        }
    }

    #[test]
    fn target_mode_hits_ternary_minimizer() {
        let p = ProblemInstance::new("sq", vec![0.0, 0.0], vec![1.0, 1.0], |x| {
            (x[0] - 1.0 / 3.0).powi(2) + (x[1] - 1.0 / 3.0).powi(2)
        })
        .unwrap()
        .with_minimum(vec![vec![1.0 / 3.0, 1.0 / 3.0]], 0.0)
        .unwrap();
        let target = TargetTest::for_problem(&p, 1e-4).unwrap();
        let mut s = AdcSolver::new(
            p,
            SolverConfig {
                t_max: 100_000,
                target,
                ..Default::default()
            },
        )
        .unwrap();
        let r = s.run().unwrap();
        assert_eq!(r.stop, StopReason::TargetHit);
        assert!(r.best_value < 1e-3, "best {}", r.best_value);
    }

    #[test]
    fn record_is_monotone_and_lives_on_its_interval() {
        let p = problem_2d(|x| {
            (4.0 * x[0] - 1.3).sin() * (5.0 * x[1] + 0.2).cos() + 0.5 * (x[0] - 0.7).powi(2)
        });
        let mut s = AdcSolver::new(p, cfg(2000)).unwrap();
        let mut last = f64::INFINITY;
        while s.step().unwrap() {
            assert!(s.f_min() <= last);
            last = s.f_min();
            let iv = s.partition().interval(s.record_interval());
            assert!(*s.x_min() == iv.va || *s.x_min() == iv.vb);
        }
    }

    #[test]
    fn branin_corners_set_the_initial_record() {
        let p = crate::testbed::classic("branin").unwrap();
        let s = AdcSolver::new(p.clone(), cfg(10)).unwrap();
        let c1 = p.eval_raw(&[-5.0, 0.0]);
        let c2 = p.eval_raw(&[10.0, 15.0]);
        assert_eq!(s.f_min(), c1.min(c2));
    }

    #[test]
    fn budget_must_cover_initialization() {
        assert!(AdcSolver::new(problem_2d(|_| 0.0), cfg(1)).is_err());
    }
}
