//! Problem definition, domain normalization, and evaluation accounting.
//!
//! Solvers never see the user's box `[a, b]` directly: every trial goes
//! through the affine map onto the unit hypercube, so all partitioning
//! arithmetic downstream can assume side lengths of exactly one.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared objective callable. Must be deterministic: repeated evaluation at
/// the same point returns the identical value.
pub type Objective = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A box-constrained minimization problem.
///
/// Immutable once built; cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct ProblemInstance {
    name: String,
    objective: Objective,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Reference global minimizers, if known (used only by stopping rules
    /// and tests; never by the solvers themselves).
    minimizers: Vec<Vec<f64>>,
    minimum: Option<f64>,
}

impl std::fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("minimum", &self.minimum)
            .finish()
    }
}

impl ProblemInstance {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidProblem(format!(
                "bound vectors must be non-empty and equal length, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidProblem(format!(
                    "need lower < upper in every dimension, got [{lo}, {hi}] at {j}"
                )));
            }
        }
        Ok(Self {
            name,
            objective: Arc::new(objective),
            lower,
            upper,
            minimizers: Vec::new(),
            minimum: None,
        })
    }

    /// Attach reference minimizers and the reference minimum value.
    pub fn with_minimum(mut self, minimizers: Vec<Vec<f64>>, minimum: f64) -> Result<Self> {
        for m in &minimizers {
            if m.len() != self.dimension() {
                return Err(Error::InvalidProblem(
                    "minimizer dimension mismatch".into(),
                ));
            }
            for (j, &x) in m.iter().enumerate() {
                if x < self.lower[j] || x > self.upper[j] {
                    return Err(Error::InvalidProblem(format!(
                        "minimizer coordinate {j} = {x} outside the box"
                    )));
                }
            }
        }
        self.minimizers = minimizers;
        self.minimum = Some(minimum);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn known_minimizers(&self) -> &[Vec<f64>] {
        &self.minimizers
    }

    pub fn known_minimum(&self) -> Option<f64> {
        self.minimum
    }

    /// The raw callable, for wrappers (value shifts, instrumentation).
    pub fn raw_objective(&self) -> Objective {
        Arc::clone(&self.objective)
    }

    /// Evaluate the objective at a point given in original coordinates,
    /// without any accounting. Intended for tests and reporting.
    pub fn eval_raw(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    /// Map a point of `[a, b]` onto `[0, 1]^N`.
    pub fn to_unit_cube(&self, p: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(p.len(), self.dimension());
        let mut out = Vec::with_capacity(p.len());
        for (j, &x) in p.iter().enumerate() {
            let (lo, hi) = (self.lower[j], self.upper[j]);
            if x < lo || x > hi {
                return Err(Error::OutOfDomain {
                    index: j,
                    value: x,
                    lo,
                    hi,
                });
            }
            out.push((x - lo) / (hi - lo));
        }
        Ok(out)
    }

    /// Inverse of [`to_unit_cube`](Self::to_unit_cube).
    pub fn from_unit_cube(&self, u: &[f64]) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.dimension());
        u.iter()
            .enumerate()
            .map(|(j, &t)| self.lower[j] + t * (self.upper[j] - self.lower[j]))
            .collect()
    }

    /// One function trial at a unit-cube point. Increments the trial counter
    /// and rejects non-finite objective values.
    pub fn evaluate(&self, u: &[f64], counter: &mut EvaluationCounter) -> Result<f64> {
        for (j, &t) in u.iter().enumerate() {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::OutOfDomain {
                    index: j,
                    value: t,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
        let x = self.from_unit_cube(u);
        let value = (self.objective)(&x);
        counter.evaluations += 1;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { point: x });
        }
        Ok(value)
    }
}

/// Counts function trials against vertex-store reads.
///
/// `evaluations + db_hits` equals the total number of vertex values a solver
/// requested; the gap between the two is exactly what coordinate reuse saves.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationCounter {
    pub evaluations: u64,
    pub db_hits: u64,
}

impl EvaluationCounter {
    pub fn lookups(&self) -> u64 {
        self.evaluations + self.db_hits
    }
}

/// Proximity test against the known minimizers, evaluated in unit-cube
/// coordinates: a trial `x'` counts as a hit when, for some reference
/// minimizer `x*` and every coordinate, `|x'(i) - x*(i)|` is within the
/// per-coordinate share `delta^(1/N)` of the (unit) side length.
#[derive(Debug, Clone)]
pub struct TargetTest {
    tol: f64,
    targets: Vec<Vec<f64>>,
}

impl TargetTest {
    /// `None` when the problem has no reference minimizer.
    pub fn for_problem(problem: &ProblemInstance, delta: f64) -> Result<Option<Self>> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "accuracy coefficient must lie in (0, 1], got {delta}"
            )));
        }
        if problem.known_minimizers().is_empty() {
            return Ok(None);
        }
        let targets = problem
            .known_minimizers()
            .iter()
            .map(|m| problem.to_unit_cube(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Self {
            tol: delta.powf(1.0 / problem.dimension() as f64),
            targets,
        }))
    }

    pub fn hit(&self, unit_point: &[f64]) -> bool {
        self.targets.iter().any(|t| {
            t.iter()
                .zip(unit_point)
                .all(|(&ti, &xi)| (ti - xi).abs() <= self.tol)
        })
    }

    /// Per-coordinate tolerance in unit-cube units.
    pub fn coordinate_tolerance(&self) -> f64 {
        self.tol
    }
}
