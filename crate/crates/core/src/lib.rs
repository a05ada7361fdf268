//! Derivative-free global optimization of box-constrained black-box
//! functions under an unknown Lipschitz constant.
//!
//! The crate provides:
//!
//! - an adaptive diagonal-partition solver ([`adc`]) that evaluates the
//!   objective at the two main-diagonal corners of each box, memoizes vertex
//!   values exactly ([`vertex_db`]), ranks boxes by lower bounds taken over
//!   every possible Lipschitz-constant estimate at once ([`selection`]), and
//!   alternates explicit local and global phases;
//! - center-sampling DIRECT and DIRECT-l reference solvers ([`direct`]);
//! - the classic test functions plus a seeded multiextremal function
//!   generator with known minima ([`testbed`]);
//! - a benchmark harness with the accuracy-box stopping rule, class-level
//!   comparison criteria, and CSV/markdown reporting ([`bench`]).
//!
//! With the default `parallel` feature the harness runs class members on a
//! rayon pool; without it everything degrades to sequential loops.

pub mod adc;
pub mod bench;
pub mod direct;
pub mod error;
pub mod geometry;
pub mod problem;
pub mod selection;
pub mod ternary;
pub mod testbed;
pub mod vertex_db;

pub use adc::{AdcSolver, RunResult, SolverConfig, StopReason, XiMode};
pub use direct::{DirectConfig, DirectSolver, DirectVariant};
pub use error::{Error, Result};
pub use problem::{EvaluationCounter, ProblemInstance, TargetTest};
