//! Benchmark objectives: the classic test set and a seeded generator of
//! multiextremal functions with known minima.

mod classic;
mod gkls;

pub use classic::{classic, classic_names};
pub use gkls::{generate_class, generate_class_functions, GklsFunction, GklsParams};

use crate::problem::ProblemInstance;

/// Same problem with a constant added to every objective value. Minimizers
/// are unchanged; a known minimum shifts along.
pub fn shift(problem: &ProblemInstance, c: f64) -> ProblemInstance {
    let f = problem.raw_objective();
    let name = if c == 0.0 {
        problem.name().to_string()
    } else {
        format!("{}_shift{}", problem.name(), c)
    };
    let shifted = ProblemInstance::new(
        name,
        problem.lower().to_vec(),
        problem.upper().to_vec(),
        move |x: &[f64]| f(x) + c,
    )
    .expect("bounds already validated");
    match problem.known_minimum() {
        Some(m) => shifted
            .with_minimum(problem.known_minimizers().to_vec(), m + c)
            .expect("minimizers already validated"),
        None => shifted,
    }
}

/// Compass search with shrinking steps, clamped to the box. Used as the
/// local refinement oracle that gates every hard-coded reference minimum.
#[cfg(test)]
pub(crate) fn refine_local(
    f: impl Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    start: &[f64],
) -> (Vec<f64>, f64) {
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut step: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.01 * (b - a)).collect();
    for _ in 0..45 {
        loop {
            let mut moved = false;
            for j in 0..x.len() {
                for s in [1.0f64, -1.0] {
                    let mut y = x.clone();
                    y[j] = (y[j] + s * step[j]).clamp(lo[j], hi[j]);
                    let fy = f(&y);
                    if fy < fx {
                        x = y;
                        fx = fy;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        for s in step.iter_mut() {
            *s *= 0.5;
        }
    }
    (x, fx)
}
