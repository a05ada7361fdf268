//! The nine standard test functions with their usual domains, reference
//! minimizers, and reference minima.
//!
//! Coefficients follow the published test set; unit tests refine every
//! reference minimizer locally so a transcribed constant that is off fails
//! loudly instead of silently skewing benchmark results.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];
const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

fn shekel(m: usize) -> impl Fn(&[f64]) -> f64 {
    move |x: &[f64]| {
        -(0..m)
            .map(|i| {
                let s: f64 = (0..4).map(|j| (x[j] - SHEKEL_A[i][j]).powi(2)).sum();
                1.0 / (s + SHEKEL_C[i])
            })
            .sum::<f64>()
    }
}

const HARTMAN3_A: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const HARTMAN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.03815, 0.5743, 0.8828],
];
const HARTMAN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMAN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];
const HARTMAN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

fn hartman3(x: &[f64]) -> f64 {
    -(0..4)
        .map(|i| {
            let s: f64 = (0..3)
                .map(|j| HARTMAN3_A[i][j] * (x[j] - HARTMAN3_P[i][j]).powi(2))
                .sum();
            HARTMAN_C[i] * (-s).exp()
        })
        .sum::<f64>()
}

fn hartman6(x: &[f64]) -> f64 {
    -(0..4)
        .map(|i| {
            let s: f64 = (0..6)
                .map(|j| HARTMAN6_A[i][j] * (x[j] - HARTMAN6_P[i][j]).powi(2))
                .sum();
            HARTMAN_C[i] * (-s).exp()
        })
        .sum::<f64>()
}

fn branin(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let b = 5.1 / (4.0 * PI * PI);
    let c = 5.0 / PI;
    let s = 10.0;
    let t = 1.0 / (8.0 * PI);
    (x2 - b * x1 * x1 + c * x1 - 6.0).powi(2) + s * (1.0 - t) * x1.cos() + s
}

fn goldstein_price(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let t1 = 1.0
        + (a + b + 1.0).powi(2)
            * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let t2 = 30.0
        + (2.0 * a - 3.0 * b).powi(2)
            * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    t1 * t2
}

fn six_hump_camel(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
}

fn shubert(x: &[f64]) -> f64 {
    let g = |t: f64| -> f64 {
        (1..=5)
            .map(|j| j as f64 * ((j as f64 + 1.0) * t + j as f64).cos())
            .sum()
    };
    g(x[0]) * g(x[1])
}

// 1-D factor extrema of the Shubert product; the 18 global minimizers are
// the cross pairs of these two triples, in both coordinate orders.
const SHUBERT_ARGMIN: [f64; 3] = [-7.083506, -0.800321, 5.482864];
const SHUBERT_ARGMAX: [f64; 3] = [-7.708314, -1.425128, 4.858057];

fn shubert_minimizers() -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(18);
    for &a in &SHUBERT_ARGMIN {
        for &b in &SHUBERT_ARGMAX {
            out.push(vec![a, b]);
            out.push(vec![b, a]);
        }
    }
    out
}

pub fn classic_names() -> &'static [&'static str] {
    &[
        "shekel5",
        "shekel7",
        "shekel10",
        "hartman3",
        "hartman6",
        "branin",
        "goldstein-price",
        "six-hump-camel",
        "shubert",
    ]
}

/// Build one of the classic problems by name.
pub fn classic(name: &str) -> Result<ProblemInstance> {
    let p = match name {
        "shekel5" => ProblemInstance::new(name, vec![0.0; 4], vec![10.0; 4], shekel(5))?
            .with_minimum(vec![vec![4.0, 4.0, 4.0, 4.0]], -10.153200)?,
        "shekel7" => ProblemInstance::new(name, vec![0.0; 4], vec![10.0; 4], shekel(7))?
            .with_minimum(vec![vec![4.0, 4.0, 4.0, 4.0]], -10.402941)?,
        "shekel10" => ProblemInstance::new(name, vec![0.0; 4], vec![10.0; 4], shekel(10))?
            .with_minimum(vec![vec![4.0, 4.0, 4.0, 4.0]], -10.536410)?,
        "hartman3" => ProblemInstance::new(name, vec![0.0; 3], vec![1.0; 3], hartman3)?
            .with_minimum(vec![vec![0.114614, 0.555649, 0.852547]], -3.862782)?,
        "hartman6" => ProblemInstance::new(name, vec![0.0; 6], vec![1.0; 6], hartman6)?
            .with_minimum(
                vec![vec![0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573]],
                -3.322368,
            )?,
        "branin" => ProblemInstance::new(name, vec![-5.0, 0.0], vec![10.0, 15.0], branin)?
            .with_minimum(
                vec![
                    vec![-PI, 12.275],
                    vec![PI, 2.275],
                    vec![9.42478, 2.475],
                ],
                0.397887,
            )?,
        "goldstein-price" => {
            ProblemInstance::new(name, vec![-2.0, -2.0], vec![2.0, 2.0], goldstein_price)?
                .with_minimum(vec![vec![0.0, -1.0]], 3.0)?
        }
        "six-hump-camel" => {
            ProblemInstance::new(name, vec![-3.0, -2.0], vec![3.0, 2.0], six_hump_camel)?
                .with_minimum(
                    vec![
                        vec![0.089842, -0.712656],
                        vec![-0.089842, 0.712656],
                    ],
                    -1.031628,
                )?
        }
        "shubert" => ProblemInstance::new(name, vec![-8.0, -8.0], vec![10.0, 10.0], shubert)?
            .with_minimum(shubert_minimizers(), -186.730909)?,
        _ => return Err(Error::UnknownFunction(name.to_string())),
    };
    Ok(p)
}
