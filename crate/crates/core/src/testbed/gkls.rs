//! Seeded generator of multiextremal test classes with known minima.
//!
//! Each member function is a paraboloid `||x - T||^2` over `[-1, 1]^N`,
//! distorted inside a set of pairwise-disjoint balls. Inside a ball with
//! center `m`, radius `rho` and floor value `fv`, the function becomes
//!
//! ```text
//! f(x) = fv + (g(x) - fv) * s(||x - m|| / rho),   s(u) = u^2 (3 - 2u)
//! ```
//!
//! `s(1) = 1`, `s'(1) = 0` glue value and gradient to the paraboloid on the
//! sphere; `s(0) = s'(0) = 0` make `m` a critical point with `f(m) = fv`
//! exactly. One ball carries the prescribed global minimum; the paraboloid
//! vertex stays outside every ball and is itself a local minimizer. A class
//! is fully determined by five parameters and a seed, and two generations
//! from the same inputs are bitwise identical.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

pub const CLASS_SIZE: usize = 100;
const PARABOLOID_MIN: f64 = 0.0;
const PLACEMENT_ATTEMPTS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GklsParams {
    pub dimension: usize,
    /// Total number of local minima, including the paraboloid vertex and
    /// the global minimizer.
    pub minima: usize,
    /// Global minimum value; must lie below the paraboloid minimum (0).
    pub global_value: f64,
    /// Radius of the global minimizer's attraction ball.
    pub global_radius: f64,
    /// Distance from the global minimizer to the paraboloid vertex.
    pub global_dist: f64,
    pub seed: u64,
}

impl GklsParams {
    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Generation("dimension must be positive".into()));
        }
        if self.minima < 2 {
            return Err(Error::Generation(
                "need at least the paraboloid vertex and the global minimizer".into(),
            ));
        }
        if !(self.global_value < PARABOLOID_MIN) {
            return Err(Error::Generation(format!(
                "global value {} must lie below the paraboloid minimum {}",
                self.global_value, PARABOLOID_MIN
            )));
        }
        if !(self.global_radius > 0.0) || !(self.global_dist > 0.0) {
            return Err(Error::Generation(
                "radius and vertex distance must be positive".into(),
            ));
        }
        if self.global_radius >= self.global_dist {
            return Err(Error::Generation(format!(
                "attraction radius {} would swallow the paraboloid vertex at distance {}",
                self.global_radius, self.global_dist
            )));
        }
        if self.global_radius >= 1.0 || self.global_dist > 2.0 * (self.dimension as f64).sqrt() {
            return Err(Error::Generation(
                "attraction ball cannot fit inside the domain".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Ball {
    center: Vec<f64>,
    radius: f64,
    value: f64,
}

/// One generated member with its full construction data.
#[derive(Debug, Clone, PartialEq)]
pub struct GklsFunction {
    pub params: GklsParams,
    pub index: usize,
    /// Paraboloid vertex (a local minimizer with value 0).
    pub vertex: Vec<f64>,
    /// The global minimizer; `f` equals `params.global_value` there exactly.
    pub global_minimizer: Vec<f64>,
    balls: Vec<Ball>,
}

fn norm2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl GklsFunction {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let g = {
            let d = norm2(x, &self.vertex);
            d * d + PARABOLOID_MIN
        };
        for ball in &self.balls {
            let r = norm2(x, &ball.center);
            if r < ball.radius {
                let u = r / ball.radius;
                let s = u * u * (3.0 - 2.0 * u);
                return ball.value + (g - ball.value) * s;
            }
        }
        g
    }

    /// Gradient of the underlying paraboloid (the reference for boundary
    /// smoothness checks).
    pub fn paraboloid_gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.vertex).map(|(a, t)| 2.0 * (a - t)).collect()
    }

    pub fn ball_boundaries(&self) -> Vec<(Vec<f64>, f64)> {
        self.balls
            .iter()
            .map(|b| (b.center.clone(), b.radius))
            .collect()
    }

    pub fn local_minima(&self) -> Vec<(Vec<f64>, f64)> {
        let mut out = vec![(self.vertex.clone(), PARABOLOID_MIN)];
        out.extend(self.balls.iter().map(|b| (b.center.clone(), b.value)));
        out
    }

    pub fn name(&self) -> String {
        let p = &self.params;
        format!(
            "gkls_n{}_m{}_s{}_f{:03}",
            p.dimension, p.minima, p.seed, self.index
        )
    }

    pub fn to_problem(&self) -> ProblemInstance {
        let n = self.params.dimension;
        let me = self.clone();
        ProblemInstance::new(self.name(), vec![-1.0; n], vec![1.0; n], move |x: &[f64]| {
            me.evaluate(x)
        })
        .expect("fixed bounds")
        .with_minimum(
            vec![self.global_minimizer.clone()],
            self.params.global_value,
        )
        .expect("minimizer inside the domain by construction")
    }
}

fn random_unit_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = norm2(&v, &vec![0.0; n]);
        if len > 1e-3 {
            return v.into_iter().map(|c| c / len).collect();
        }
    }
}

fn generate_member(params: &GklsParams, index: usize) -> Result<GklsFunction> {
    let n = params.dimension;
    let mut rng = ChaCha8Rng::seed_from_u64(
        params
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index as u64),
    );

    // paraboloid vertex, kept away from the walls
    let vertex: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.8..0.8)).collect();

    // global minimizer on the sphere of radius global_dist around the vertex
    let mut global_minimizer = None;
    for _ in 0..PLACEMENT_ATTEMPTS {
        let dir = random_unit_direction(&mut rng, n);
        let cand: Vec<f64> = vertex
            .iter()
            .zip(&dir)
            .map(|(v, d)| v + params.global_dist * d)
            .collect();
        if cand.iter().all(|&c| c.abs() <= 1.0 - params.global_radius) {
            global_minimizer = Some(cand);
            break;
        }
    }
    let global_minimizer = global_minimizer.ok_or_else(|| {
        Error::Generation(format!(
            "could not place the global ball (dist {} radius {}) inside the domain",
            params.global_dist, params.global_radius
        ))
    })?;

    let mut balls = vec![Ball {
        center: global_minimizer.clone(),
        radius: params.global_radius,
        value: params.global_value,
    }];

    // remaining local minima: disjoint balls that exclude the vertex
    let extra = params.minima - 2;
    let depth_span = PARABOLOID_MIN - params.global_value;
    for _ in 0..extra {
        let mut placed = false;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let radius = rng.gen_range(0.5 * params.global_radius..=params.global_radius);
            let center: Vec<f64> =
                (0..n).map(|_| rng.gen_range(-(1.0 - radius)..(1.0 - radius))).collect();
            let vertex_gap = norm2(&center, &vertex) - radius;
            if vertex_gap < 0.01 {
                continue;
            }
            if balls
                .iter()
                .any(|b| norm2(&b.center, &center) < b.radius + radius + 0.01)
            {
                continue;
            }
            // the ball floor must stay above the global value yet below the
            // paraboloid on the ball boundary, so the center is a strict
            // local minimizer
            let ceiling = (vertex_gap * vertex_gap + PARABOLOID_MIN)
                .min(PARABOLOID_MIN + depth_span)
                - 0.05 * depth_span;
            let floor = params.global_value + 0.1 * depth_span;
            if ceiling <= floor {
                continue;
            }
            let value = rng.gen_range(floor..ceiling);
            balls.push(Ball {
                center,
                radius,
                value,
            });
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::Generation(format!(
                "could not place {} disjoint attraction balls (index {})",
                params.minima - 1,
                index
            )));
        }
    }

    Ok(GklsFunction {
        params: *params,
        index,
        vertex,
        global_minimizer,
        balls,
    })
}

/// Generate the full class with construction details exposed.
pub fn generate_class_functions(params: &GklsParams) -> Result<Vec<GklsFunction>> {
    params.validate()?;
    (0..CLASS_SIZE).map(|i| generate_member(params, i)).collect()
}

/// Generate the class as ready-to-run problems.
pub fn generate_class(params: &GklsParams) -> Result<Vec<ProblemInstance>> {
    Ok(generate_class_functions(params)?
        .iter()
        .map(GklsFunction::to_problem)
        .collect())
}
