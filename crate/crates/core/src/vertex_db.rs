//! Memoizing store from exact vertex coordinates to objective values.
//!
//! A vertex is evaluated at most once per run; later requests read the
//! stored value back. Keys are the canonical ternary coordinates, so
//! numerically equal points can never miss.

use std::collections::HashMap;

use crate::error::Result;
use crate::geometry::Vertex;
use crate::problem::{EvaluationCounter, ProblemInstance};

#[derive(Debug, Default)]
pub struct VertexDatabase {
    values: HashMap<Vertex, f64>,
    hits: u64,
}

impl VertexDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value at `v`: read back on a hit, otherwise evaluate through the
    /// problem's unit-cube mapping, store, and return. Failed evaluations
    /// are not cached.
    pub fn get_or_evaluate(
        &mut self,
        v: &Vertex,
        problem: &ProblemInstance,
        counter: &mut EvaluationCounter,
    ) -> Result<f64> {
        if let Some(&val) = self.values.get(v) {
            self.hits += 1;
            counter.db_hits += 1;
            return Ok(val);
        }
        let value = problem.evaluate(&v.to_f64(), counter)?;
        self.values.insert(v.clone(), value);
        Ok(value)
    }

    pub fn peek(&self, v: &Vertex) -> Option<f64> {
        self.values.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    /// Smallest stored value and one vertex attaining it.
    pub fn min_entry(&self) -> Option<(&Vertex, f64)> {
        self.values
            .iter()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(v, &f)| (v, f))
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&Vertex, f64)> {
        self.values.iter().map(|(v, &f)| (v, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Partition;
    use crate::ternary::TernaryCoord;

    fn unit_problem() -> ProblemInstance {
        ProblemInstance::new("sum", vec![0.0, 0.0], vec![1.0, 1.0], |x| x[0] + 2.0 * x[1])
            .unwrap()
    }

    fn vx(pairs: &[(u128, u8)]) -> Vertex {
        Vertex(pairs.iter().map(|&(n, h)| TernaryCoord::new(n, h)).collect())
    }

    #[test]
    fn second_lookup_is_a_hit() {
        let p = unit_problem();
        let mut db = VertexDatabase::new();
        let mut c = EvaluationCounter::default();
        let v = vx(&[(1, 1), (2, 1)]);
        let first = db.get_or_evaluate(&v, &p, &mut c).unwrap();
        let second = db.get_or_evaluate(&v, &p, &mut c).unwrap();
        assert_eq!(first.to_bits(), second.to_bits());
        assert_eq!(c.evaluations, 1);
        assert_eq!(c.db_hits, 1);
        assert_eq!(c.lookups(), 2);
        assert_eq!(db.hits(), 1);
    }

    #[test]
    fn shared_corner_is_evaluated_once() {
        // two adjacent boxes request the same cut vertex
        let p = unit_problem();
        let mut db = VertexDatabase::new();
        let mut c = EvaluationCounter::default();
        let mut part = Partition::new_unit(2, 0.0, 0.0, 64);

        // root -> M=[(2/3,0),(1/3,1)] (slot 0), A (slot 1), B=[(2/3,0),(1,1)] (slot 2)
        part.subdivide::<crate::error::Error>(0, |v| db.get_or_evaluate(v, &p, &mut c))
            .unwrap();
        // B splits along dim 2, evaluating (2/3, 2/3) and (1, 1/3)
        part.subdivide::<crate::error::Error>(2, |v| db.get_or_evaluate(v, &p, &mut c))
            .unwrap();
        // M also cuts at (2/3, 2/3): one read-back, one fresh evaluation
        part.subdivide::<crate::error::Error>(0, |v| db.get_or_evaluate(v, &p, &mut c))
            .unwrap();
        assert_eq!(c.lookups(), 6);
        assert_eq!(c.evaluations, 5);
        assert_eq!(c.db_hits, 1);
    }

    #[test]
    fn ten_subdivisions_can_reuse_five_of_twenty_two_requests() {
        // a scripted 11-iteration run of the square (2 corner trials, then
        // one subdivision per iteration) that hits the store five times:
        // 22 vertex requests but only 17 evaluations
        let p = unit_problem();
        let mut db = VertexDatabase::new();
        let mut c = EvaluationCounter::default();
        let a = Vertex::origin(2);
        let b = Vertex::ones(2);
        let f_a = db.get_or_evaluate(&a, &p, &mut c).unwrap();
        let f_b = db.get_or_evaluate(&b, &p, &mut c).unwrap();
        let mut part = Partition::new_unit(2, f_a, f_b, 64);
        for id in [0u64, 0, 0, 0, 0, 1, 2, 3, 4, 5] {
            part.subdivide::<crate::error::Error>(id, |v| db.get_or_evaluate(v, &p, &mut c))
                .unwrap();
        }
        assert_eq!(part.len(), 21);
        assert_eq!(c.lookups(), 22);
        assert_eq!(c.evaluations, 17);
        assert_eq!(c.db_hits, 5);
    }

    #[test]
    fn reuse_happens_under_any_subdivision_order() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let p = unit_problem();
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut db = VertexDatabase::new();
            let mut c = EvaluationCounter::default();
            db.get_or_evaluate(&Vertex::origin(2), &p, &mut c).unwrap();
            db.get_or_evaluate(&Vertex::ones(2), &p, &mut c).unwrap();
            let mut part = Partition::new_unit(2, 0.0, 3.0, 64);
            for _ in 0..200 {
                let id = rng.gen_range(0..part.len()) as u64;
                part.subdivide::<crate::error::Error>(id, |v| {
                    db.get_or_evaluate(v, &p, &mut c)
                })
                .unwrap();
            }
            assert!(c.db_hits > 0, "no reuse with seed {seed}");
            assert!(c.evaluations < c.lookups());
            assert_eq!(c.lookups(), 2 + 2 * 200);
        }
    }

    #[test]
    fn failed_evaluation_is_not_cached() {
        let p = ProblemInstance::new("nan", vec![0.0], vec![1.0], |x| {
            if x[0] == 0.0 {
                f64::NAN
            } else {
                x[0]
            }
        })
        .unwrap();
        let mut db = VertexDatabase::new();
        let mut c = EvaluationCounter::default();
        let v = Vertex::origin(1);
        assert!(db.get_or_evaluate(&v, &p, &mut c).is_err());
        assert!(db.peek(&v).is_none());
        assert!(db.is_empty());
    }
}
