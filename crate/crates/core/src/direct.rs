//! Center-sampling reference solvers: DIRECT and its locally-biased
//! variant.
//!
//! Both trisect boxes of the unit cube and evaluate the objective only at
//! box centers. Per iteration they select the boxes that minimize the
//! center-value lower bound for some slope estimate (the same lower-right
//! hull machinery the diagonal solver uses) and divide them. The classic
//! variant measures boxes by half-diagonal and splits along every longest
//! side; the locally-biased variant measures by half the longest side and
//! splits along a single side, dividing at most one box per distinct
//! measure.

use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::adc::{RunResult, StopReason};
use crate::error::{Error, Result};
use crate::geometry::{group_diagonal, volumes_tile_exactly, FKey};
use crate::problem::{EvaluationCounter, ProblemInstance, TargetTest};
use crate::selection::{improvement_filter, lower_right_hull, DiagramPoint, HullResult};
use crate::ternary::{pow3, TernaryCoord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectVariant {
    Classic,
    LocallyBiased,
}

#[derive(Debug, Clone)]
pub struct DirectConfig {
    pub epsilon: f64,
    pub t_max: u64,
    pub max_depth: u8,
    pub target: Option<TargetTest>,
    pub variant: DirectVariant,
}

impl Default for DirectConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            t_max: 1_000_000,
            max_depth: 64,
            target: None,
            variant: DirectVariant::Classic,
        }
    }
}

/// Center coordinate `num / (2 * 3^depth)`. Centers of trisection cells are
/// never at ternary points, so the extra factor of two keeps them exact; a
/// canonical pair makes center identity bit-exact for the sampling store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CenterCoord {
    num: u128,
    depth: u8,
}

impl CenterCoord {
    fn new(num: u128, depth: u8) -> Self {
        let mut c = Self { num, depth };
        while c.depth > 0 && c.num % 3 == 0 {
            c.num /= 3;
            c.depth -= 1;
        }
        c
    }

    pub const HALF: Self = Self { num: 1, depth: 0 };

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (2.0 * pow3(self.depth) as f64)
    }

    /// Centers of the two outer thirds when the surrounding box has side
    /// depth `side_depth` in this dimension: `value ± 3^-(side_depth + 1)`.
    fn offset_pair(&self, side_depth: u8) -> (Self, Self) {
        let h = side_depth + 1;
        debug_assert!(h >= self.depth);
        let lifted = self.num * pow3(h - self.depth);
        (Self::new(lifted - 2, h), Self::new(lifted + 2, h))
    }
}

/// A live box of the center-sampling partition.
#[derive(Debug, Clone)]
pub struct CenterBox {
    pub id: u64,
    pub center: Vec<CenterCoord>,
    /// Per-dimension trisection depth; side length is `3^-depth`.
    pub depths: Vec<u8>,
    /// Total trisections from the root (volume is `3^-splits`).
    pub splits: u32,
    pub f_center: f64,
}

impl CenterBox {
    /// Exact bounds along dimension `j`.
    pub fn bounds(&self, j: usize) -> (TernaryCoord, TernaryCoord) {
        let e = self.depths[j];
        let c = &self.center[j];
        let lifted = c.num * pow3(e - c.depth);
        // center - side/2 and center + side/2; numerators are even
        let lo = TernaryCoord::new((lifted - 1) / 2, e);
        let hi = TernaryCoord::new((lifted + 1) / 2, e);
        (lo, hi)
    }

    /// Half-diagonal (classic measure).
    pub fn half_diagonal(&self, n: usize) -> f64 {
        0.5 * group_diagonal(self.splits, n)
    }

    /// Minimum depth = longest side; the locally-biased measure class.
    pub fn min_depth(&self) -> u8 {
        *self.depths.iter().min().expect("non-empty dims")
    }
}

pub struct DirectSolver {
    problem: ProblemInstance,
    config: DirectConfig,
    boxes: Vec<CenterBox>,
    /// Live members per splits-group, ordered by (center value, id).
    groups: Vec<BTreeSet<(FKey, u64)>>,
    min_group: u32,
    max_group: u32,
    store: HashMap<Vec<CenterCoord>, f64>,
    counter: EvaluationCounter,
    f_min: f64,
    best_center: Vec<CenterCoord>,
    iterations: u64,
    stopped: Option<StopReason>,
}

impl DirectSolver {
    pub fn new(problem: ProblemInstance, config: DirectConfig) -> Result<Self> {
        if config.t_max < 1 {
            return Err(Error::InvalidArgument(
                "trial budget must allow the initial center trial".into(),
            ));
        }
        let n = problem.dimension();
        let center = vec![CenterCoord::HALF; n];
        let mut counter = EvaluationCounter::default();
        let point: Vec<f64> = center.iter().map(CenterCoord::to_f64).collect();
        let f = problem.evaluate(&point, &mut counter)?;

        let mut stopped = None;
        if let Some(t) = &config.target {
            if t.hit(&point) {
                stopped = Some(StopReason::TargetHit);
            }
        }
        if stopped.is_none() && counter.evaluations >= config.t_max {
            stopped = Some(StopReason::Budget);
        }

        let root = CenterBox {
            id: 0,
            center: center.clone(),
            depths: vec![0; n],
            splits: 0,
            f_center: f,
        };
        let mut groups = vec![BTreeSet::new()];
        groups[0].insert((FKey(f), 0));
        let mut store = HashMap::new();
        store.insert(center.clone(), f);
        Ok(Self {
            problem,
            config,
            boxes: vec![root],
            groups,
            min_group: 0,
            max_group: 0,
            store,
            counter,
            f_min: f,
            best_center: center,
            iterations: 0,
            stopped,
        })
    }

    pub fn boxes(&self) -> &[CenterBox] {
        &self.boxes
    }

    pub fn counter(&self) -> EvaluationCounter {
        self.counter
    }

    pub fn f_min(&self) -> f64 {
        self.f_min
    }

    pub fn stop_reason(&self) -> Option<StopReason> {
        self.stopped
    }

    pub fn variant(&self) -> DirectVariant {
        self.config.variant
    }

    pub fn tiles_exactly(&self) -> bool {
        volumes_tile_exactly(self.boxes.iter().map(|b| b.splits))
    }

    /// Candidate dots for the hull, one per measure class: group
    /// representatives for the classic variant, merged per-longest-side
    /// representatives for the locally-biased one.
    pub fn candidate_dots(&self) -> Vec<DiagramPoint> {
        let n = self.problem.dimension();
        let mut dots = Vec::new();
        match self.config.variant {
            DirectVariant::Classic => {
                for l in self.min_group..=self.max_group {
                    if let Some(&(fk, id)) = self.groups[l as usize].first() {
                        dots.push(DiagramPoint {
                            d: 0.5 * group_diagonal(l, n),
                            f_mean: fk.0,
                            group: l,
                            interval_id: id,
                        });
                    }
                }
            }
            DirectVariant::LocallyBiased => {
                let m_lo = self.min_group / n as u32;
                let m_hi = self.max_group / n as u32;
                for m in m_lo..=m_hi {
                    let mut best: Option<(FKey, u64)> = None;
                    for l in (m * n as u32)..=(m * n as u32 + n as u32 - 1) {
                        if l > self.max_group {
                            break;
                        }
                        if let Some(&entry) = self.groups[l as usize].first() {
                            if best.map_or(true, |b| entry < b) {
                                best = Some(entry);
                            }
                        }
                    }
                    if let Some((fk, id)) = best {
                        dots.push(DiagramPoint {
                            d: 0.5 / pow3(m as u8) as f64,
                            f_mean: fk.0,
                            group: m,
                            interval_id: id,
                        });
                    }
                }
            }
        }
        dots
    }

    pub fn selection_hull(&self) -> HullResult {
        lower_right_hull(&self.candidate_dots())
    }

    /// Boxes to divide for one passing hull dot. The classic variant takes
    /// every box of the measure class tied at the representative's value
    /// (oldest first); the locally-biased variant only the representative.
    fn division_targets(&self, dot: &DiagramPoint) -> Vec<u64> {
        match self.config.variant {
            DirectVariant::Classic => {
                let set = &self.groups[dot.group as usize];
                let mut ids: Vec<u64> = set
                    .iter()
                    .take_while(|(fk, _)| fk.0 == dot.f_mean)
                    .map(|&(_, id)| id)
                    .collect();
                ids.sort_unstable();
                ids
            }
            DirectVariant::LocallyBiased => vec![dot.interval_id],
        }
    }

    fn evaluate_center(&mut self, center: &[CenterCoord]) -> Result<f64> {
        if let Some(&v) = self.store.get(center) {
            // never reached in practice: centers are interior and unique
            self.counter.db_hits += 1;
            return Ok(v);
        }
        let point: Vec<f64> = center.iter().map(CenterCoord::to_f64).collect();
        let f = self.problem.evaluate(&point, &mut self.counter)?;
        self.store.insert(center.to_vec(), f);
        if f < self.f_min {
            self.f_min = f;
            self.best_center = center.to_vec();
        }
        if let Some(t) = &self.config.target {
            if t.hit(&point) {
                self.stopped = Some(StopReason::TargetHit);
            }
        }
        Ok(f)
    }

    /// Trisect box `id` along its longest sides (all of them for classic,
    /// the lowest-indexed one for locally-biased). Dimensions whose samples
    /// were cut off by a stop are simply left unsplit.
    fn divide_box(&mut self, id: u64) -> Result<()> {
        let n = self.problem.dimension();
        let b = self.boxes[id as usize].clone();
        let m = b.min_depth();
        if m + 1 > self.config.max_depth {
            return Err(Error::DepthExceeded {
                max: self.config.max_depth,
            });
        }

        let mut long_dims: Vec<usize> = (0..n).filter(|&j| b.depths[j] == m).collect();
        if self.config.variant == DirectVariant::LocallyBiased {
            long_dims.truncate(1);
        }

        // sample c +/- third along each longest side
        let mut sampled: Vec<(usize, CenterCoord, f64, CenterCoord, f64)> = Vec::new();
        for &j in &long_dims {
            let (lo_c, hi_c) = b.center[j].offset_pair(m);
            let mut lo_center = b.center.clone();
            lo_center[j] = lo_c;
            let f_lo = self.evaluate_center(&lo_center)?;
            let mut hi_center = b.center.clone();
            hi_center[j] = hi_c;
            let f_hi = self.evaluate_center(&hi_center)?;
            sampled.push((j, lo_c, f_lo, hi_c, f_hi));
            if self.stopped.is_some() {
                break;
            }
            if self.counter.evaluations >= self.config.t_max {
                self.stopped = Some(StopReason::Budget);
                break;
            }
        }

        // best-first split order: dimension with the lowest sampled value
        // is divided first and keeps the larger remainder boxes around it
        sampled.sort_by(|a, b| a.2.min(a.4).total_cmp(&b.2.min(b.4)).then(a.0.cmp(&b.0)));

        let old_key = (FKey(b.f_center), b.id);
        let mut depths = b.depths.clone();
        let mut splits = b.splits;
        for (j, lo_c, f_lo, hi_c, f_hi) in sampled {
            depths[j] += 1;
            splits += 1;
            for (c, f) in [(lo_c, f_lo), (hi_c, f_hi)] {
                let mut center = b.center.clone();
                center[j] = c;
                let nb = CenterBox {
                    id: self.boxes.len() as u64,
                    center,
                    depths: depths.clone(),
                    splits,
                    f_center: f,
                };
                self.group_insert(nb.splits, nb.f_center, nb.id);
                self.boxes.push(nb);
            }
        }

        // the divided box keeps its center and shrinks in place
        self.groups[b.splits as usize].remove(&old_key);
        self.group_insert(splits, b.f_center, b.id);
        let slot = &mut self.boxes[id as usize];
        slot.depths = depths;
        slot.splits = splits;
        while self.groups[self.min_group as usize].is_empty() {
            self.min_group += 1;
        }
        Ok(())
    }

    fn group_insert(&mut self, splits: u32, f: f64, id: u64) {
        if self.groups.len() <= splits as usize {
            self.groups.resize_with(splits as usize + 1, BTreeSet::new);
        }
        self.groups[splits as usize].insert((FKey(f), id));
        if splits > self.max_group {
            self.max_group = splits;
        }
    }

    /// One iteration: hull, margin filter, divide the survivors in
    /// increasing-measure order. Returns the divided box ids.
    pub fn step(&mut self) -> Result<Vec<u64>> {
        if self.stopped.is_some() {
            return Ok(Vec::new());
        }
        let hull = self.selection_hull();
        let xi = self.config.epsilon * self.f_min.abs();
        let chosen = improvement_filter(&hull, self.f_min, xi);

        let mut divided = Vec::new();
        'outer: for dot in &chosen {
            for id in self.division_targets(dot) {
                self.divide_box(id)?;
                divided.push(id);
                if self.stopped.is_some() {
                    break 'outer;
                }
            }
        }
        self.iterations += 1;
        Ok(divided)
    }

    pub fn run(&mut self) -> Result<RunResult> {
        while self.stopped.is_none() {
            self.step()?;
        }
        Ok(self.result())
    }

    pub fn result(&self) -> RunResult {
        let unit: Vec<f64> = self.best_center.iter().map(CenterCoord::to_f64).collect();
        RunResult {
            best_value: self.f_min,
            best_point: self.problem.from_unit_cube(&unit),
            trials: self.counter.evaluations,
            db_hits: self.counter.db_hits,
            intervals: self.boxes.len() as u64,
            iterations: self.iterations,
            stop: self.stopped.unwrap_or(StopReason::Budget),
            trace: None,
        }
    }
}
