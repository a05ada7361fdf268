//! Lower bounds over hyperintervals and non-dominated selection.
//!
//! Every box maps to a dot `(d, F)`: half its diagonal against the mean of
//! its two corner values. For a slope estimate `L`, `F - L d` bounds the
//! objective from below over the box (valid once `L >= sqrt(2)` times the
//! true Lipschitz constant). A box is worth splitting if some positive `L`
//! makes its bound the smallest of the partition — those are exactly the
//! dots on the lower-right convex hull, found here by a Jarvis march from
//! the lowest dot outward.

use crate::error::{Error, Result};
use crate::geometry::{group_diagonal, Partition};

/// A hyperinterval reduced to its selection coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    /// Half the main-diagonal length (unit-cube units).
    pub d: f64,
    /// Mean of the two corner values.
    pub f_mean: f64,
    pub group: u32,
    pub interval_id: u64,
}

impl DiagramPoint {
    /// Dot for interval `id` of the partition; `d` is taken from the group
    /// formula so equal-sized boxes share the coordinate bit-exactly.
    pub fn of(p: &Partition, id: u64) -> Self {
        let iv = p.interval(id);
        Self {
            d: 0.5 * group_diagonal(iv.group, p.dim()),
            f_mean: iv.f_mean(),
            group: iv.group,
            interval_id: id,
        }
    }

    /// `F - L d`, the lower bound in diagram form.
    pub fn bound(&self, l: f64) -> f64 {
        self.f_mean - l * self.d
    }
}

/// Lower bound `(f_a + f_b - l_hat * |b - a|) / 2` over a box given its
/// corner values and diagonal length. Rejects non-positive slope estimates.
pub fn lower_bound(f_a: f64, f_b: f64, diagonal: f64, l_hat: f64) -> Result<f64> {
    if !(l_hat > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "slope estimate must be positive, got {l_hat}"
        )));
    }
    Ok(0.5 * (f_a + f_b - l_hat * diagonal))
}

/// A hull dot together with the slope range over which it is the minimizer.
#[derive(Debug, Clone, Copy)]
pub struct HullPoint {
    pub point: DiagramPoint,
    pub slope_lo: f64,
    /// `f64::INFINITY` for the largest-diagonal dot.
    pub slope_hi: f64,
}

/// Lower-right convex hull, ordered by increasing `d` starting at the
/// minimum-`F` dot. Consecutive slope ranges share endpoints.
#[derive(Debug, Clone, Default)]
pub struct HullResult {
    pub points: Vec<HullPoint>,
}

impl HullResult {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn interval_ids(&self) -> Vec<u64> {
        self.points.iter().map(|h| h.point.interval_id).collect()
    }
}

/// Jarvis march over arbitrary dots. Input may be in any order; dots with
/// equal `d` should already be reduced to their minimum-`F` representative.
pub fn lower_right_hull(points: &[DiagramPoint]) -> HullResult {
    if points.is_empty() {
        return HullResult::default();
    }

    // Start at minimal F; ties go to the largest d (bigger boxes win).
    let mut cur = 0usize;
    for (i, p) in points.iter().enumerate() {
        let c = &points[cur];
        if p.f_mean < c.f_mean || (p.f_mean == c.f_mean && p.d > c.d) {
            cur = i;
        }
    }

    let mut hull_idx = vec![cur];
    loop {
        let c = &points[cur];
        let mut next: Option<usize> = None;
        let mut next_slope = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            if p.d <= c.d {
                continue;
            }
            let slope = (p.f_mean - c.f_mean) / (p.d - c.d);
            let better = match next {
                None => true,
                // slope ties keep the nearest dot so collinear runs all
                // land on the hull
                Some(j) => slope < next_slope || (slope == next_slope && p.d < points[j].d),
            };
            if better {
                next = Some(i);
                next_slope = slope;
            }
        }
        match next {
            Some(i) => {
                hull_idx.push(i);
                cur = i;
            }
            None => break,
        }
    }

    let mut out = Vec::with_capacity(hull_idx.len());
    for (k, &i) in hull_idx.iter().enumerate() {
        let slope_lo = if k == 0 {
            0.0
        } else {
            let a = &points[hull_idx[k - 1]];
            let b = &points[i];
            (b.f_mean - a.f_mean) / (b.d - a.d)
        };
        let slope_hi = if k + 1 == hull_idx.len() {
            f64::INFINITY
        } else {
            let a = &points[i];
            let b = &points[hull_idx[k + 1]];
            (b.f_mean - a.f_mean) / (b.d - a.d)
        };
        out.push(HullPoint {
            point: points[i],
            slope_lo,
            slope_hi,
        });
    }
    HullResult { points: out }
}

/// Non-dominated boxes among the groups `lo..=hi` of a partition: one
/// representative per non-empty group (smallest mean value, oldest id), then
/// the lower-right hull of those dots. Empty ranges give an empty result.
pub fn non_dominated(p: &Partition, lo: u32, hi: u32) -> HullResult {
    let mut dots = Vec::new();
    for g in lo..=hi {
        if let Some(id) = p.group_representative(g) {
            dots.push(DiagramPoint::of(p, id));
        }
    }
    lower_right_hull(&dots)
}

/// Keep the hull dots whose most favorable admissible bound still undercuts
/// the record by at least `xi`. The largest-diagonal dot always passes.
pub fn improvement_filter(hull: &HullResult, f_min: f64, xi: f64) -> Vec<DiagramPoint> {
    hull.points
        .iter()
        .filter(|h| h.slope_hi.is_infinite() || h.point.bound(h.slope_hi) <= f_min - xi)
        .map(|h| h.point)
        .collect()
}

/// Grid oracle used by validation tests: checks that the diagonal bound at
/// `sqrt(2) * true_l` stays below the objective's minimum over a dense grid
/// of the box `[lo, hi]`.
pub fn bound_is_valid(
    objective: impl Fn(&[f64]) -> f64,
    lo: &[f64],
    hi: &[f64],
    true_l: f64,
    grid: usize,
) -> bool {
    let n = lo.len();
    let f_a = objective(lo);
    let f_b = objective(hi);
    let diag = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    let r = 0.5 * (f_a + f_b - 2f64.sqrt() * true_l * diag);

    let mut grid_min = f64::INFINITY;
    let mut point = vec![0.0; n];
    let total = grid.pow(n as u32);
    for idx in 0..total {
        let mut rest = idx;
        for j in 0..n {
            let step = rest % grid;
            rest /= grid;
            point[j] = lo[j] + (hi[j] - lo[j]) * step as f64 / (grid - 1) as f64;
        }
        let v = objective(&point);
        if v < grid_min {
            grid_min = v;
        }
    }
    r <= grid_min + 1e-12
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::DiagramPoint;
    use std::collections::BTreeSet;

    /// Brute-force non-dominated set: scan log-spaced slope estimates and
    /// collect every argmin (with ties) of `F - L d`.
    pub fn scan_non_dominated(points: &[DiagramPoint], samples: usize) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        let (lo, hi) = (1e-6f64.ln(), 1e6f64.ln());
        for s in 0..samples {
            let l = (lo + (hi - lo) * s as f64 / (samples - 1) as f64).exp();
            let mut best = f64::INFINITY;
            for p in points {
                let b = p.f_mean - l * p.d;
                if b < best {
                    best = b;
                }
            }
            let tol = 1e-9 * (1.0 + best.abs());
            for p in points {
                if p.f_mean - l * p.d <= best + tol {
                    out.insert(p.interval_id);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn dot(id: u64, d: f64, f: f64) -> DiagramPoint {
        DiagramPoint {
            d,
            f_mean: f,
            group: 0,
            interval_id: id,
        }
    }

    #[test]
    fn lower_bound_hand_arithmetic() {
        assert_eq!(lower_bound(1.0, 3.0, 2.0, 2.0).unwrap(), 0.0);
        // constant corners: c - l*d with d the half-diagonal
        let c = 5.0;
        let r = lower_bound(c, c, 0.8, 1.5).unwrap();
        assert!((r - (c - 1.5 * 0.4)).abs() < 1e-15);
        // small slope approaches the mean of the corner values
        let r = lower_bound(1.0, 2.0, 1.0, 1e-300).unwrap();
        assert!((r - 1.5).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_rejects_non_positive_slope() {
        assert!(lower_bound(0.0, 0.0, 1.0, 0.0).is_err());
        assert!(lower_bound(0.0, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn bound_matches_diagram_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f_a = rng.gen_range(-5.0..5.0);
            let f_b = rng.gen_range(-5.0..5.0);
            let diag = rng.gen_range(1e-3..2.0);
            let l = rng.gen_range(1e-3..100.0);
            let via_corners = lower_bound(f_a, f_b, diag, l).unwrap();
            let p = dot(0, diag / 2.0, 0.5 * (f_a + f_b));
            assert!((via_corners - p.bound(l)).abs() <= 1e-12);
        }
    }

    #[test]
    fn lower_bound_decreases_in_slope() {
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let r = lower_bound(1.0, 2.0, 0.5, k as f64).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn hull_keeps_all_three_when_convex() {
        let pts = [dot(0, 1.0, 0.0), dot(1, 2.0, 1.0), dot(2, 3.0, 5.0)];
        let hull = lower_right_hull(&pts);
        assert_eq!(hull.interval_ids(), vec![0, 1, 2]);
        let hp = &hull.points;
        assert_eq!(hp[0].slope_lo, 0.0);
        assert_eq!(hp[0].slope_hi, 1.0);
        assert_eq!(hp[1].slope_lo, 1.0);
        assert_eq!(hp[1].slope_hi, 4.0);
        assert_eq!(hp[2].slope_lo, 4.0);
        assert!(hp[2].slope_hi.is_infinite());
    }

    #[test]
    fn hull_drops_interior_dot() {
        let pts = [dot(0, 1.0, 0.0), dot(1, 2.0, 3.0), dot(2, 3.0, 1.0)];
        let hull = lower_right_hull(&pts);
        assert_eq!(hull.interval_ids(), vec![0, 2]);
    }

    #[test]
    fn single_dot_spans_all_slopes() {
        let hull = lower_right_hull(&[dot(7, 0.5, 1.0)]);
        assert_eq!(hull.points.len(), 1);
        assert_eq!(hull.points[0].slope_lo, 0.0);
        assert!(hull.points[0].slope_hi.is_infinite());
    }

    #[test]
    fn equal_value_dots_resolve_to_largest_box() {
        let pts = [dot(0, 1.0, 0.0), dot(1, 2.0, 0.0), dot(2, 3.0, 0.0)];
        let hull = lower_right_hull(&pts);
        assert_eq!(hull.interval_ids(), vec![2]);
    }

    #[test]
    fn collinear_dots_all_kept() {
        let pts = [dot(0, 1.0, 0.0), dot(1, 2.0, 1.0), dot(2, 3.0, 2.0)];
        let hull = lower_right_hull(&pts);
        assert_eq!(hull.interval_ids(), vec![0, 1, 2]);
    }

    #[test]
    fn hull_agrees_with_slope_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let n = rng.gen_range(1..=30);
            let mut pts = Vec::with_capacity(n);
            for i in 0..n {
                // distinct, well-separated d values, as the group structure
                // guarantees in practice
                let d = 0.05 * (i as f64 + 1.0) + rng.gen_range(0.0..0.02);
                pts.push(dot(i as u64, d, rng.gen_range(-2.0..2.0)));
            }
            let hull: std::collections::BTreeSet<u64> =
                lower_right_hull(&pts).interval_ids().into_iter().collect();
            let scan = oracle::scan_non_dominated(&pts, 10_000);
            assert_eq!(hull, scan, "points: {pts:?}");
        }
    }

    #[test]
    fn improvement_filter_spec_cases() {
        // largest-d dot always passes
        let pts = [dot(0, 1.0, 5.0)];
        let hull = lower_right_hull(&pts);
        assert_eq!(improvement_filter(&hull, -100.0, 1.0).len(), 1);

        // F=1, d=1, slope_hi=0.5, f_min=1, xi=0.6: 0.5 > 0.4, rejected
        let hull = HullResult {
            points: vec![
                HullPoint {
                    point: dot(0, 1.0, 1.0),
                    slope_lo: 0.0,
                    slope_hi: 0.5,
                },
                HullPoint {
                    point: dot(1, 3.0, 2.0),
                    slope_lo: 0.5,
                    slope_hi: f64::INFINITY,
                },
            ],
        };
        let kept = improvement_filter(&hull, 1.0, 0.6);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].interval_id, 1);

        // xi = 0 and F = f_min: any positive slope passes it
        let kept = improvement_filter(&hull, 1.0, 0.0);
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn diagonal_bound_holds_for_norm1() {
        // f(x) = |x|_1 has Lipschitz constant sqrt(2) in 2-norm on the plane
        let f = |x: &[f64]| x.iter().map(|v| v.abs()).sum::<f64>();
        assert!(bound_is_valid(f, &[0.2, 0.1], &[0.9, 0.7], 2f64.sqrt(), 50));
        // constant function: bound is c - sqrt(2) L d <= c
        let c = |_: &[f64]| 3.5;
        assert!(bound_is_valid(c, &[0.0, 0.0], &[1.0, 1.0], 1.0, 10));
    }
}
