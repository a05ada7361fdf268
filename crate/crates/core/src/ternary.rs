//! Exact coordinates with power-of-three denominators.
//!
//! Every vertex produced by trisecting the unit hypercube has coordinates of
//! the form `n / 3^h`. Keeping them as integer pairs makes vertex identity
//! exact: two numerically equal points always compare equal, which is what
//! the vertex store relies on. Floating-point keys would silently miss
//! reuse.

use crate::error::{Error, Result};

/// Hard cap on the representable depth; `3^80 < u128::MAX` with headroom
/// for the common-depth lifts used in comparisons.
pub const MAX_DEPTH: u8 = 80;

const POW3: [u128; MAX_DEPTH as usize + 1] = {
    let mut t = [1u128; MAX_DEPTH as usize + 1];
    let mut i = 1;
    while i <= MAX_DEPTH as usize {
        t[i] = t[i - 1] * 3;
        i += 1;
    }
    t
};

pub fn pow3(h: u8) -> u128 {
    POW3[h as usize]
}

/// A rational `num / 3^depth` in `[0, 1]`, kept in canonical form:
/// `num` is not divisible by 3 unless `depth` is already 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryCoord {
    num: u128,
    depth: u8,
}

impl TernaryCoord {
    pub fn new(num: u128, depth: u8) -> Self {
        debug_assert!(depth <= MAX_DEPTH);
        debug_assert!(num <= pow3(depth));
        let mut c = Self { num, depth };
        while c.depth > 0 && c.num % 3 == 0 {
            c.num /= 3;
            c.depth -= 1;
        }
        c
    }

    pub const ZERO: Self = Self { num: 0, depth: 0 };
    pub const ONE: Self = Self { num: 1, depth: 0 };

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / pow3(self.depth) as f64
    }

    /// Numerator after raising the denominator to `3^depth`.
    pub fn lifted(&self, depth: u8) -> u128 {
        debug_assert!(depth >= self.depth);
        self.num * pow3(depth - self.depth)
    }

    /// Exact absolute difference `|self - other|`.
    pub fn abs_diff(&self, other: &Self) -> Self {
        let h = self.depth.max(other.depth);
        let (a, b) = (self.lifted(h), other.lifted(h));
        Self::new(a.abs_diff(b), h)
    }

    pub fn cmp_exact(&self, other: &Self) -> std::cmp::Ordering {
        let h = self.depth.max(other.depth);
        self.lifted(h).cmp(&other.lifted(h))
    }
}

impl PartialOrd for TernaryCoord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl Ord for TernaryCoord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cmp_exact(other)
    }
}

/// The two interior cut points of the segment from `a` to `b` (in that
/// orientation): `u = a + 2/3 (b - a)` and `v = b + 2/3 (a - b)`.
///
/// Fails with a capacity error once the result would need a denominator
/// deeper than `max_depth`.
pub fn trisection_points(
    a: &TernaryCoord,
    b: &TernaryCoord,
    max_depth: u8,
) -> Result<(TernaryCoord, TernaryCoord)> {
    let h = a.depth.max(b.depth);
    if h + 1 > max_depth.min(MAX_DEPTH) {
        return Err(Error::DepthExceeded {
            max: max_depth.min(MAX_DEPTH),
        });
    }
    let (an, bn) = (a.lifted(h), b.lifted(h));
    // a + 2/3 (b - a) = (a + 2b) / 3, taken at depth h + 1.
    let u = TernaryCoord::new(an + 2 * bn, h + 1);
    let v = TernaryCoord::new(2 * an + bn, h + 1);
    Ok((u, v))
}
