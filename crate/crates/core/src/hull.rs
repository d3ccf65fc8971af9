//! Lower convex hulls of integer sequences and the near-convexity gap.
//!
//! The hull of a sequence `f` is the pointwise-largest convex function below
//! it. Its vertices are input points, so every hull value is a rational with a
//! denominator no larger than the segment it falls on. The gap
//! `max_i f(i) - hull(i)` measures how far `f` is from convex.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::seq::{negate, IndexRange, IntSeq};

/// Lower convex hull of a sequence plus its near-convexity parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullApprox {
    breakpoints: Vec<(usize, i64)>,
    delta: Rational,
    raw_gap: Rational,
    domain: IndexRange,
}

impl HullApprox {
    /// Hull vertices `(index, value)` with strictly increasing slopes.
    pub fn breakpoints(&self) -> &[(usize, i64)] {
        &self.breakpoints
    }

    /// `max(1, raw_gap)`.
    pub fn delta(&self) -> Rational {
        self.delta
    }

    /// `max_i f(i) - hull(i)` without the clamp.
    pub fn raw_gap(&self) -> Rational {
        self.raw_gap
    }

    pub fn domain(&self) -> IndexRange {
        self.domain
    }

    /// Hull value at every index of the domain, in order. `O(len)`.
    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.domain.len());
        out.push(Rational::from_int(self.breakpoints[0].1));
        for w in self.breakpoints.windows(2) {
            let ((x1, y1), (x2, y2)) = (w[0], w[1]);
            for i in x1 + 1..=x2 {
                out.push(interpolate((x1, y1), (x2, y2), i));
            }
        }
        out
    }
}

fn interpolate((x1, y1): (usize, i64), (x2, y2): (usize, i64), i: usize) -> Rational {
    if i == x1 {
        return Rational::from_int(y1);
    }
    if i == x2 {
        return Rational::from_int(y2);
    }
    let len = (x2 - x1) as i128;
    let num = y1 as i128 * (x2 - i) as i128 + y2 as i128 * (i - x1) as i128;
    Rational::new(num, len)
}

/// Cross product of `(b - a) x (c - a)`; positive for a left (convex) turn.
fn cross(a: (usize, i64), b: (usize, i64), c: (usize, i64)) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Monotone-chain scan over points already sorted by index. `O(len)`.
pub fn lower_hull(f: &IntSeq) -> HullApprox {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for (k, &v) in f.values().iter().enumerate() {
        let p = (f.offset() + k, v);
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }

    let mut raw_gap = Rational::ZERO;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for i in a.0 + 1..b.0 {
            let gap = Rational::from_int(f.at(i)).checked_add(&interpolate(a, b, i).neg());
            let gap = gap.expect("hull gap overflow");
            if gap > raw_gap {
                raw_gap = gap;
            }
        }
    }
    let delta = if raw_gap > Rational::ONE { raw_gap } else { Rational::ONE };
    HullApprox { breakpoints: hull, delta, raw_gap, domain: f.domain() }
}

/// Exact hull value at global index `i`.
pub fn eval_hull(h: &HullApprox, i: usize) -> Result<Rational> {
    if !h.domain.contains(i) {
        return Err(Error::OutOfDomain { index: i, lo: h.domain.lo, hi: h.domain.hi });
    }
    let bp = &h.breakpoints;
    let pos = bp.partition_point(|&(x, _)| x < i);
    if pos < bp.len() && bp[pos].0 == i {
        return Ok(Rational::from_int(bp[pos].1));
    }
    Ok(interpolate(bp[pos - 1], bp[pos], i))
}

/// Unclamped gap between `f` and its upper concave hull: the raw lower-hull
/// gap of `-f`.
pub fn upper_hull_gap(f: &IntSeq) -> Rational {
    lower_hull(&negate(f)).raw_gap
}

/// Whether consecutive hull slopes strictly increase.
pub fn slopes_strictly_increase(h: &HullApprox) -> bool {
    h.breakpoints.windows(3).all(|w| cross(w[0], w[1], w[2]) > 0)
}

/// Whether `hull(i) <= f(i) <= hull(i) + delta` at every index.
pub fn sandwiches(h: &HullApprox, f: &IntSeq) -> bool {
    h.values().iter().zip(f.values()).all(|(hv, &v)| {
        let v = Rational::from_int(v);
        hv.cmp(&v) != Ordering::Greater
            && v.checked_add(&hv.neg()).is_some_and(|gap| gap <= h.delta)
    })
}
