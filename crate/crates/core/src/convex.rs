//! Linear-time min-plus convolution of two convex hulls and the path of
//! minimal witnesses.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::hull::HullApprox;
use crate::rational::{cmp_sums, Rational};

/// Minimal witness `i*_k` for every diagonal `k` of the convex convolution.
/// Indices are local to the first operand's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPath {
    witnesses: Vec<usize>,
}

impl WitnessPath {
    pub fn witnesses(&self) -> &[usize] {
        &self.witnesses
    }

    pub fn witness(&self, k: usize) -> usize {
        self.witnesses[k]
    }

    /// Number of diagonals, `n + m + 1`.
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Where a grid point sits relative to the witness path on its diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathSide {
    Above,
    On,
    Below,
}

/// Convex convolution values plus the witness path.
#[derive(Clone, Debug)]
pub struct ConvexConv {
    offset: usize,
    values: Vec<Rational>,
    path: WitnessPath,
}

impl ConvexConv {
    /// Global index of `values()[0]`.
    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn path(&self) -> &WitnessPath {
        &self.path
    }
}

/// Computes `hull_f (min,+) hull_g` in `O(n + m)`.
///
/// The witness for diagonal `k` is either the witness for `k - 1` or one
/// past it; ties go to the smaller index, which makes every reported witness
/// the minimal one.
pub fn convex_minplus(bf: &HullApprox, bg: &HullApprox) -> ConvexConv {
    let fv = bf.values();
    let gv = bg.values();
    convex_minplus_values(&fv, &gv, bf.domain().lo + bg.domain().lo)
}

pub(crate) fn convex_minplus_values(fv: &[Rational], gv: &[Rational], offset: usize) -> ConvexConv {
    let n = fv.len() - 1;
    let m = gv.len() - 1;
    let sum = |i: usize, j: usize| fv[i].checked_add(&gv[j]).expect("hull sum overflow");

    let mut witnesses = Vec::with_capacity(n + m + 1);
    let mut values = Vec::with_capacity(n + m + 1);
    witnesses.push(0);
    values.push(sum(0, 0));
    let mut prev = 0usize;
    for k in 1..=n + m {
        let stay_ok = k - prev <= m;
        let step_ok = prev < n;
        let next = match (stay_ok, step_ok) {
            (true, true) => {
                // (value, index) lexicographic: only a strictly smaller value
                // moves the witness forward.
                let stay = [fv[prev], gv[k - prev]];
                let step = [fv[prev + 1], gv[k - prev - 1]];
                if cmp_sums(&step, &stay) == Ordering::Less {
                    prev + 1
                } else {
                    prev
                }
            }
            (true, false) => prev,
            (false, true) => prev + 1,
            (false, false) => unreachable!("diagonal {k} has no grid point"),
        };
        witnesses.push(next);
        values.push(sum(next, k - next));
        prev = next;
    }
    ConvexConv { offset, values, path: WitnessPath { witnesses } }
}

/// Position of point `(i, j)` relative to the witness on diagonal `i + j`.
pub fn path_position(path: &WitnessPath, i: usize, j: usize) -> Result<PathSide> {
    let k = i + j;
    if k >= path.len() {
        return Err(Error::DiagonalOutOfRange { diagonal: k, max: path.len() - 1 });
    }
    Ok(match i.cmp(&path.witnesses[k]) {
        Ordering::Greater => PathSide::Above,
        Ordering::Equal => PathSide::On,
        Ordering::Less => PathSide::Below,
    })
}
