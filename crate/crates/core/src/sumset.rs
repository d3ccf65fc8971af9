//! Output-sensitive min-plus evaluation of a box whose two operands hug
//! lines of a common slope.
//!
//! Each point `(i, f(i))` is sheared by the rounded line `floor(a * i)` so the
//! residuals fall into a window of width `O(delta)`. Packing `(i, residual)`
//! into `i * M + residual` turns the two-dimensional sumset into a
//! one-dimensional one over a domain of size `O(delta * s)`, which a single
//! exact transform handles. Rounding each operand separately loses one unit
//! whenever the fractional parts of `a * i` and `a * j` carry; a second,
//! fraction-weighted convolution counts those carries so every decoded
//! value is exact.

use crate::error::{Error, Result};
use crate::ntt;
use crate::rational::Rational;
use crate::seq::{IndexRange, IntSeq};

/// A line over an index range together with an allowed deviation.
///
/// The line runs from `start` at `range.lo` to `start + rise` at `range.hi`;
/// both endpoint values are exact rationals and the slope is
/// `rise / (range.hi - range.lo)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBand {
    range: IndexRange,
    start: Rational,
    rise: i64,
    half_width: i64,
}

impl LinearBand {
    pub fn new(range: IndexRange, start: Rational, rise: i64, half_width: i64) -> Result<Self> {
        if range.len() == 1 && rise != 0 {
            return Err(Error::InvalidParameter("single-point band must have zero rise".into()));
        }
        if half_width < 0 {
            return Err(Error::InvalidParameter("negative band half-width".into()));
        }
        Ok(LinearBand { range, start, rise, half_width })
    }

    pub fn range(&self) -> IndexRange {
        self.range
    }

    pub fn start(&self) -> Rational {
        self.start
    }

    pub fn end(&self) -> Rational {
        self.start.checked_add(&Rational::from_int(self.rise)).expect("band end overflow")
    }

    pub fn rise(&self) -> i64 {
        self.rise
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    fn run(&self) -> i64 {
        (self.range.len() as i64 - 1).max(1)
    }

    /// Line value at global index `i`.
    pub fn center(&self, i: usize) -> Rational {
        let run = self.run() as i128;
        let x = (i - self.range.lo) as i128;
        let num = self.start.num() * run + self.rise as i128 * x * self.start.den();
        Rational::new(num, self.start.den() * run)
    }

    /// Whether `|v - center(i)| <= half_width`.
    pub fn contains(&self, i: usize, v: i64) -> bool {
        if !self.range.contains(i) {
            return false;
        }
        let c = self.center(i);
        // |v * den - num| <= hw * den
        let diff = (v as i128) * c.den() - c.num();
        diff.abs() <= self.half_width as i128 * c.den()
    }
}

/// Which evaluation strategy [`banded_sumset_min`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SumsetKernel {
    /// Packed indicator convolution.
    Transform,
    /// Per-diagonal scan over the box; cross-check path.
    Direct,
    /// Whichever of the two is cheaper for the box at hand. Direct is only
    /// chosen when `s^2` undercuts the transform cost, which keeps it within
    /// `O(delta * s log)`.
    #[default]
    Auto,
}

/// Result of evaluating one box.
#[derive(Clone, Debug)]
pub struct SumsetOutput {
    /// `min { f(i) + g(j) : i + j = k }` over `[I.lo + J.lo .. I.hi + J.hi]`.
    pub seq: IntSeq,
    /// Number of distinct `(k, value)` points of the sumset; reported by the
    /// transform kernel only.
    pub sumset_size: Option<usize>,
    /// Larger of the two residual windows (max - min of the sheared values).
    pub window: i64,
    /// Packing stride `M`; always greater than the sum of both windows.
    pub stride: i64,
    pub kernel: SumsetKernel,
}

struct Sheared {
    residual: Vec<i64>,
    frac: Vec<u64>,
    min: i64,
    max: i64,
}

/// Rewrites `v(lo + x) = residual(x) + floor(rise * x / run)` and records
/// `frac(x) = rise * x mod run`.
fn shear(s: &IntSeq, rise: i64, run: i64) -> Sheared {
    let mut residual = Vec::with_capacity(s.len());
    let mut frac = Vec::with_capacity(s.len());
    for (x, &v) in s.values().iter().enumerate() {
        let t = rise as i128 * x as i128;
        residual.push(v - t.div_euclid(run as i128) as i64);
        frac.push(t.rem_euclid(run as i128) as u64);
    }
    let min = *residual.iter().min().unwrap();
    let max = *residual.iter().max().unwrap();
    Sheared { residual, frac, min, max }
}

/// Exact box minimum for two banded operands of equal length and common
/// slope.
pub fn banded_sumset_min(
    fa: &IntSeq,
    ga: &IntSeq,
    band_f: &LinearBand,
    band_g: &LinearBand,
    kernel: SumsetKernel,
) -> Result<SumsetOutput> {
    if fa.len() != ga.len() {
        return Err(Error::InvalidBox(format!("operand lengths differ: {} vs {}", fa.len(), ga.len())));
    }
    if fa.domain() != band_f.range || ga.domain() != band_g.range {
        return Err(Error::InvalidBox("band ranges do not match operand domains".into()));
    }
    if band_f.rise != band_g.rise {
        return Err(Error::InvalidBox("bands have different slopes".into()));
    }
    for (seq, band) in [(fa, band_f), (ga, band_g)] {
        for (k, &v) in seq.values().iter().enumerate() {
            let i = seq.offset() + k;
            if !band.contains(i, v) {
                return Err(Error::BandViolation { index: i, value: v });
            }
        }
    }

    let s = fa.len();
    let run = band_f.run();
    let rise = band_f.rise;
    let sf = shear(fa, rise, run);
    let sg = shear(ga, rise, run);
    let wf = sf.max - sf.min;
    let wg = sg.max - sg.min;
    let stride = wf + wg + 1;
    let window = wf.max(wg);

    let kernel = match kernel {
        SumsetKernel::Auto => {
            let packed = (s as u128) * stride as u128;
            let len = (2 * packed).next_power_of_two();
            let transform_cost = 6 * len * (len.trailing_zeros() as u128 + 1);
            if (s as u128) * (s as u128) <= transform_cost {
                SumsetKernel::Direct
            } else {
                SumsetKernel::Transform
            }
        }
        k => k,
    };

    let offset = fa.offset() + ga.offset();
    match kernel {
        SumsetKernel::Direct => {
            let seq = direct_min(fa, ga);
            Ok(SumsetOutput { seq, sumset_size: None, window, stride, kernel })
        }
        _ => {
            let (values, size) = transform_min(&sf, &sg, s, rise, run, stride)?;
            Ok(SumsetOutput {
                seq: IntSeq::new(offset, values),
                sumset_size: Some(size),
                window,
                stride,
                kernel: SumsetKernel::Transform,
            })
        }
    }
}

fn direct_min(fa: &IntSeq, ga: &IntSeq) -> IntSeq {
    let f = fa.values();
    let g = ga.values();
    let mut out = vec![i64::MAX; f.len() + g.len() - 1];
    for (x, &a) in f.iter().enumerate() {
        for (slot, &b) in out[x..].iter_mut().zip(g) {
            let v = a + b;
            if v < *slot {
                *slot = v;
            }
        }
    }
    IntSeq::new(fa.offset() + ga.offset(), out)
}

fn transform_min(
    sf: &Sheared,
    sg: &Sheared,
    s: usize,
    rise: i64,
    run: i64,
    stride: i64,
) -> Result<(Vec<i64>, usize)> {
    let packed_len = s
        .checked_mul(stride as usize)
        .filter(|&l| l <= 1 << 31)
        .ok_or_else(|| Error::InvalidBox(format!("packed domain too large (s = {s}, stride = {stride})")))?;
    let pack = |sh: &Sheared| {
        let mut ind = vec![0u64; packed_len];
        let mut frac = vec![0u64; packed_len];
        for x in 0..s {
            let key = x * stride as usize + (sh.residual[x] - sh.min) as usize;
            ind[key] = 1;
            frac[key] = sh.frac[x];
        }
        (ind, frac)
    };
    let (ind_f, frac_f) = pack(sf);
    let (ind_g, frac_g) = pack(sg);

    let len = ntt::conv_len(packed_len, packed_len);
    let tf_ind = ntt::forward(&ind_f, len);
    let tg_ind = ntt::forward(&ind_g, len);
    let tf_frac = ntt::forward(&frac_f, len);
    let tg_frac = ntt::forward(&frac_g, len);
    let mut count = ntt::pointwise(&tf_ind, &tg_ind);
    let mut frac_sum = ntt::pointwise_sum2(&tf_frac, &tg_ind, &tf_ind, &tg_frac);
    ntt::inverse(&mut count);
    ntt::inverse(&mut frac_sum);

    let base_residual = sf.min + sg.min;
    let mut out = vec![i64::MAX; 2 * s - 1];
    let mut size = 0usize;
    // Positions run k-major with ascending residual, so decoded values for a
    // fixed k arrive in non-decreasing order; `last` dedupes the overlap
    // between a carried residual r + 1 and an uncarried r.
    let mut last: Option<(usize, i64)> = None;
    let mut emit = |k: usize, v: i64, out: &mut [i64]| {
        if last.is_none_or(|(lk, lv)| lk != k || v > lv) {
            size += 1;
            last = Some((k, v));
        }
        if v < out[k] {
            out[k] = v;
        }
    };
    for pos in 0..2 * packed_len - 1 {
        let cnt = count[pos];
        if cnt == 0 {
            continue;
        }
        let k = pos / stride as usize;
        let residual = (pos % stride as usize) as i64 + base_residual;
        let t = rise as i128 * k as i128;
        let line = t.div_euclid(run as i128) as i64;
        let tau = t.rem_euclid(run as i128) as u64;
        // Each pair contributes frac_f + frac_g = tau + carry * run.
        let excess = frac_sum[pos]
            .checked_sub(cnt * tau)
            .ok_or_else(|| Error::Invariant("fractional sum below its floor".into()))?;
        if excess % run as u64 != 0 || excess / run as u64 > cnt {
            return Err(Error::Invariant("inconsistent carry count in packed sumset".into()));
        }
        let carries = excess / run as u64;
        if carries > 0 {
            emit(k, residual + line - 1, &mut out);
        }
        if cnt > carries {
            emit(k, residual + line, &mut out);
        }
    }
    if out.contains(&i64::MAX) {
        return Err(Error::Invariant("packed sumset missed a diagonal".into()));
    }
    Ok((out, size))
}

/// Positions `k` with `(p * q)[k] > 0` for two 0/1 vectors.
pub fn indicator_convolve(p: &[bool], q: &[bool]) -> Vec<usize> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let a: Vec<u64> = p.iter().map(|&b| b as u64).collect();
    let b: Vec<u64> = q.iter().map(|&b| b as u64).collect();
    ntt::convolve(&a, &b)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, _)| k)
        .collect()
}

/// Order-preserving view used when choosing bands: the rounded difference
/// `round(b - a)` of two rationals.
pub(crate) fn rounded_rise(a: Rational, b: Rational) -> i64 {
    let half = Rational::new(1, 2);
    let diff = [b, a.neg(), half];
    crate::rational::floor_sum(&diff) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(range: IndexRange, start: i64, rise: i64, hw: i64) -> LinearBand {
        LinearBand::new(range, Rational::from_int(start), rise, hw).unwrap()
    }

    #[test]
    fn four_pairwise_sums() {
        let f = IntSeq::new(0, vec![0, 3]);
        let g = IntSeq::new(0, vec![1, 1]);
        let bf = band(f.domain(), 0, 2, 2);
        let bg = band(g.domain(), 1, 2, 2);
        for kernel in [SumsetKernel::Transform, SumsetKernel::Direct] {
            let out = banded_sumset_min(&f, &g, &bf, &bg, kernel).unwrap();
            assert_eq!(out.seq.values(), &[1, 1, 4]);
        }
        let out = banded_sumset_min(&f, &g, &bf, &bg, SumsetKernel::Transform).unwrap();
        // {(0,1),(1,1),(1,4),(2,4)}
        assert_eq!(out.sumset_size, Some(4));
    }

    #[test]
    fn exactly_linear_operands() {
        let f = IntSeq::new(3, vec![5, 7, 9, 11]);
        let g = IntSeq::new(6, vec![-1, 1, 3, 5]);
        let bf = band(f.domain(), 5, 6, 0);
        let bg = band(g.domain(), -1, 6, 0);
        let out = banded_sumset_min(&f, &g, &bf, &bg, SumsetKernel::Transform).unwrap();
        assert_eq!(out.seq.offset(), 9);
        assert_eq!(out.seq.values(), &[4, 6, 8, 10, 12, 14, 16]);
        assert_eq!(out.window, 0);
    }

    #[test]
    fn fractional_slope_carries_are_exact() {
        // slope 1/3: floor(i/3) + floor(j/3) differs from floor((i+j)/3).
        let f = IntSeq::new(0, vec![0, 0, 1, 1]);
        let g = IntSeq::new(0, vec![0, 1, 1, 1]);
        let bf = band(f.domain(), 0, 1, 1);
        let bg = band(g.domain(), 0, 1, 1);
        let fast = banded_sumset_min(&f, &g, &bf, &bg, SumsetKernel::Transform).unwrap();
        let slow = banded_sumset_min(&f, &g, &bf, &bg, SumsetKernel::Direct).unwrap();
        assert_eq!(fast.seq, slow.seq);
    }

    #[test]
    fn band_violation_is_reported() {
        let f = IntSeq::new(0, vec![0, 10]);
        let g = IntSeq::new(0, vec![0, 0]);
        let bf = band(f.domain(), 0, 0, 2);
        let bg = band(g.domain(), 0, 0, 2);
        assert_eq!(
            banded_sumset_min(&f, &g, &bf, &bg, SumsetKernel::Auto).unwrap_err(),
            Error::BandViolation { index: 1, value: 10 }
        );
    }

    #[test]
    fn mismatched_boxes_are_rejected() {
        let f = IntSeq::new(0, vec![0, 1]);
        let g = IntSeq::new(0, vec![0]);
        let bf = band(f.domain(), 0, 1, 1);
        let bg = band(g.domain(), 0, 0, 1);
        assert!(matches!(
            banded_sumset_min(&f, &g, &bf, &bg, SumsetKernel::Auto),
            Err(Error::InvalidBox(_))
        ));
    }

    #[test]
    fn band_center_and_membership() {
        let b = LinearBand::new(IndexRange::new(2, 5), Rational::new(1, 2), 3, 1).unwrap();
        assert_eq!(b.center(2), Rational::new(1, 2));
        assert_eq!(b.center(5), Rational::new(7, 2));
        assert_eq!(b.end(), Rational::new(7, 2));
        assert!(b.contains(3, 2));
        assert!(!b.contains(3, 3));
        assert!(!b.contains(6, 4));
        assert!(LinearBand::new(IndexRange::new(1, 1), Rational::ZERO, 1, 0).is_err());
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(indicator_convolve(&[true, false, true], &[true, true, false]), vec![0, 1, 2, 3]);
        let mut unit = vec![false; 6];
        unit[4] = true;
        let q = [true, false, false, true, true];
        assert_eq!(indicator_convolve(&unit, &q), vec![4, 7, 8]);
    }

    #[test]
    fn rounded_rise_rounds_half_up() {
        assert_eq!(rounded_rise(Rational::ZERO, Rational::new(5, 2)), 3);
        assert_eq!(rounded_rise(Rational::new(1, 3), Rational::new(2, 1)), 2);
        assert_eq!(rounded_rise(Rational::ZERO, Rational::new(-5, 2)), -2);
    }
}
