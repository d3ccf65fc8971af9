//! Offset-indexed integer sequences, partial sequences and the naive
//! convolution oracles.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest absolute value accepted from callers.
pub const VALUE_BOUND: i64 = 1 << 40;

/// A finite integer sequence whose first entry sits at global index `offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntSeq {
    offset: usize,
    values: Vec<i64>,
}

impl IntSeq {
    /// Panics on an empty `values`.
    pub fn new(offset: usize, values: Vec<i64>) -> Self {
        assert!(!values.is_empty(), "IntSeq must have at least one entry");
        IntSeq { offset, values }
    }

    pub fn from_values(values: Vec<i64>) -> Self {
        IntSeq::new(0, values)
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Global index of the last entry.
    pub fn last_index(&self) -> usize {
        self.offset + self.values.len() - 1
    }

    pub fn domain(&self) -> IndexRange {
        IndexRange::new(self.offset, self.last_index())
    }

    /// Entry at global index `i`, if present.
    pub fn get(&self, i: usize) -> Option<i64> {
        i.checked_sub(self.offset).and_then(|k| self.values.get(k).copied())
    }

    /// Entry at global index `i`. Panics when out of range.
    pub fn at(&self, i: usize) -> i64 {
        self.values[i - self.offset]
    }

    pub fn min_value(&self) -> i64 {
        *self.values.iter().min().unwrap()
    }

    pub fn max_value(&self) -> i64 {
        *self.values.iter().max().unwrap()
    }

    /// Same entries re-anchored at offset 0.
    pub fn rebased(&self) -> IntSeq {
        IntSeq { offset: 0, values: self.values.clone() }
    }

    pub fn with_offset(mut self, offset: usize) -> IntSeq {
        self.offset = offset;
        self
    }

    /// Entries over `range`, which must lie inside the domain.
    pub fn slice(&self, range: IndexRange) -> IntSeq {
        assert!(range.lo >= self.offset && range.hi <= self.last_index(), "slice out of domain");
        IntSeq {
            offset: range.lo,
            values: self.values[range.lo - self.offset..=range.hi - self.offset].to_vec(),
        }
    }

    /// Checks every entry against [`VALUE_BOUND`].
    pub fn check_bounds(&self) -> Result<()> {
        for (k, &v) in self.values.iter().enumerate() {
            if v.unsigned_abs() > VALUE_BOUND as u64 {
                return Err(Error::ValueBound { index: self.offset + k, value: v });
            }
        }
        Ok(())
    }
}

/// A sequence whose entries may be TOP: `+inf` under min-combination, `-inf`
/// under max-combination. An all-TOP sequence is stored without materializing
/// its entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSeq {
    offset: usize,
    len: usize,
    entries: Option<Vec<Option<i64>>>,
}

impl PartialSeq {
    pub fn top(offset: usize, len: usize) -> Self {
        PartialSeq { offset, len, entries: None }
    }

    pub fn from_entries(offset: usize, entries: Vec<Option<i64>>) -> Self {
        let len = entries.len();
        if entries.iter().all(Option::is_none) {
            PartialSeq::top(offset, len)
        } else {
            PartialSeq { offset, len, entries: Some(entries) }
        }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_top(&self) -> bool {
        self.entries.is_none()
    }

    /// Entry at global index `i`; `None` is TOP (also outside the range).
    pub fn get(&self, i: usize) -> Option<i64> {
        let k = i.checked_sub(self.offset)?;
        if k >= self.len {
            return None;
        }
        self.entries.as_ref().and_then(|e| e[k])
    }

    pub fn entries(&self) -> Vec<Option<i64>> {
        match &self.entries {
            Some(e) => e.clone(),
            None => vec![None; self.len],
        }
    }

    /// Pointwise minimum over the union of both ranges, TOP as identity.
    pub fn combine_min(&self, other: &PartialSeq) -> PartialSeq {
        self.combine(other, i64::min)
    }

    /// Pointwise maximum over the union of both ranges, TOP as identity.
    pub fn combine_max(&self, other: &PartialSeq) -> PartialSeq {
        self.combine(other, i64::max)
    }

    fn combine(&self, other: &PartialSeq, pick: fn(i64, i64) -> i64) -> PartialSeq {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.len).max(other.offset + other.len);
        if self.is_top() && other.is_top() {
            return PartialSeq::top(lo, hi - lo);
        }
        let entries = (lo..hi)
            .map(|i| match (self.get(i), other.get(i)) {
                (Some(a), Some(b)) => Some(pick(a, b)),
                (a, b) => a.or(b),
            })
            .collect();
        PartialSeq::from_entries(lo, entries)
    }

    /// Converts to an `IntSeq` when no entry is TOP.
    pub fn to_int_seq(&self) -> Option<IntSeq> {
        if self.len == 0 {
            return None;
        }
        let values = self.entries.as_ref()?.iter().copied().collect::<Option<Vec<_>>>()?;
        Some(IntSeq::new(self.offset, values))
    }
}

impl From<&IntSeq> for PartialSeq {
    fn from(s: &IntSeq) -> Self {
        PartialSeq::from_entries(s.offset, s.values.iter().map(|&v| Some(v)).collect())
    }
}

/// Closed integer interval `[lo..hi]` of non-negative indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
}

impl IndexRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "IndexRange requires lo <= hi ({lo} > {hi})");
        IndexRange { lo, hi }
    }

    /// `[max(0, floor(a)) .. ceil(b)]`; `None` when the result is empty.
    pub fn from_bounds(a: Rational, b: Rational) -> Option<Self> {
        let lo = a.floor().max(0);
        let hi = b.ceil();
        if hi < lo {
            return None;
        }
        Some(IndexRange::new(lo as usize, hi as usize))
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn intersect(&self, other: &IndexRange) -> Option<IndexRange> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| IndexRange::new(lo, hi))
    }
}

/// Pointwise negation, keeping the offset.
pub fn negate(s: &IntSeq) -> IntSeq {
    IntSeq { offset: s.offset, values: s.values.iter().map(|v| -v).collect() }
}

/// Brute-force min-plus convolution in `O(|f| |g|)`.
pub fn naive_minplus(f: &IntSeq, g: &IntSeq) -> IntSeq {
    naive_conv(f, g, i64::min)
}

/// Brute-force max-plus convolution in `O(|f| |g|)`.
pub fn naive_maxplus(f: &IntSeq, g: &IntSeq) -> IntSeq {
    naive_conv(f, g, i64::max)
}

fn naive_conv(f: &IntSeq, g: &IntSeq, pick: fn(i64, i64) -> i64) -> IntSeq {
    let mut out: Vec<Option<i64>> = vec![None; f.len() + g.len() - 1];
    for (i, &a) in f.values.iter().enumerate() {
        for (j, &b) in g.values.iter().enumerate() {
            let slot = &mut out[i + j];
            let v = a + b;
            *slot = Some(slot.map_or(v, |cur| pick(cur, v)));
        }
    }
    IntSeq::new(f.offset + g.offset, out.into_iter().map(Option::unwrap).collect())
}

/// What [`pad_to_common_pow2`] appended, so results can be cut back.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadInfo {
    /// Last index of the original `f`.
    pub n: usize,
    /// Last index of the original `g`.
    pub m: usize,
    /// Padded length, a power of two strictly greater than `max(n, m)`.
    pub len: usize,
    pub pad_weight: i64,
}

impl PadInfo {
    /// Index range of the unpadded convolution, `[0..n+m]`.
    pub fn result_range(&self) -> IndexRange {
        IndexRange::new(0, self.n + self.m)
    }
}

/// Pads two offset-0 sequences to a common power-of-two length.
///
/// Appended entries are `min(f) + 2j * W` (likewise for `g`) with
/// `W = (max f - min f) + (max g - min g) + 1`. Measured from each sequence's
/// minimum the padding is convex and never cheaper than any original pair, so
/// the convolution on `[0..n+m]` and both hull gaps are unchanged.
pub fn pad_to_common_pow2(f: &IntSeq, g: &IntSeq) -> Result<(IntSeq, IntSeq, PadInfo)> {
    if f.offset != 0 || g.offset != 0 {
        return Err(Error::InvalidParameter("padding expects offset-0 sequences".into()));
    }
    let n = f.len() - 1;
    let m = g.len() - 1;
    let len = (n.max(m) + 1).next_power_of_two();
    let spread = |s: &IntSeq| -> Result<i64> {
        s.max_value().checked_sub(s.min_value()).ok_or(Error::Overflow("padding"))
    };
    let pad_weight = spread(f)?
        .checked_add(spread(g)?)
        .and_then(|w| w.checked_add(1))
        .ok_or(Error::Overflow("padding"))?;
    let extend = |s: &IntSeq| -> Result<IntSeq> {
        let base = s.min_value();
        let mut values = s.values.clone();
        for j in 1..=(len - s.len()) {
            let v = (2 * j as i64)
                .checked_mul(pad_weight)
                .and_then(|p| p.checked_add(base))
                .ok_or(Error::Overflow("padding"))?;
            values.push(v);
        }
        Ok(IntSeq::new(0, values))
    };
    Ok((extend(f)?, extend(g)?, PadInfo { n, m, len, pad_weight }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negate_examples() {
        let s = IntSeq::new(0, vec![0, 3, -2]);
        assert_eq!(negate(&s), IntSeq::new(0, vec![0, -3, 2]));
        assert_eq!(negate(&negate(&s)), s);
        assert_eq!(negate(&IntSeq::new(5, vec![7])), IntSeq::new(5, vec![-7]));
    }

    #[test]
    fn naive_examples() {
        let f = IntSeq::from_values(vec![0, 1]);
        let g = IntSeq::from_values(vec![0, 2]);
        assert_eq!(naive_minplus(&f, &g).values(), &[0, 1, 3]);
        assert_eq!(naive_maxplus(&f, &g).values(), &[0, 2, 3]);
        let single = IntSeq::from_values(vec![5]);
        assert_eq!(naive_maxplus(&single, &IntSeq::from_values(vec![1, 2])).values(), &[6, 7]);
    }

    #[test]
    fn singleton_shifts() {
        let c = IntSeq::new(3, vec![10]);
        let g = IntSeq::new(1, vec![4, -1, 7]);
        let h = naive_minplus(&c, &g);
        assert_eq!(h.offset(), 4);
        assert_eq!(h.values(), &[14, 9, 17]);
    }

    #[test]
    fn pad_lengths() {
        let f = IntSeq::from_values(vec![1, 2, 3]);
        let g = IntSeq::from_values(vec![0, 5]);
        let (pf, pg, info) = pad_to_common_pow2(&f, &g).unwrap();
        assert_eq!(info.len, 4);
        assert_eq!(pf.len(), 4);
        assert_eq!(pg.len(), 4);
        assert_eq!(info.pad_weight, 2 + 5 + 1);
        assert_eq!(pf.values(), &[1, 2, 3, 1 + 16]);
        assert_eq!(pg.values(), &[0, 5, 16, 32]);
        // n = 3 needs N = 4 > 3 only when the length is 4 already.
        let (pf, _, info) = pad_to_common_pow2(&IntSeq::from_values(vec![0; 4]), &g).unwrap();
        assert_eq!(info.len, 4);
        assert_eq!(pf.len(), 4);
    }

    #[test]
    fn pad_rejects_offsets() {
        let f = IntSeq::new(1, vec![1]);
        assert!(pad_to_common_pow2(&f, &f).is_err());
    }

    #[test]
    fn index_range_rounding() {
        let r = IndexRange::from_bounds(Rational::new(-5, 2), Rational::new(7, 2)).unwrap();
        assert_eq!(r, IndexRange::new(0, 4));
        let r = IndexRange::from_bounds(Rational::new(5, 2), Rational::new(6, 1)).unwrap();
        assert_eq!(r, IndexRange::new(2, 6));
    }

    #[test]
    fn partial_min_treats_top_as_identity() {
        let a = PartialSeq::from_entries(0, vec![Some(3), None, Some(1)]);
        let b = PartialSeq::from_entries(1, vec![Some(2), Some(5), Some(9)]);
        let c = a.combine_min(&b);
        assert_eq!(c.entries(), vec![Some(3), Some(2), Some(1), Some(9)]);
        let top = PartialSeq::top(0, 3);
        assert_eq!(a.combine_min(&top), a);
        assert!(top.combine_min(&PartialSeq::top(2, 4)).is_top());
        assert_eq!(a.combine_max(&b).get(2), Some(5));
    }

    #[test]
    fn bounds_are_checked() {
        let s = IntSeq::new(2, vec![0, VALUE_BOUND + 1]);
        assert_eq!(s.check_bounds(), Err(Error::ValueBound { index: 3, value: VALUE_BOUND + 1 }));
        assert!(IntSeq::from_values(vec![-VALUE_BOUND, VALUE_BOUND]).check_bounds().is_ok());
    }
}
