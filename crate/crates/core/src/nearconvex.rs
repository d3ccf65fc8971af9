//! Min-plus convolution of near-convex sequences in `O~((n + m) * delta)`.
//!
//! Both operands are padded to a common power-of-two length and replaced by
//! their lower hulls. The convex convolution of the hulls and its minimal
//! witness path split the `N x N` grid into points that can matter (within
//! `2 * delta` of the hull optimum on their diagonal) and points that cannot.
//! A quadtree recursion over dyadic boxes then discards boxes entirely on
//! the wrong side of that band, evaluates boxes entirely inside it through
//! the banded sumset kernel, and splits everything else.

use std::collections::BTreeMap;

use crate::convex::{convex_minplus_values, ConvexConv, PathSide, WitnessPath};
use crate::error::{Error, Result};
use crate::hull::{lower_hull, HullApprox};
use crate::rational::{cmp_sums, floor_sum, Rational};
use crate::seq::{negate, pad_to_common_pow2, IndexRange, IntSeq, PartialSeq};
use crate::sumset::{banded_sumset_min, rounded_rise, LinearBand, SumsetKernel};

/// Hulls, their convex convolution and the shared `delta`, fixed for one
/// convolution and shared read-only by the recursion.
#[derive(Clone, Debug)]
pub struct RelevanceContext {
    bf: HullApprox,
    bg: HullApprox,
    fv: Vec<Rational>,
    gv: Vec<Rational>,
    bh: ConvexConv,
    delta: Rational,
    two_delta: Rational,
}

impl RelevanceContext {
    /// Both hulls must start at index 0.
    pub fn new(bf: HullApprox, bg: HullApprox) -> Self {
        assert!(bf.domain().lo == 0 && bg.domain().lo == 0, "hulls must start at index 0");
        let fv = bf.values();
        let gv = bg.values();
        let bh = convex_minplus_values(&fv, &gv, 0);
        let delta = bf.delta().max(bg.delta());
        let two_delta = delta.scale(2);
        RelevanceContext { bf, bg, fv, gv, bh, delta, two_delta }
    }

    pub fn hull_f(&self) -> &HullApprox {
        &self.bf
    }

    pub fn hull_g(&self) -> &HullApprox {
        &self.bg
    }

    pub fn convex(&self) -> &ConvexConv {
        &self.bh
    }

    pub fn path(&self) -> &WitnessPath {
        self.bh.path()
    }

    /// `max(delta_f, delta_g)`, each clamped at 1.
    pub fn delta(&self) -> Rational {
        self.delta
    }

    pub fn two_delta(&self) -> Rational {
        self.two_delta
    }

    /// Last index of the first / second operand.
    pub fn n(&self) -> usize {
        self.fv.len() - 1
    }

    pub fn m(&self) -> usize {
        self.gv.len() - 1
    }

    fn side(&self, i: usize, j: usize) -> PathSide {
        let w = self.bh.path().witness(i + j);
        match i.cmp(&w) {
            std::cmp::Ordering::Greater => PathSide::Above,
            std::cmp::Ordering::Equal => PathSide::On,
            std::cmp::Ordering::Less => PathSide::Below,
        }
    }

    fn is_relevant(&self, i: usize, j: usize) -> bool {
        let k = i + j;
        let w = self.bh.path().witness(k);
        let lhs = [self.fv[i], self.gv[j]];
        let rhs = [self.fv[w], self.gv[k - w], self.two_delta];
        cmp_sums(&lhs, &rhs) != std::cmp::Ordering::Greater
    }

    /// Lines of common slope around `f[I]` and `g[J]` for a box inside the
    /// relevant band. For such a box both operands stay within `2 * delta` of
    /// a line through the hull endpoints over `I`; the slope is rounded to
    /// `rise / (s - 1)` with an integer rise and the anchors are floored,
    /// which costs at most two extra units of half-width.
    pub fn bands_for(&self, bx: &GridBox) -> Result<(LinearBand, LinearBand)> {
        let (ia, ib) = (bx.rows.lo, bx.rows.hi);
        let jb = bx.cols.hi;
        let rise = if ib == ia { 0 } else { rounded_rise(self.fv[ia], self.fv[ib]) };
        let half_width = self.two_delta.ceil() as i64 + 2;
        let start_f = Rational::from_int(self.fv[ia].floor() as i64);
        let k = ia + jb;
        let w = self.bh.path().witness(k);
        let start_g = floor_sum(&[self.fv[w], self.gv[k - w], self.delta, self.fv[ib].neg()]);
        let start_g = Rational::from_int(start_g as i64);
        Ok((
            LinearBand::new(bx.rows, start_f, rise, half_width)?,
            LinearBand::new(bx.cols, start_g, rise, half_width)?,
        ))
    }
}

/// Whether `hull_f(i) + hull_g(j) <= hull_h(i + j) + 2 * delta`.
pub fn relevant(ctx: &RelevanceContext, i: usize, j: usize) -> bool {
    ctx.is_relevant(i, j)
}

/// A dyadic box `rows x cols` of the padded grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridBox {
    pub rows: IndexRange,
    pub cols: IndexRange,
}

impl GridBox {
    /// Side must be a power of two and both corners aligned to it.
    pub fn new(rows: IndexRange, cols: IndexRange) -> Result<Self> {
        let s = rows.len();
        if cols.len() != s {
            return Err(Error::InvalidBox(format!("sides differ: {} vs {}", s, cols.len())));
        }
        if !s.is_power_of_two() || !rows.lo.is_multiple_of(s) || !cols.lo.is_multiple_of(s) {
            return Err(Error::InvalidBox(format!(
                "box [{}..{}] x [{}..{}] is not dyadic",
                rows.lo, rows.hi, cols.lo, cols.hi
            )));
        }
        Ok(GridBox { rows, cols })
    }

    fn at(i: usize, j: usize, s: usize) -> Self {
        GridBox { rows: IndexRange::new(i, i + s - 1), cols: IndexRange::new(j, j + s - 1) }
    }

    pub fn side(&self) -> usize {
        self.rows.len()
    }

    /// Diagonals `[rows.lo + cols.lo .. rows.hi + cols.hi]` covered by the box.
    pub fn diagonals(&self) -> IndexRange {
        IndexRange::new(self.rows.lo + self.cols.lo, self.rows.hi + self.cols.hi)
    }

    /// Index of the anti-diagonal of same-sized boxes this box sits on.
    pub fn box_diagonal(&self) -> usize {
        let s = self.side();
        self.rows.lo / s + self.cols.lo / s
    }
}

/// The four outcomes of one recursion step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxCase {
    /// Every point lies above the relevant band.
    AboveBand = 0,
    /// Every point lies below the relevant band.
    BelowBand = 1,
    /// The box lies inside the band and is evaluated directly.
    Sumset = 2,
    /// The box straddles a band boundary and is split.
    Split = 3,
}

/// A box evaluated by the sumset kernel during a run, kept for offline
/// cross-checks.
#[derive(Clone, Debug)]
pub struct HarvestedBox {
    pub f: IntSeq,
    pub g: IntSeq,
    pub band_f: LinearBand,
    pub band_g: LinearBand,
    pub delta: Rational,
}

/// Counters collected by an instrumented run.
#[derive(Clone, Debug, Default)]
pub struct ConvolutionTrace {
    pub delta: Option<Rational>,
    pub padded_len: usize,
    pub case_counts: [usize; 4],
    /// Case counts per `(side, box_diagonal)`.
    pub per_diagonal: BTreeMap<(usize, usize), [u32; 4]>,
    /// Sum of decoded sumset sizes over transform-evaluated boxes.
    pub sumset_points: usize,
    /// Sum of `(|I| + |J| - 1) * (2 * window + 1)` over all sumset boxes.
    pub sumset_bound_work: usize,
    pub max_window: i64,
    pub harvested: Vec<HarvestedBox>,
}

/// Configurable entry point for the near-convex convolution.
#[derive(Clone, Debug, Default)]
pub struct Convolver {
    pub kernel: SumsetKernel,
    /// Record per-case counters.
    pub trace: bool,
    /// Keep up to this many sumset boxes in the trace.
    pub harvest_limit: usize,
}

struct RecState<'a> {
    ctx: &'a RelevanceContext,
    f: &'a IntSeq,
    g: &'a IntSeq,
    kernel: SumsetKernel,
    acc: Vec<i64>,
    acc_base: usize,
    trace: Option<ConvolutionTrace>,
    harvest_limit: usize,
}

impl RecState<'_> {
    fn record(&mut self, bx: &GridBox, case: BoxCase) {
        if let Some(t) = self.trace.as_mut() {
            t.case_counts[case as usize] += 1;
            t.per_diagonal.entry((bx.side(), bx.box_diagonal())).or_default()[case as usize] += 1;
        }
    }

    fn classify(&self, bx: &GridBox) -> Option<BoxCase> {
        let ctx = self.ctx;
        let (ia, ib, ja, jb) = (bx.rows.lo, bx.rows.hi, bx.cols.lo, bx.cols.hi);
        let corner_lr = ctx.is_relevant(ia, jb);
        if !corner_lr && ctx.side(ia, jb) == PathSide::Above {
            return Some(BoxCase::AboveBand);
        }
        let corner_ul = ctx.is_relevant(ib, ja);
        if !corner_ul && ctx.side(ib, ja) == PathSide::Below {
            return Some(BoxCase::BelowBand);
        }
        if corner_lr && corner_ul {
            return Some(BoxCase::Sumset);
        }
        None
    }

    fn run(&mut self, bx: GridBox) -> Result<()> {
        let case = self.classify(&bx);
        match case {
            Some(c @ (BoxCase::AboveBand | BoxCase::BelowBand)) => {
                self.record(&bx, c);
                Ok(())
            }
            Some(BoxCase::Sumset) => {
                self.record(&bx, BoxCase::Sumset);
                self.evaluate(&bx)
            }
            _ => {
                let s = bx.side();
                if s == 1 {
                    return Err(Error::Invariant(format!(
                        "unit box ({}, {}) matched no case",
                        bx.rows.lo, bx.cols.lo
                    )));
                }
                self.record(&bx, BoxCase::Split);
                let h = s / 2;
                for (di, dj) in [(0, 0), (0, h), (h, 0), (h, h)] {
                    self.run(GridBox::at(bx.rows.lo + di, bx.cols.lo + dj, h))?;
                }
                Ok(())
            }
        }
    }

    fn evaluate(&mut self, bx: &GridBox) -> Result<()> {
        let (band_f, band_g) = self.ctx.bands_for(bx)?;
        let fa = self.f.slice(bx.rows);
        let ga = self.g.slice(bx.cols);
        let out = banded_sumset_min(&fa, &ga, &band_f, &band_g, self.kernel)?;
        let base = out.seq.offset() - self.acc_base;
        for (slot, &v) in self.acc[base..].iter_mut().zip(out.seq.values()) {
            if v < *slot {
                *slot = v;
            }
        }
        if let Some(t) = self.trace.as_mut() {
            t.sumset_points += out.sumset_size.unwrap_or(0);
            t.sumset_bound_work += (2 * bx.side() - 1) * (2 * out.window as usize + 1);
            t.max_window = t.max_window.max(out.window);
            if t.harvested.len() < self.harvest_limit {
                t.harvested.push(HarvestedBox {
                    f: fa,
                    g: ga,
                    band_f,
                    band_g,
                    delta: self.ctx.delta,
                });
            }
        }
        Ok(())
    }
}

/// Contribution of `f[rows]` and `g[cols]` to the convolution, as a partial
/// sequence over the box's diagonals. Entries no evaluated sub-box reaches
/// are TOP; pointwise-min over a covering of the grid gives the convolution.
///
/// `f` and `g` are the padded operands the context was built from.
pub fn rec_minconv(
    ctx: &RelevanceContext,
    f: &IntSeq,
    g: &IntSeq,
    bx: GridBox,
    kernel: SumsetKernel,
) -> Result<PartialSeq> {
    if bx.rows.hi > ctx.n() || bx.cols.hi > ctx.m() {
        return Err(Error::InvalidBox("box exceeds the grid".into()));
    }
    let diag = bx.diagonals();
    let mut st = RecState {
        ctx,
        f,
        g,
        kernel,
        acc: vec![i64::MAX; diag.len()],
        acc_base: diag.lo,
        trace: None,
        harvest_limit: 0,
    };
    st.run(bx)?;
    let entries = st.acc.into_iter().map(|v| (v != i64::MAX).then_some(v)).collect();
    Ok(PartialSeq::from_entries(diag.lo, entries))
}

impl Convolver {
    pub fn new(kernel: SumsetKernel) -> Self {
        Convolver { kernel, ..Convolver::default() }
    }

    pub fn traced(mut self, harvest_limit: usize) -> Self {
        self.trace = true;
        self.harvest_limit = harvest_limit;
        self
    }

    /// Exact `(min, +)` convolution of arbitrary integer sequences.
    pub fn minplus(&self, f: &IntSeq, g: &IntSeq) -> Result<IntSeq> {
        self.minplus_traced(f, g).map(|(h, _)| h)
    }

    /// Like [`Convolver::minplus`], also returning the trace when enabled.
    pub fn minplus_traced(&self, f: &IntSeq, g: &IntSeq) -> Result<(IntSeq, Option<ConvolutionTrace>)> {
        f.check_bounds()?;
        g.check_bounds()?;
        let (pf, pg, info) = pad_to_common_pow2(&f.rebased(), &g.rebased())?;
        let ctx = RelevanceContext::new(lower_hull(&pf), lower_hull(&pg));
        let len = info.len;
        let mut st = RecState {
            ctx: &ctx,
            f: &pf,
            g: &pg,
            kernel: self.kernel,
            acc: vec![i64::MAX; 2 * len - 1],
            acc_base: 0,
            trace: self.trace.then(|| ConvolutionTrace {
                delta: Some(ctx.delta),
                padded_len: len,
                ..ConvolutionTrace::default()
            }),
            harvest_limit: self.harvest_limit,
        };
        st.run(GridBox::at(0, 0, len))?;
        let mut values = st.acc;
        values.truncate(info.n + info.m + 1);
        if let Some(k) = values.iter().position(|&v| v == i64::MAX) {
            return Err(Error::Invariant(format!("diagonal {k} received no candidate")));
        }
        Ok((IntSeq::new(f.offset() + g.offset(), values), st.trace))
    }

    /// Exact `(max, +)` convolution through negation.
    pub fn maxplus(&self, f: &IntSeq, g: &IntSeq) -> Result<IntSeq> {
        Ok(negate(&self.minplus(&negate(f), &negate(g))?))
    }
}

/// Exact `(min, +)` convolution; fast when both operands are near-convex.
pub fn minplus_nearconvex(f: &IntSeq, g: &IntSeq) -> Result<IntSeq> {
    Convolver::default().minplus(f, g)
}

/// Exact `(max, +)` convolution; fast when both operands are near-concave.
pub fn maxplus_nearconcave(f: &IntSeq, g: &IntSeq) -> Result<IntSeq> {
    Convolver::default().maxplus(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{naive_maxplus, naive_minplus};

    fn seq(v: &[i64]) -> IntSeq {
        IntSeq::from_values(v.to_vec())
    }

    fn context(f: &[i64], g: &[i64]) -> RelevanceContext {
        RelevanceContext::new(lower_hull(&seq(f)), lower_hull(&seq(g)))
    }

    #[test]
    fn small_examples() {
        assert_eq!(minplus_nearconvex(&seq(&[0, 1]), &seq(&[0, 2])).unwrap().values(), &[0, 1, 3]);
        assert_eq!(maxplus_nearconcave(&seq(&[0, 1]), &seq(&[0, 2])).unwrap().values(), &[0, 2, 3]);
    }

    #[test]
    fn offsets_add() {
        let f = IntSeq::new(3, vec![4, 1, 0, 7]);
        let g = IntSeq::new(2, vec![2, -1, 5]);
        let h = minplus_nearconvex(&f, &g).unwrap();
        assert_eq!(h, naive_minplus(&f, &g));
        assert_eq!(h.offset(), 5);
    }

    #[test]
    fn relevance_examples() {
        let ctx = context(&[0, 0, 100], &[0, 0, 100]);
        assert_eq!(ctx.delta(), Rational::ONE);
        // hull_h(4) = 200, so (2, 2) sits exactly on the optimum.
        assert!(relevant(&ctx, 2, 2));
        // hull_h(2) = 0 with witness (0, 2); (2, 0) costs 100.
        assert!(!relevant(&ctx, 2, 0));
        let w = ctx.path().witnesses().to_vec();
        for (k, &i) in w.iter().enumerate() {
            assert!(relevant(&ctx, i, k - i));
        }
    }

    #[test]
    fn dummy_boxes_return_top() {
        // Steep f, flat g: high rows are far from optimal on low diagonals.
        let f = seq(&[0, 1000, 2000, 3000]);
        let g = seq(&[0, 0, 0, 0]);
        let ctx = RelevanceContext::new(lower_hull(&f), lower_hull(&g));
        let bx = GridBox::new(IndexRange::new(2, 3), IndexRange::new(0, 1)).unwrap();
        let out = rec_minconv(&ctx, &f, &g, bx, SumsetKernel::Auto).unwrap();
        assert!(out.is_top());
        let full = GridBox::new(IndexRange::new(0, 3), IndexRange::new(0, 3)).unwrap();
        let all = rec_minconv(&ctx, &f, &g, full, SumsetKernel::Auto).unwrap();
        assert_eq!(all.to_int_seq().unwrap(), naive_minplus(&f, &g));
    }

    #[test]
    fn non_dyadic_boxes_are_rejected() {
        assert!(GridBox::new(IndexRange::new(1, 2), IndexRange::new(0, 1)).is_err());
        assert!(GridBox::new(IndexRange::new(0, 2), IndexRange::new(0, 2)).is_err());
        assert!(GridBox::new(IndexRange::new(0, 1), IndexRange::new(0, 3)).is_err());
    }

    #[test]
    fn arbitrary_small_inputs_match_naive() {
        let f = seq(&[5, -3, 8, 0, 0, 12, -7]);
        let g = seq(&[1, 9, -4, 2, 2]);
        for kernel in [SumsetKernel::Direct, SumsetKernel::Transform, SumsetKernel::Auto] {
            let c = Convolver::new(kernel);
            assert_eq!(c.minplus(&f, &g).unwrap(), naive_minplus(&f, &g));
            assert_eq!(c.maxplus(&f, &g).unwrap(), naive_maxplus(&f, &g));
        }
    }

    #[test]
    fn out_of_bound_values_are_rejected() {
        let f = seq(&[0, 1 << 41]);
        assert!(matches!(minplus_nearconvex(&f, &f), Err(Error::ValueBound { .. })));
    }
}
