//! Randomized pseudopolynomial 0-1 knapsack.
//!
//! Items are split into `q` random groups. Each group's profit array is
//! computed by plain dynamic programming over a narrow window of weights
//! around its expected share of the capacity, and sibling groups are merged
//! level by level with the near-concave `(max, +)` convolution; every merged
//! array is again cut down to a window around its expected share. The
//! symmetric variant runs the same tree over profits, combining
//! minimum-weight arrays with the near-convex `(min, +)` convolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::{lower_hull, upper_hull_gap};
use crate::nearconvex::Convolver;
use crate::rational::{ceil_sqrt_ratio, Rational};
use crate::seq::{IndexRange, IntSeq, VALUE_BOUND};

/// Largest accepted capacity (and profit target in the symmetric variant).
pub const MAX_CAPACITY: u64 = 1 << 32;
/// Upper limit on stored decision bits per DP table.
const MAX_DECISION_BITS: u128 = 1 << 33;
/// Marker for minimum-weight entries no subset reaches.
pub const NO_SUBSET: i64 = i64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Item {
    pub profit: u64,
    pub weight: u64,
}

impl Item {
    pub fn new(profit: u64, weight: u64) -> Self {
        Item { profit, weight }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackInstance {
    items: Vec<Item>,
    capacity: u64,
}

impl KnapsackInstance {
    /// Profits and weights must be positive.
    pub fn new(items: Vec<Item>, capacity: u64) -> Result<Self> {
        if let Some(index) = items.iter().position(|it| it.profit == 0 || it.weight == 0) {
            return Err(Error::InvalidItem { index });
        }
        Ok(KnapsackInstance { items, capacity })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn wmax(&self) -> u64 {
        self.items.iter().map(|it| it.weight).max().unwrap_or(0)
    }

    pub fn pmax(&self) -> u64 {
        self.items.iter().map(|it| it.profit).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u128 {
        self.items.iter().map(|it| it.weight as u128).sum()
    }

    pub fn total_profit(&self) -> u128 {
        self.items.iter().map(|it| it.profit as u128).sum()
    }
}

/// A chosen item set with its totals; indices are 0-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackSolution {
    pub value: u64,
    pub chosen: Vec<usize>,
    pub weight: u64,
}

impl KnapsackSolution {
    pub fn empty() -> Self {
        KnapsackSolution { value: 0, chosen: Vec::new(), weight: 0 }
    }

    /// Sums profits and weights of `chosen` in `inst`.
    pub fn from_items(inst: &KnapsackInstance, mut chosen: Vec<usize>) -> Self {
        chosen.sort_unstable();
        let value = chosen.iter().map(|&i| inst.items[i].profit).sum();
        let weight = chosen.iter().map(|&i| inst.items[i].weight).sum();
        KnapsackSolution { value, chosen, weight }
    }

    /// Distinct valid indices, matching totals and weight within capacity.
    pub fn is_feasible_for(&self, inst: &KnapsackInstance) -> bool {
        let distinct = self.chosen.windows(2).all(|w| w[0] < w[1]);
        if !distinct || self.chosen.iter().any(|&i| i >= inst.n()) {
            return false;
        }
        let p: u128 = self.chosen.iter().map(|&i| inst.items[i].profit as u128).sum();
        let w: u128 = self.chosen.iter().map(|&i| inst.items[i].weight as u128).sum();
        p == self.value as u128 && w == self.weight as u128 && w <= inst.capacity as u128
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preprocessed {
    /// Every item that fits can be taken at once.
    Trivial(KnapsackSolution),
    /// Items heavier than the capacity removed; `index_map[k]` is the
    /// original index of item `k`. Total weight exceeds the capacity.
    Normalized { instance: KnapsackInstance, index_map: Vec<usize> },
}

pub fn preprocess(raw: &KnapsackInstance) -> Result<Preprocessed> {
    if raw.n() == 0 {
        return Err(Error::EmptyInstance);
    }
    let index_map: Vec<usize> = (0..raw.n()).filter(|&i| raw.items[i].weight <= raw.capacity).collect();
    let total: u128 = index_map.iter().map(|&i| raw.items[i].weight as u128).sum();
    if total <= raw.capacity as u128 {
        return Ok(Preprocessed::Trivial(KnapsackSolution::from_items(raw, index_map)));
    }
    let items = index_map.iter().map(|&i| raw.items[i]).collect();
    Ok(Preprocessed::Normalized {
        instance: KnapsackInstance { items, capacity: raw.capacity },
        index_map,
    })
}

fn check_size(inst: &KnapsackInstance) -> Result<()> {
    if inst.capacity > MAX_CAPACITY {
        return Err(Error::TooLarge(format!("capacity {} exceeds {}", inst.capacity, MAX_CAPACITY)));
    }
    if inst.total_profit() > (VALUE_BOUND / 4) as u128 || inst.total_weight() > (VALUE_BOUND / 4) as u128 {
        return Err(Error::TooLarge("total profit or weight exceeds 2^38".into()));
    }
    Ok(())
}

/// Which array a [`DpTable`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpKind {
    /// `P[i]`: largest profit of a subset of weight at most `i`.
    MaxProfit,
    /// `W[j]`: smallest weight of a subset of profit at least `j`, or
    /// [`NO_SUBSET`].
    MinWeight,
}

/// A DP array over `[0..jmax]` plus one decision bit per (item, entry).
#[derive(Clone, Debug)]
pub struct DpTable {
    kind: DpKind,
    values: Vec<i64>,
    decisions: Vec<u64>,
    words: usize,
    items: Vec<Item>,
}

impl DpTable {
    fn with_capacity(kind: DpKind, items: &[Item], jmax: usize, init: Vec<i64>) -> Result<Self> {
        let bits = items.len() as u128 * (jmax as u128 + 1);
        if bits > MAX_DECISION_BITS {
            return Err(Error::TooLarge(format!("{} items x {} entries", items.len(), jmax + 1)));
        }
        let words = (jmax + 1).div_ceil(64);
        Ok(DpTable { kind, values: init, decisions: vec![0; words * items.len()], words, items: items.to_vec() })
    }

    #[inline]
    fn set(&mut self, item: usize, j: usize) {
        self.decisions[item * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    fn taken(&self, item: usize, j: usize) -> bool {
        self.decisions[item * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn kind(&self) -> DpKind {
        self.kind
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn seq(&self) -> IntSeq {
        IntSeq::from_values(self.values.clone())
    }

    /// Item positions (into the DP's item list, ascending) of a subset
    /// realizing entry `j`. `O(n + jmax)`.
    pub fn reconstruct(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut j = j;
        for k in (0..self.items.len()).rev() {
            if self.taken(k, j) {
                out.push(k);
                j = match self.kind {
                    DpKind::MaxProfit => j - self.items[k].weight as usize,
                    DpKind::MinWeight => j.saturating_sub(self.items[k].profit as usize),
                };
            }
        }
        out.reverse();
        out
    }
}

/// Profit array `P[0..jmax]` of `items`, `O(n * jmax)`.
pub fn bellman_dp(items: &[Item], jmax: usize) -> Result<DpTable> {
    let mut t = DpTable::with_capacity(DpKind::MaxProfit, items, jmax, vec![0; jmax + 1])?;
    for (k, it) in items.iter().enumerate() {
        let (p, w) = (it.profit as i64, it.weight as usize);
        for i in (w..=jmax).rev() {
            let cand = t.values[i - w] + p;
            if cand > t.values[i] {
                t.values[i] = cand;
                t.set(k, i);
            }
        }
    }
    Ok(t)
}

/// Minimum-weight array `W[0..jmax]` of `items`, `O(n * jmax)`.
pub fn min_weight_dp(items: &[Item], jmax: usize) -> Result<DpTable> {
    let mut init = vec![NO_SUBSET; jmax + 1];
    init[0] = 0;
    let mut t = DpTable::with_capacity(DpKind::MinWeight, items, jmax, init)?;
    for (k, it) in items.iter().enumerate() {
        let (p, w) = (it.profit as usize, it.weight as i64);
        for j in (1..=jmax).rev() {
            let src = t.values[j.saturating_sub(p)];
            if src != NO_SUBSET && src + w < t.values[j] {
                t.values[j] = src + w;
                t.set(k, j);
            }
        }
    }
    Ok(t)
}

/// Group count, window parameters and the per-level windows `J^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleParams {
    pub q: usize,
    pub delta: Rational,
    pub eta: u64,
    pub levels: Vec<IndexRange>,
}

impl ScheduleParams {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Fewer than two groups: plain DP is as fast.
    UseFallback,
    Params(ScheduleParams),
}

/// `max(11, ceil(11 * log2 n))`.
pub fn eta_for(n: usize) -> u64 {
    let raw = (11.0 * (n.max(1) as f64).log2()).ceil() as u64;
    raw.max(11)
}

/// Parameters for the profit-array tree.
pub fn schedule(inst: &KnapsackInstance) -> Schedule {
    schedule_axes(inst.n(), inst.wmax(), inst.pmax(), inst.capacity)
}

/// Parameters for the weight-array tree with profit target `v_tilde`.
pub fn schedule_symmetric(inst: &KnapsackInstance, v_tilde: u64) -> Schedule {
    schedule_axes(inst.n(), inst.pmax(), inst.wmax(), v_tilde)
}

/// `step` is the largest item extent along the indexed axis, `other` the
/// largest along the value axis and `target` the index of the answer.
fn schedule_axes(n: usize, step: u64, other: u64, target: u64) -> Schedule {
    if n == 0 || step == 0 || target == 0 {
        return Schedule::UseFallback;
    }
    let (n2, step, other, target) = ((n as u128).pow(2), step as u128, other as u128, target as u128);
    let fits = |q: u128| q * step <= target && q.pow(3) * other * other * step <= n2 * target;
    let mut q: u128 = 1;
    while q < (1 << 20) && fits(2 * q) {
        q *= 2;
    }
    if q < 2 {
        return Schedule::UseFallback;
    }
    let eta = eta_for(n);
    let depth = q.trailing_zeros();
    let levels = (0..=depth)
        .map(|l| {
            let scaled = target << l;
            let (lo_c, hi_c) = (scaled / q, scaled.div_ceil(q));
            let hw = ceil_sqrt_ratio(step * scaled, q) * eta as u128;
            // Entries above the capacity never feed the answer.
            let hi = (hi_c + hw).min(target);
            IndexRange::new(lo_c.saturating_sub(hw) as usize, hi as usize)
        })
        .collect();
    Schedule::Params(ScheduleParams {
        q: q as usize,
        delta: Rational::new((step * target) as i128, q as i128).reduced(),
        eta,
        levels,
    })
}

/// `floor` of the fractional-greedy optimum: `OPT <= result <= OPT + pmax`.
pub fn greedy_upper_bound(inst: &KnapsackInstance) -> u64 {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    // Decreasing profit/weight; ties by index.
    order.sort_by(|&a, &b| {
        let (ia, ib) = (inst.items[a], inst.items[b]);
        let lhs = ib.profit as u128 * ia.weight as u128;
        let rhs = ia.profit as u128 * ib.weight as u128;
        lhs.cmp(&rhs).then(a.cmp(&b))
    });
    let mut room = inst.capacity as u128;
    let mut value: u128 = 0;
    for i in order {
        let it = inst.items[i];
        if it.weight as u128 <= room {
            room -= it.weight as u128;
            value += it.profit as u128;
        } else {
            value += it.profit as u128 * room / it.weight as u128;
            break;
        }
    }
    value as u64
}

/// One array of the combination tree: group `group` at level `level`,
/// restricted to `J^level`.
#[derive(Clone, Debug)]
pub struct LevelSlice {
    pub level: usize,
    pub group: usize,
    pub seq: IntSeq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Bellman,
    Fast,
    Symmetric,
    Auto,
}

impl Algorithm {
    /// Resolves `Auto` by comparing `n * wmax * pmax^(2/3)` with
    /// `n * pmax * wmax^(2/3)`, i.e. `wmax` with `pmax`; ties go to `Fast`.
    pub fn resolve(self, inst: &KnapsackInstance) -> Algorithm {
        match self {
            Algorithm::Auto if inst.wmax() <= inst.pmax() => Algorithm::Fast,
            Algorithm::Auto => Algorithm::Symmetric,
            other => other,
        }
    }
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bellman => "bellman",
            Algorithm::Fast => "fast",
            Algorithm::Symmetric => "symmetric",
            Algorithm::Auto => "auto",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bellman" => Ok(Algorithm::Bellman),
            "fast" => Ok(Algorithm::Fast),
            "symmetric" => Ok(Algorithm::Symmetric),
            "auto" => Ok(Algorithm::Auto),
            other => Err(Error::InvalidParameter(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Evaluate groups on a dedicated pool of this many threads. Output does
    /// not depend on the setting.
    pub threads: Option<usize>,
    /// Measure the hull gap of every slice.
    pub instrument: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolvePath {
    Trivial,
    Fallback,
    Partitioned { q: usize },
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: KnapsackSolution,
    pub path: SolvePath,
    /// Profit estimate used by the symmetric variant.
    pub v_tilde: Option<u64>,
    /// Largest hull gap over all slices, when instrumented.
    pub max_slice_gap: Option<Rational>,
    /// `pmax` for profit slices, `wmax` for weight slices.
    pub slice_gap_bound: u64,
    pub slices_checked: usize,
    /// All slices of the tree, level 0 first.
    pub slices: Vec<LevelSlice>,
}

impl SolveReport {
    fn plain(solution: KnapsackSolution, path: SolvePath) -> Self {
        SolveReport {
            solution,
            path,
            v_tilde: None,
            max_slice_gap: None,
            slice_gap_bound: 0,
            slices_checked: 0,
            slices: Vec::new(),
        }
    }
}

/// Solves with the chosen algorithm.
pub fn solve(inst: &KnapsackInstance, algo: Algorithm, seed: u64, opts: &SolveOptions) -> Result<SolveReport> {
    match algo.resolve(inst) {
        Algorithm::Bellman => solve_bellman(inst),
        Algorithm::Fast => solve_fast_with(inst, seed, opts),
        Algorithm::Symmetric => solve_symmetric_with(inst, seed, opts),
        Algorithm::Auto => unreachable!(),
    }
}

/// Plain `O(n * W)` dynamic program.
pub fn solve_bellman(inst: &KnapsackInstance) -> Result<SolveReport> {
    let (norm, map) = match preprocess(inst)? {
        Preprocessed::Trivial(sol) => return Ok(SolveReport::plain(sol, SolvePath::Trivial)),
        Preprocessed::Normalized { instance, index_map } => (instance, index_map),
    };
    check_size(&norm)?;
    let sol = bellman_fallback(inst, &norm, &map)?;
    Ok(SolveReport::plain(sol, SolvePath::Fallback))
}

fn bellman_fallback(raw: &KnapsackInstance, norm: &KnapsackInstance, map: &[usize]) -> Result<KnapsackSolution> {
    let w = norm.capacity as usize;
    let dp = bellman_dp(&norm.items, w)?;
    let chosen = dp.reconstruct(w).into_iter().map(|k| map[k]).collect();
    let sol = KnapsackSolution::from_items(raw, chosen);
    if sol.value as i64 != dp.values[w] {
        return Err(Error::Invariant("DP reconstruction disagrees with its table".into()));
    }
    Ok(sol)
}

/// Randomized solver over profit arrays; always feasible, optimal with high
/// probability.
pub fn solve_fast(inst: &KnapsackInstance, seed: u64) -> Result<KnapsackSolution> {
    solve_fast_with(inst, seed, &SolveOptions::default()).map(|r| r.solution)
}

/// Randomized solver over minimum-weight arrays.
pub fn solve_symmetric(inst: &KnapsackInstance, seed: u64) -> Result<KnapsackSolution> {
    solve_symmetric_with(inst, seed, &SolveOptions::default()).map(|r| r.solution)
}

pub fn solve_fast_with(inst: &KnapsackInstance, seed: u64, opts: &SolveOptions) -> Result<SolveReport> {
    let (norm, map) = match preprocess(inst)? {
        Preprocessed::Trivial(sol) => return Ok(SolveReport::plain(sol, SolvePath::Trivial)),
        Preprocessed::Normalized { instance, index_map } => (instance, index_map),
    };
    check_size(&norm)?;
    let params = match schedule(&norm) {
        Schedule::UseFallback => {
            let sol = bellman_fallback(inst, &norm, &map)?;
            return Ok(SolveReport::plain(sol, SolvePath::Fallback));
        }
        Schedule::Params(p) => p,
    };
    let tree = Tree::build(&norm, &params, seed, Orientation::Profit, opts)?;
    let w = norm.capacity as usize;
    let value = tree.top().at(w);
    let chosen = tree.reconstruct(w)?;
    let sol = KnapsackSolution::from_items(inst, chosen.into_iter().map(|k| map[k]).collect());
    if sol.value as i64 != value || sol.weight > inst.capacity {
        return Err(Error::Invariant(format!(
            "reconstructed set (profit {}, weight {}) does not match entry {value}",
            sol.value, sol.weight
        )));
    }
    Ok(tree.report(sol, params.q, None, norm.pmax(), opts))
}

pub fn solve_symmetric_with(inst: &KnapsackInstance, seed: u64, opts: &SolveOptions) -> Result<SolveReport> {
    let (norm, map) = match preprocess(inst)? {
        Preprocessed::Trivial(sol) => return Ok(SolveReport::plain(sol, SolvePath::Trivial)),
        Preprocessed::Normalized { instance, index_map } => (instance, index_map),
    };
    check_size(&norm)?;
    let v_tilde = greedy_upper_bound(&norm);
    if v_tilde > MAX_CAPACITY {
        return Err(Error::TooLarge(format!("profit estimate {v_tilde} exceeds {MAX_CAPACITY}")));
    }
    let cap = norm.capacity as i64;
    let params = match schedule_symmetric(&norm, v_tilde) {
        Schedule::UseFallback => {
            let dp = min_weight_dp(&norm.items, v_tilde as usize)?;
            let best = (0..dp.values.len()).rev().find(|&j| dp.values[j] <= cap).unwrap_or(0);
            let chosen = dp.reconstruct(best).into_iter().map(|k| map[k]).collect();
            let sol = KnapsackSolution::from_items(inst, chosen);
            let mut rep = SolveReport::plain(sol, SolvePath::Fallback);
            rep.v_tilde = Some(v_tilde);
            return Ok(rep);
        }
        Schedule::Params(p) => p,
    };
    let tree = Tree::build(&norm, &params, seed, Orientation::Weight, opts)?;
    let top = tree.top();
    let hi = top.last_index().min(v_tilde as usize);
    let sol = match (top.offset()..=hi).rev().find(|&j| top.at(j) <= cap) {
        Some(j) => {
            let chosen = tree.reconstruct(j)?;
            let sol = KnapsackSolution::from_items(inst, chosen.into_iter().map(|k| map[k]).collect());
            if sol.weight as i64 != top.at(j) || (sol.value as usize) < j {
                return Err(Error::Invariant(format!("reconstruction of weight entry {j} is inconsistent")));
            }
            sol
        }
        None => KnapsackSolution::empty(),
    };
    Ok(tree.report(sol, params.q, Some(v_tilde), norm.wmax(), opts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Orientation {
    /// Index = weight, value = largest profit; merged with `(max, +)`.
    Profit,
    /// Index = profit, value = smallest weight; merged with `(min, +)`.
    Weight,
}

struct Tree {
    orientation: Orientation,
    groups: Vec<Vec<usize>>,
    bases: Vec<DpTable>,
    /// `levels[l][j]` is slice `j` of level `l`.
    levels: Vec<Vec<IntSeq>>,
}

fn map_indices<T, F>(pool: Option<&rayon::ThreadPool>, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    match pool {
        Some(p) => p.install(|| (0..n).into_par_iter().map(&f).collect()),
        None => (0..n).map(f).collect(),
    }
}

fn restrict(seq: &IntSeq, range: IndexRange) -> Result<IntSeq> {
    if range.lo < seq.offset() || range.hi > seq.last_index() {
        return Err(Error::Invariant(format!(
            "window [{}..{}] not covered by [{}..{}]",
            range.lo,
            range.hi,
            seq.offset(),
            seq.last_index()
        )));
    }
    Ok(seq.slice(range))
}

impl Tree {
    fn build(
        inst: &KnapsackInstance,
        params: &ScheduleParams,
        seed: u64,
        orientation: Orientation,
        opts: &SolveOptions,
    ) -> Result<Tree> {
        let pool = match opts.threads {
            Some(t) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?,
            ),
            None => None,
        };
        let pool = pool.as_ref();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut groups = vec![Vec::new(); params.q];
        for k in 0..inst.n() {
            groups[rng.gen_range(0..params.q)].push(k);
        }

        let j0 = params.levels[0];
        let wmax = inst.wmax() as i64;
        let cap = inst.capacity as i64;
        let base = map_indices(pool, params.q, |g| {
            let items: Vec<Item> = groups[g].iter().map(|&k| inst.items[k]).collect();
            let table = match orientation {
                Orientation::Profit => bellman_dp(&items, j0.hi)?,
                Orientation::Weight => min_weight_dp(&items, j0.hi)?,
            };
            let mut values = table.values.clone();
            if orientation == Orientation::Weight {
                // Continue past the group's total profit with a steep line:
                // keeps the array convex-like and every such entry above
                // the capacity, so it is never selected.
                let total_p: i64 = items.iter().map(|it| it.profit as i64).sum();
                let total_w: i64 = items.iter().map(|it| it.weight as i64).sum();
                let slope = wmax.max(cap + 1 - total_w);
                for (j, v) in values.iter_mut().enumerate() {
                    if *v == NO_SUBSET {
                        *v = (j as i64 - total_p)
                            .checked_mul(slope)
                            .and_then(|x| x.checked_add(total_w))
                            .filter(|&x| x <= VALUE_BOUND)
                            .ok_or_else(|| Error::TooLarge("weight array extension overflows".into()))?;
                    }
                }
            }
            let seq = restrict(&IntSeq::from_values(values), j0)?;
            Ok((table, seq))
        })?;
        let (bases, first): (Vec<DpTable>, Vec<IntSeq>) = base.into_iter().unzip();

        let mut levels = vec![first];
        for l in 1..params.levels.len() {
            let prev = &levels[l - 1];
            let window = params.levels[l];
            let conv = Convolver::default();
            let next = map_indices(pool, prev.len() / 2, |j| {
                let (a, b) = (&prev[2 * j], &prev[2 * j + 1]);
                let merged = match orientation {
                    Orientation::Profit => conv.maxplus(a, b)?,
                    Orientation::Weight => conv.minplus(a, b)?,
                };
                restrict(&merged, window)
            })?;
            levels.push(next);
        }
        Ok(Tree { orientation, groups, bases, levels })
    }

    fn top(&self) -> &IntSeq {
        &self.levels.last().unwrap()[0]
    }

    /// Normalized item indices realizing entry `idx` of the top slice.
    fn reconstruct(&self, idx: usize) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        self.walk(self.levels.len() - 1, 0, idx, &mut out)?;
        out.sort_unstable();
        Ok(out)
    }

    fn walk(&self, level: usize, group: usize, idx: usize, out: &mut Vec<usize>) -> Result<()> {
        if level == 0 {
            out.extend(self.bases[group].reconstruct(idx).into_iter().map(|k| self.groups[group][k]));
            return Ok(());
        }
        let target = self.levels[level][group].at(idx);
        let (left, right) = (&self.levels[level - 1][2 * group], &self.levels[level - 1][2 * group + 1]);
        let lo = left.offset().max(idx.saturating_sub(right.last_index()));
        let hi = left.last_index().min(idx.saturating_sub(right.offset()));
        let split = (lo..=hi)
            .filter(|&a| idx >= a + right.offset())
            .find(|&a| left.at(a) + right.at(idx - a) == target)
            .ok_or(Error::WitnessNotFound { level, index: idx })?;
        self.walk(level - 1, 2 * group, split, out)?;
        self.walk(level - 1, 2 * group + 1, idx - split, out)
    }

    fn report(
        self,
        solution: KnapsackSolution,
        q: usize,
        v_tilde: Option<u64>,
        gap_bound: u64,
        opts: &SolveOptions,
    ) -> SolveReport {
        let mut max_gap = None;
        let mut checked = 0;
        if opts.instrument {
            for seq in self.levels.iter().flatten() {
                let gap = match self.orientation {
                    Orientation::Profit => upper_hull_gap(seq),
                    Orientation::Weight => lower_hull(seq).raw_gap(),
                };
                max_gap = Some(max_gap.map_or(gap, |m: Rational| m.max(gap)));
                checked += 1;
            }
        }
        let slices = self
            .levels
            .into_iter()
            .enumerate()
            .flat_map(|(level, row)| {
                row.into_iter().enumerate().map(move |(group, seq)| LevelSlice { level, group, seq })
            })
            .collect();
        SolveReport {
            solution,
            path: SolvePath::Partitioned { q },
            v_tilde,
            max_slice_gap: max_gap,
            slice_gap_bound: gap_bound,
            slices_checked: checked,
            slices,
        }
    }
}
