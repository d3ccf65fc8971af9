//! Acceptance suite: ten seeded checks against brute-force references.
//!
//! Every check is deterministic for a fixed seed. Trials run in parallel
//! where they are independent; the timing check runs alone.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::convex::convex_minplus;
use crate::error::Result;
use crate::generate::{convex_seq, near_concave_seq, near_convex_seq, random_instance, random_seq};
use crate::hull::{lower_hull, upper_hull_gap};
use crate::knapsack::{solve_bellman, solve_fast_with, solve_symmetric_with, SolveOptions, SolvePath, SolveReport};
use crate::nearconvex::{maxplus_nearconcave, minplus_nearconvex, Convolver, HarvestedBox};
use crate::oracles::brute_box_minplus;
use crate::rational::Rational;
use crate::seq::{naive_minplus, IntSeq};
use crate::sumset::{banded_sumset_min, SumsetKernel};

/// Extra per-diagonal slack allowed on top of `8 * ceil(delta)` in sumset
/// sizes: two rounding units on each band's half-width plus carries.
pub const SUMSET_SLACK: u64 = 10;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides every per-criterion trial count when set.
    pub trials: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 2024, trials: None }
    }
}

impl VerifyConfig {
    fn count(&self, default: usize) -> usize {
        self.trials.unwrap_or(default).max(1)
    }

    fn rng(&self, criterion: u64, trial: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ (criterion << 48) ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "convolution exactness"),
    (2, "convex kernel"),
    (3, "sumset kernel"),
    (4, "knapsack soundness"),
    (5, "knapsack optimality rate"),
    (6, "symmetric variant"),
    (7, "near-concavity preservation"),
    (8, "slice near-concavity bound"),
    (9, "delta scaling"),
    (10, "structural counters"),
];

/// Runs one criterion by number (1-10).
pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    match id {
        1 => convolution_exactness(cfg),
        2 => convex_kernel(cfg),
        3 => sumset_kernel(cfg),
        4 | 5 | 8 => {
            let (c4, c5, c8) = knapsack_fast(cfg)?;
            Ok([c4, c5, c8].into_iter().find(|c| c.id == id).unwrap())
        }
        6 => symmetric_variant(cfg),
        7 => concavity_preservation(cfg),
        9 => delta_scaling(cfg),
        10 => structural_counters(cfg),
        _ => Err(crate::Error::InvalidParameter(format!("no criterion {id}"))),
    }
}

/// Runs all ten criteria, sharing the knapsack corpus between 4, 5 and 8.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<CriterionOutcome>> {
    let mut out = vec![convolution_exactness(cfg)?, convex_kernel(cfg)?, sumset_kernel(cfg)?];
    let (c4, c5, c8) = knapsack_fast(cfg)?;
    out.extend([c4, c5, symmetric_variant(cfg)?, concavity_preservation(cfg)?, c8]);
    out.extend([delta_scaling(cfg)?, structural_counters(cfg)?]);
    Ok(out)
}

fn outcome(id: u8, passed: bool, detail: String, start: Instant) -> CriterionOutcome {
    let name = CRITERIA[id as usize - 1].1;
    CriterionOutcome { id, name, passed, detail, elapsed: start.elapsed() }
}

fn convolution_exactness(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let trials = cfg.count(500);
    let exact = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let mut rng = cfg.rng(1, t);
            let len_f = rng.gen_range(1..=512);
            let f = random_seq(&mut rng, len_f, -1_000_000, 1_000_000)?;
            let len_g = rng.gen_range(1..=512);
            let g = random_seq(&mut rng, len_g, -1_000_000, 1_000_000)?;
            Ok(minplus_nearconvex(&f, &g)? == naive_minplus(&f, &g))
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok(outcome(1, exact == trials, format!("{exact}/{trials} pairs exact"), start))
}

/// Minimal witnesses recomputed by scanning every split of the diagonal.
fn witnesses_are_minimal(f: &IntSeq, g: &IntSeq, witnesses: &[usize]) -> bool {
    let (a, b) = (f.values(), g.values());
    witnesses.iter().enumerate().all(|(k, &w)| {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        let best = (lo..=hi).map(|i| a[i] + b[k - i]).min().unwrap();
        let first = (lo..=hi).find(|&i| a[i] + b[k - i] == best).unwrap();
        first == w
    })
}

fn convex_kernel(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let trials = cfg.count(300);
    let results = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, bool)> {
            let mut rng = cfg.rng(2, t);
            let slope = [1, 10, 1000, 100_000][t % 4];
            let len_f = rng.gen_range(1..=256);
            let f = convex_seq(&mut rng, len_f, slope)?;
            let len_g = rng.gen_range(1..=256);
            let g = convex_seq(&mut rng, len_g, slope)?;
            let c = convex_minplus(&lower_hull(&f), &lower_hull(&g));
            let naive = naive_minplus(&f, &g);
            let values = c.values().iter().zip(naive.values()).all(|(r, &v)| *r == Rational::from_int(v));
            Ok((values, witnesses_are_minimal(&f, &g, c.path().witnesses())))
        })
        .collect::<Result<Vec<_>>>()?;
    let exact = results.iter().filter(|r| r.0).count();
    let minimal = results.iter().filter(|r| r.1).count();
    Ok(outcome(
        2,
        exact == trials && minimal == trials,
        format!("{exact}/{trials} exact, {minimal}/{trials} with minimal witnesses"),
        start,
    ))
}

/// Collects `count` sumset boxes from traced runs on near-convex pairs,
/// preferring boxes of side at least 4.
pub fn harvest_boxes(cfg: &VerifyConfig, count: usize) -> Result<Vec<HarvestedBox>> {
    let mut boxes = Vec::new();
    let mut run = 0usize;
    while boxes.len() < count {
        let mut rng = cfg.rng(3, run);
        let delta = [1, 4, 16, 64][run % 4];
        let len_f = rng.gen_range(64..=512);
        let f = near_convex_seq(&mut rng, len_f, delta, 2_000)?;
        let len_g = rng.gen_range(64..=512);
        let g = near_convex_seq(&mut rng, len_g, delta, 2_000)?;
        let (_, trace) = Convolver::default().traced(usize::MAX).minplus_traced(&f, &g)?;
        let mut found: Vec<HarvestedBox> = trace.map(|t| t.harvested).unwrap_or_default();
        found.retain(|b| b.f.len() >= 4);
        // A spread of boxes from each run.
        let take = (count - boxes.len()).min(8);
        for _ in 0..take.min(found.len()) {
            let k = rng.gen_range(0..found.len());
            boxes.push(found.swap_remove(k));
        }
        run += 1;
        if run > 100 * count {
            break;
        }
    }
    Ok(boxes)
}

fn sumset_kernel(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let trials = cfg.count(300);
    let boxes = harvest_boxes(cfg, trials)?;
    let checks = boxes
        .par_iter()
        .map(|b| -> Result<(bool, bool)> {
            let out = banded_sumset_min(&b.f, &b.g, &b.band_f, &b.band_g, SumsetKernel::Transform)?;
            let brute = brute_box_minplus(&b.f, &b.g)?.to_int_seq();
            let size = out.sumset_size.unwrap_or(usize::MAX) as u64;
            let bound = (b.f.len() + b.g.len()) as u64 * (8 * b.delta.ceil() as u64 + SUMSET_SLACK);
            Ok((brute.as_ref() == Some(&out.seq), size <= bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let exact = checks.iter().filter(|c| c.0).count();
    let bounded = checks.iter().filter(|c| c.1).count();
    let n = boxes.len();
    Ok(outcome(
        3,
        n == trials && exact == n && bounded == n,
        format!("{exact}/{n} boxes exact, {bounded}/{n} within size bound"),
        start,
    ))
}

struct CorpusRun {
    report: SolveReport,
    optimum: u64,
    feasible: bool,
    pmax: u64,
}

fn knapsack_corpus(
    cfg: &VerifyConfig,
    criterion: u64,
    solver: fn(&crate::knapsack::KnapsackInstance, u64, &SolveOptions) -> Result<SolveReport>,
) -> Result<Vec<CorpusRun>> {
    let trials = cfg.count(300);
    let opts = SolveOptions { threads: None, instrument: true };
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = cfg.rng(criterion, t);
            let pmax = rng.gen_range(1..=64);
            let wmax = rng.gen_range(1..=64);
            let inst = random_instance(&mut rng, 128, pmax, wmax, None)?;
            let seed = rng.gen();
            let report = solver(&inst, seed, &opts)?;
            let optimum = solve_bellman(&inst)?.solution.value;
            let feasible = report.solution.is_feasible_for(&inst);
            Ok(CorpusRun { report, optimum, feasible, pmax: inst.pmax() })
        })
        .collect()
}

fn partitioned(runs: &[CorpusRun]) -> usize {
    runs.iter().filter(|r| matches!(r.report.path, SolvePath::Partitioned { .. })).count()
}

fn knapsack_fast(cfg: &VerifyConfig) -> Result<(CriterionOutcome, CriterionOutcome, CriterionOutcome)> {
    let start = Instant::now();
    let runs = knapsack_corpus(cfg, 4, solve_fast_with)?;
    let n = runs.len();
    let bounded = runs.iter().filter(|r| r.report.solution.value <= r.optimum).count();
    let feasible = runs.iter().filter(|r| r.feasible).count();
    let optimal = runs.iter().filter(|r| r.report.solution.value == r.optimum).count();
    let tree = partitioned(&runs);
    let c4 = outcome(
        4,
        bounded == n && feasible == n,
        format!("{bounded}/{n} never above optimum, {feasible}/{n} feasible and consistent ({tree} partitioned)"),
        start,
    );
    let c5 = outcome(
        5,
        optimal * 100 >= 95 * n,
        format!("{optimal}/{n} optimal ({:.1}%, need 95%)", 100.0 * optimal as f64 / n as f64),
        start,
    );
    let mut slices = 0;
    let mut within = 0;
    let mut worst = 0.0f64;
    for r in &runs {
        if let Some(gap) = r.report.max_slice_gap {
            slices += r.report.slices_checked;
            worst = worst.max(gap.to_f64() / r.pmax as f64);
            if gap <= Rational::from_int(r.pmax as i64) {
                within += 1;
            }
        }
    }
    let c8 = outcome(
        8,
        within == tree,
        format!("{within}/{tree} partitioned runs within pmax over {slices} slices (worst gap/pmax {worst:.3})"),
        start,
    );
    Ok((c4, c5, c8))
}

fn symmetric_variant(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let runs = knapsack_corpus(cfg, 6, solve_symmetric_with)?;
    let n = runs.len();
    let bounded = runs.iter().filter(|r| r.report.solution.value <= r.optimum).count();
    let feasible = runs.iter().filter(|r| r.feasible).count();
    let optimal = runs.iter().filter(|r| r.report.solution.value == r.optimum).count();
    Ok(outcome(
        6,
        bounded == n && feasible == n && optimal * 100 >= 95 * n,
        format!(
            "{bounded}/{n} never above optimum, {feasible}/{n} feasible, {optimal}/{n} optimal ({} partitioned)",
            partitioned(&runs)
        ),
        start,
    ))
}

fn concavity_preservation(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let trials = cfg.count(200);
    let ok = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let mut rng = cfg.rng(7, t);
            let (df, dg) = (rng.gen_range(0..=40), rng.gen_range(0..=40));
            let len_f = rng.gen_range(1..=300);
            let f = near_concave_seq(&mut rng, len_f, df, 500)?;
            let len_g = rng.gen_range(1..=300);
            let g = near_concave_seq(&mut rng, len_g, dg, 500)?;
            let h = maxplus_nearconcave(&f, &g)?;
            Ok(upper_hull_gap(&h) <= upper_hull_gap(&f).max(upper_hull_gap(&g)))
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok(outcome(7, ok == trials, format!("{ok}/{trials} pairs with gap(h) <= max(gap(f), gap(g))"), start))
}

/// Best of three wall-clock times.
fn time_convolution(f: &IntSeq, g: &IntSeq) -> Result<Duration> {
    let mut best = Duration::MAX;
    for _ in 0..3 {
        let start = Instant::now();
        minplus_nearconvex(f, g)?;
        best = best.min(start.elapsed());
    }
    Ok(best)
}

fn delta_scaling(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let len = 1 << 15;
    let mut times = Vec::new();
    for delta in [4, 64] {
        let mut rng = cfg.rng(9, delta as usize);
        let f = near_convex_seq(&mut rng, len, delta, 1 << 12)?;
        let g = near_convex_seq(&mut rng, len, delta, 1 << 12)?;
        times.push(time_convolution(&f, &g)?);
    }
    let ratio = times[1].as_secs_f64() / times[0].as_secs_f64().max(1e-9);
    Ok(outcome(
        9,
        ratio <= 32.0,
        format!(
            "T(64)/T(4) = {ratio:.2} ({:.1} ms / {:.1} ms, limit 32)",
            times[1].as_secs_f64() * 1e3,
            times[0].as_secs_f64() * 1e3
        ),
        start,
    ))
}

fn structural_counters(cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let trials = cfg.count(50);
    let results = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(bool, u32)> {
            let mut rng = cfg.rng(10, t);
            let delta = [1, 3, 8, 32, 100][t % 5];
            let len_f = rng.gen_range(2..=2048);
            let f = near_convex_seq(&mut rng, len_f, delta, 5_000)?;
            let len_g = rng.gen_range(2..=2048);
            let g = near_convex_seq(&mut rng, len_g, delta, 5_000)?;
            let (_, trace) = Convolver::default().traced(0).minplus_traced(&f, &g)?;
            let trace = trace.expect("tracing enabled");
            let worst = trace.per_diagonal.values().map(|c| c[2].max(c[3])).max().unwrap_or(0);
            Ok((worst <= 2, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let ok = results.iter().filter(|r| r.0).count();
    let worst = results.iter().map(|r| r.1).max().unwrap_or(0);
    Ok(outcome(
        10,
        ok == trials,
        format!("{ok}/{trials} runs with <= 2 sumset and <= 2 split boxes per (side, box diagonal); max seen {worst}"),
        start,
    ))
}
