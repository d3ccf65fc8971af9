//! Seeded generators for knapsack instances and (near-)convex sequences.

use rand::Rng;

use crate::error::{Error, Result};
use crate::knapsack::{Item, KnapsackInstance};
use crate::seq::IntSeq;

/// Uniform profits in `[1..pmax]`, weights in `[1..wmax]`. Without an
/// explicit capacity one is drawn uniformly from `[wmax .. n * wmax / 2]`.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n: usize,
    pmax: u64,
    wmax: u64,
    capacity: Option<u64>,
) -> Result<KnapsackInstance> {
    if n == 0 || pmax == 0 || wmax == 0 {
        return Err(Error::InvalidParameter("n, pmax and wmax must be positive".into()));
    }
    let items = (0..n).map(|_| Item::new(rng.gen_range(1..=pmax), rng.gen_range(1..=wmax))).collect();
    let capacity = match capacity {
        Some(c) => c,
        None => {
            let hi = (n as u64 * wmax / 2).max(wmax);
            rng.gen_range(wmax..=hi)
        }
    };
    KnapsackInstance::new(items, capacity)
}

/// Convex base (sorted slopes in `[-max_slope..max_slope]`, prefix-summed)
/// plus uniform noise in `[0..delta]`. Its hull gap is at most `delta`.
pub fn near_convex_seq<R: Rng>(rng: &mut R, len: usize, delta: i64, max_slope: i64) -> Result<IntSeq> {
    if len == 0 || delta < 0 || max_slope < 0 {
        return Err(Error::InvalidParameter("need len > 0, delta >= 0, max_slope >= 0".into()));
    }
    let mut slopes: Vec<i64> = (1..len).map(|_| rng.gen_range(-max_slope..=max_slope)).collect();
    slopes.sort_unstable();
    let mut base = 0i64;
    let mut values = Vec::with_capacity(len);
    values.push(rng.gen_range(0..=delta));
    for s in slopes {
        base += s;
        values.push(base + rng.gen_range(0..=delta));
    }
    let seq = IntSeq::from_values(values);
    seq.check_bounds()?;
    Ok(seq)
}

pub fn convex_seq<R: Rng>(rng: &mut R, len: usize, max_slope: i64) -> Result<IntSeq> {
    near_convex_seq(rng, len, 0, max_slope)
}

/// Negated [`near_convex_seq`].
pub fn near_concave_seq<R: Rng>(rng: &mut R, len: usize, delta: i64, max_slope: i64) -> Result<IntSeq> {
    near_convex_seq(rng, len, delta, max_slope).map(|s| crate::seq::negate(&s))
}

/// Independent uniform entries in `[lo..hi]`.
pub fn random_seq<R: Rng>(rng: &mut R, len: usize, lo: i64, hi: i64) -> Result<IntSeq> {
    if len == 0 || lo > hi {
        return Err(Error::InvalidParameter("need len > 0 and lo <= hi".into()));
    }
    let seq = IntSeq::from_values((0..len).map(|_| rng.gen_range(lo..=hi)).collect());
    seq.check_bounds()?;
    Ok(seq)
}
