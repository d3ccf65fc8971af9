//! Parameter sweeps comparing solvers on generated instances.
//!
//! A sweep is written as `key=v1,v2,...` clauses separated by `;`, e.g.
//! `n=64,128;wmax=16;pmax=16,64;seeds=3;algos=fast,bellman`. Keys: `n`,
//! `wmax`, `pmax` (required), `cap` (capacities; drawn per instance when
//! absent), `seeds` (instances per point, default 1), `algos` (default
//! `fast,bellman`).

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generate::random_instance;
use crate::knapsack::{solve, Algorithm, SolveOptions};

pub const CSV_HEADER: &str = "algo,n,wmax,pmax,W,seed,value,wall_ns";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub n: Vec<usize>,
    pub wmax: Vec<u64>,
    pub pmax: Vec<u64>,
    pub capacity: Vec<u64>,
    pub seeds: u64,
    pub algos: Vec<Algorithm>,
}

fn list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(|v| v.trim().parse::<T>().map_err(|_| Error::InvalidParameter(format!("bad value `{v}` for `{key}`"))))
        .collect()
}

impl FromStr for SweepSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = SweepSpec {
            n: Vec::new(),
            wmax: Vec::new(),
            pmax: Vec::new(),
            capacity: Vec::new(),
            seeds: 1,
            algos: vec![Algorithm::Fast, Algorithm::Bellman],
        };
        for clause in s.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (key, raw) = clause
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("clause `{clause}` is not key=values")))?;
            match key.trim() {
                "n" => spec.n = list(key, raw)?,
                "wmax" => spec.wmax = list(key, raw)?,
                "pmax" => spec.pmax = list(key, raw)?,
                "cap" => spec.capacity = list(key, raw)?,
                "seeds" => spec.seeds = list::<u64>(key, raw)?.first().copied().unwrap_or(1),
                "algos" => spec.algos = list(key, raw)?,
                other => return Err(Error::InvalidParameter(format!("unknown sweep key `{other}`"))),
            }
        }
        if spec.n.is_empty() || spec.wmax.is_empty() || spec.pmax.is_empty() {
            return Err(Error::InvalidParameter("sweep needs n, wmax and pmax".into()));
        }
        if spec.n.contains(&0) || spec.wmax.contains(&0) || spec.pmax.contains(&0) || spec.seeds == 0 {
            return Err(Error::InvalidParameter("sweep values must be positive".into()));
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub algo: Algorithm,
    pub n: usize,
    pub wmax: u64,
    pub pmax: u64,
    pub capacity: u64,
    pub seed: u64,
    pub value: u64,
    pub wall_ns: u128,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.algo.name(),
            self.n,
            self.wmax,
            self.pmax,
            self.capacity,
            self.seed,
            self.value,
            self.wall_ns
        )
    }
}

/// One row per (algorithm, instance). The instance for seed `s` is drawn
/// from `ChaCha8Rng::seed_from_u64(s)`, and `s` is also the solver seed.
pub fn run_sweep(spec: &SweepSpec, opts: &SolveOptions) -> Result<Vec<BenchRow>> {
    let caps: Vec<Option<u64>> =
        if spec.capacity.is_empty() { vec![None] } else { spec.capacity.iter().map(|&c| Some(c)).collect() };
    let mut rows = Vec::new();
    for &n in &spec.n {
        for &wmax in &spec.wmax {
            for &pmax in &spec.pmax {
                for &cap in &caps {
                    for seed in 0..spec.seeds {
                        let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), n, pmax, wmax, cap)?;
                        for &algo in &spec.algos {
                            let start = Instant::now();
                            let report = solve(&inst, algo, seed, opts)?;
                            rows.push(BenchRow {
                                algo,
                                n,
                                wmax: inst.wmax(),
                                pmax: inst.pmax(),
                                capacity: inst.capacity(),
                                seed,
                                value: report.solution.value,
                                wall_ns: start.elapsed().as_nanos(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sweeps() {
        let s: SweepSpec = "n=8,16; wmax=4; pmax=5; seeds=2".parse().unwrap();
        assert_eq!(s.n, vec![8, 16]);
        assert_eq!(s.seeds, 2);
        assert_eq!(s.algos, vec![Algorithm::Fast, Algorithm::Bellman]);
        assert!("n=8;wmax=4".parse::<SweepSpec>().is_err());
        assert!("n=8;wmax=4;pmax=x".parse::<SweepSpec>().is_err());
        assert!("n=8;wmax=4;pmax=3;colour=red".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn one_row_per_algo_and_instance() {
        let s: SweepSpec = "n=20,40;wmax=5;pmax=5;seeds=2;algos=fast,bellman,symmetric".parse().unwrap();
        let rows = run_sweep(&s, &SolveOptions::default()).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        for chunk in rows.chunks(3) {
            assert!(chunk.iter().all(|r| r.value == chunk[1].value));
        }
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 13);
        assert!(text.starts_with(CSV_HEADER));
    }
}
