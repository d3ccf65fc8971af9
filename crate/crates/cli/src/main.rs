//! `nearconvex`: solve knapsack instances, convolve sequences, generate
//! inputs, run the acceptance checks and benchmark sweeps.
//!
//! Exit status: 0 on success, 1 when a verify criterion fails, 2 on bad
//! input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nearconvex::bench::{run_sweep, write_csv, SweepSpec};
use nearconvex::format::{parse_instance, parse_seq, write_instance, write_seq, write_solution};
use nearconvex::generate::{near_concave_seq, near_convex_seq, random_instance};
use nearconvex::knapsack::{solve, Algorithm, SolveOptions};
use nearconvex::nearconvex::{maxplus_nearconcave, minplus_nearconvex};
use nearconvex::verify::{run_all, run_criterion, VerifyConfig};

#[derive(Parser)]
#[command(name = "nearconvex", version, about = "Near-convex min-plus convolution and 0-1 knapsack")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a knapsack instance file.
    Solve(SolveArgs),
    /// Convolve two sequence files.
    Convolve(ConvolveArgs),
    /// Generate an instance or a sequence.
    Gen(GenArgs),
    /// Run the acceptance criteria.
    Verify(VerifyArgs),
    /// Time solvers over a parameter sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Bellman,
    Fast,
    Symmetric,
    Auto,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Bellman => Algorithm::Bellman,
            AlgoArg::Fast => Algorithm::Fast,
            AlgoArg::Symmetric => Algorithm::Symmetric,
            AlgoArg::Auto => Algorithm::Auto,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "auto")]
    algo: AlgoArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also print the chosen items (1-based).
    #[arg(long)]
    items: bool,
    /// Worker threads for the randomized solvers.
    #[arg(long)]
    threads: Option<usize>,
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Min,
    Max,
}

#[derive(Args)]
struct ConvolveArgs {
    #[arg(long, value_enum, default_value = "min")]
    mode: Mode,
    f: PathBuf,
    g: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Uniform profits in [1..pmax] and weights in [1..wmax].
    Instance {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pmax: u64,
        #[arg(long)]
        wmax: u64,
        /// Capacity; drawn from [wmax .. n*wmax/2] when omitted.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Convex base plus uniform noise in [0..delta].
    Seq {
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 1)]
        delta: i64,
        #[arg(long, default_value_t = 1000)]
        max_slope: i64,
        /// Negate, giving a near-concave sequence.
        #[arg(long)]
        concave: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Override every criterion's trial count.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = VerifyConfig::default().seed)]
    seed: u64,
    /// Run only these criteria (1-10).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

#[derive(Args)]
struct BenchArgs {
    /// e.g. `n=64,128;wmax=16;pmax=16;seeds=3;algos=fast,bellman`.
    #[arg(long)]
    sweep: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("cannot write output"),
    }
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let text = read(&a.file)?;
    let inst = parse_instance(&text).with_context(|| a.file.display().to_string())?;
    let opts = SolveOptions { threads: a.threads, instrument: false };
    let report = solve(&inst, a.algo.into(), a.seed, &opts)?;
    emit(&write_solution(&report.solution, a.items), None)
}

fn cmd_convolve(a: ConvolveArgs) -> Result<()> {
    let f = parse_seq(&read(&a.f)?).with_context(|| a.f.display().to_string())?;
    let g = parse_seq(&read(&a.g)?).with_context(|| a.g.display().to_string())?;
    let h = match a.mode {
        Mode::Min => minplus_nearconvex(&f, &g)?,
        Mode::Max => maxplus_nearconcave(&f, &g)?,
    };
    emit(&write_seq(&h), None)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let text = match a.kind {
        GenKind::Instance { n, pmax, wmax, cap } => write_instance(&random_instance(&mut rng, n, pmax, wmax, cap)?),
        GenKind::Seq { len, delta, max_slope, concave } => {
            let s = if concave {
                near_concave_seq(&mut rng, len, delta, max_slope)?
            } else {
                near_convex_seq(&mut rng, len, delta, max_slope)?
            };
            write_seq(&s)
        }
    };
    emit(&text, a.out.as_deref())
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let cfg = VerifyConfig { seed: a.seed, trials: a.trials };
    let outcomes = if a.only.is_empty() {
        run_all(&cfg)?
    } else {
        a.only.iter().map(|&id| run_criterion(id, &cfg)).collect::<nearconvex::Result<Vec<_>>>()?
    };
    let mut out = io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let spec: SweepSpec = a.sweep.parse()?;
    let rows = run_sweep(&spec, &SolveOptions { threads: a.threads, instrument: false })?;
    let file = fs::File::create(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    write_csv(&rows, io::BufWriter::new(file))?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a)?,
        Command::Convolve(a) => cmd_convolve(a)?,
        Command::Gen(a) => cmd_gen(a)?,
        Command::Verify(a) => return cmd_verify(a),
        Command::Bench(a) => {
            if a.threads == Some(0) {
                bail!("--threads must be positive");
            }
            cmd_bench(a)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
