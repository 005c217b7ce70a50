//! `dwief`: batch scans for Wieferich primes, Mersenne numbers and Fitting
//! generators of Drinfeld modules over F_q[T].

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dwief::factor::monic_irreducibles_between;
use dwief::harness::{conjecture_a_stats, fermat_search, wieferich_base_from_fermat};
use dwief::mersenne::{koblitz_stats, mersenne_scan};
use dwief::wieferich::{pi_chain, search_wieferich};
use dwief::{Error, Result};
use rayon::prelude::*;

use dwief_cli::config::{Format, RunConfig};
use dwief_cli::record::{write_records, RunMeta, SearchRecord};
use dwief_cli::verify;

#[derive(Parser)]
#[command(name = "dwief", version, about = "Wieferich primes and Mersenne numbers for Drinfeld modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every prime in the degree range as (super-)Wieferich or not.
    Wieferich(Common),
    /// Mersenne numbers phi_P(a) and their primality.
    Mersenne(Common),
    /// Fitting generators g_P with P = g_P + r_P.
    Fitting(Common),
    /// Monic annihilators of the base modulo each prime.
    Annihilator(Common),
    /// Exhaustive search of the homogeneous Fermat equation.
    Fermat {
        #[command(flatten)]
        common: Common,
        /// Largest degree of x and y.
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
    /// Koblitz and squarefree statistics tables.
    Stats(Common),
    /// Run the invariant suite and print a pass/fail table.
    Verify(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    deg_min: Option<u32>,
    #[arg(long)]
    deg_max: Option<u32>,
    /// Base as a code list, e.g. [1,1].
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Errors the CLI reports; internal invariant violations exit with 2.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn load_config(c: &Common) -> std::result::Result<RunConfig, Failure> {
    let mut cfg = match &c.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = c.deg_min {
        cfg.deg_min = v;
    }
    if let Some(v) = c.deg_max {
        cfg.deg_max = v;
    }
    if let Some(b) = &c.base {
        cfg.base = dwief::poly::parse_code_list(b).map_err(|e| Failure::Usage(format!("--base: {e}")))?;
        cfg.base_poly().map_err(|e| Failure::Usage(format!("--base: {e}")))?;
    }
    if let Some(o) = &c.out {
        cfg.out = Some(o.clone());
    }
    if let Some(f) = c.format {
        cfg.format = f;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if cfg.deg_min < 1 || cfg.deg_min > cfg.deg_max {
        return Err(Error::EmptyRange { min: cfg.deg_min as i64, max: cfg.deg_max as i64 }.into());
    }
    Ok(cfg)
}

fn meta(cfg: &RunConfig) -> RunMeta {
    RunMeta { config_hash: cfg.hash(), seed: cfg.seed, version: env!("CARGO_PKG_VERSION").to_string() }
}

/// Output sink: the configured file, or stdout.
fn sink(cfg: &RunConfig) -> std::result::Result<Box<dyn Write>, Failure> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(cfg: &RunConfig, records: &[SearchRecord]) -> std::result::Result<(), Failure> {
    write_records(records, cfg.format, sink(cfg)?)?;
    Ok(())
}

fn emit_text(cfg: &RunConfig, text: &str) -> std::result::Result<(), Failure> {
    let mut w = sink(cfg)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn run(command: Command) -> std::result::Result<(), Failure> {
    let (common, bound) = match &command {
        Command::Fermat { common, bound } => (common.clone(), *bound),
        Command::Wieferich(c)
        | Command::Mersenne(c)
        | Command::Fitting(c)
        | Command::Annihilator(c)
        | Command::Stats(c)
        | Command::Verify(c) => (c.clone(), 0),
    };
    let cfg = load_config(&common)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build()
        .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    pool.install(|| execute(&command, &cfg, bound))
}

fn execute(command: &Command, cfg: &RunConfig, bound: u32) -> std::result::Result<(), Failure> {
    let phi = cfg.module()?;
    let fq = phi.field().clone();
    let a = cfg.base_poly()?;
    let meta = meta(cfg);
    let (dmin, dmax) = (cfg.deg_min, cfg.deg_max);
    match command {
        Command::Wieferich(_) => {
            let res = search_wieferich(&phi, &a, dmin, dmax)?;
            let recs: Vec<_> = res.statuses.iter().map(|s| SearchRecord::from_status(&phi, s, &meta)).collect();
            emit(cfg, &recs)?;
            let h = res.histogram;
            eprintln!(
                "primes: {}  v=1: {}  v=2: {}  v=3: {}  v>=4: {}  annihilated: {}",
                h.total(),
                h.v1,
                h.v2,
                h.v3,
                h.v4_plus,
                h.infinite
            );
        }
        Command::Mersenne(_) => {
            let scan = mersenne_scan(&phi, &a, dmin, dmax)?;
            let recs: Vec<_> = scan.records.iter().map(|r| SearchRecord::from_mersenne(&phi, r, &meta)).collect();
            emit(cfg, &recs)?;
            let s = scan.summary;
            eprintln!("prime: {}  composite: {}  unknown: {}", s.prime, s.composite, s.unknown);
        }
        Command::Fitting(_) => {
            let primes = monic_irreducibles_between(dmin as usize, dmax as usize, &fq)?;
            let recs = primes
                .par_iter()
                .map(|p| Ok(SearchRecord::from_fitting(&phi, &phi.fitting_generator(p)?, &meta)))
                .collect::<Result<Vec<_>>>()?;
            emit(cfg, &recs)?;
        }
        Command::Annihilator(_) => {
            let primes = monic_irreducibles_between(dmin as usize, dmax as usize, &fq)?;
            let recs = primes
                .par_iter()
                .map(|p| {
                    let chain = pi_chain(&phi, &a, p, 3)?;
                    Ok(SearchRecord::from_annihilator(&phi, p, &a, &chain.generators[0], chain.chain_break, &meta))
                })
                .collect::<Result<Vec<_>>>()?;
            emit(cfg, &recs)?;
        }
        Command::Fermat { .. } => {
            let primes = monic_irreducibles_between(dmin as usize, dmax as usize, &fq)?;
            let mut text = String::from("P\tdeg_bound\tpairs\tsolutions\n");
            let mut details = String::new();
            for p in &primes {
                let inst = fermat_search(&phi, p, bound)?;
                text.push_str(&format!("{p}\t{bound}\t{}\t{}\n", inst.pairs_examined, inst.solutions.len()));
                for s in &inst.solutions {
                    let base = wieferich_base_from_fermat(&phi, p, &s.x, &s.y, &s.z)?;
                    details.push_str(&format!("P={p} x={} y={} z={} base={base}\n", s.x, s.y, s.z));
                }
            }
            text.push_str(&details);
            emit_text(cfg, &text)?;
        }
        Command::Stats(_) => {
            let mut text = String::from("# primes P with prime Fitting generator\ndegree\tprimes\tg_prime\n");
            for row in koblitz_stats(&phi, dmin, dmax)? {
                text.push_str(&format!("{}\t{}\t{}\n", row.degree, row.total, row.g_prime));
            }
            text.push_str("# monic b with phi_b(a)/a squarefree and f' != 0\ndegree\tb\tcounted\trunning_ratio\n");
            if phi.is_torsion(&a) {
                text.push_str("# skipped: base is a torsion point\n");
            } else {
                for row in conjecture_a_stats(&phi, &a, dmax)? {
                    text.push_str(&format!(
                        "{}\t{}\t{}\t{:.6}\n",
                        row.degree, row.total, row.counted, row.running_ratio
                    ));
                }
            }
            emit_text(cfg, &text)?;
        }
        Command::Verify(_) => {
            let outcomes = verify::run_suite(&phi, &a, dmin, dmax, cfg.seed)?;
            let mut text = format!("{:<40} {:>7}  result\n", "check", "cases");
            for o in &outcomes {
                let verdict = match &o.failure {
                    None => "pass".to_string(),
                    Some(f) => format!("FAIL ({f})"),
                };
                text.push_str(&format!("{:<40} {:>7}  {verdict}\n", o.name, o.cases));
            }
            emit_text(cfg, &text)?;
            if let Some(bad) = outcomes.iter().find(|o| !o.passed()) {
                return Err(Failure::Internal(format!("invariant check {} failed", bad.name)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
