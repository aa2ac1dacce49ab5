//! Command definitions and dispatch.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use class16_core::contfrac::{m_from_period, neg_cf_with_limit, DEFAULT_MAX_STEPS};
use class16_core::dedekind::dedekind_sum;
use class16_core::pell::fundamental_pell;
use class16_core::{verify_with, Error, QuadIrr, VerifyOptions};
use num_bigint::BigInt;

use crate::cache::Cache;
use crate::examples::run_examples;
use crate::report::{csv_row, render_text, summary_line, ReportJson, CSV_HEADER};
use crate::sweep;

/// All checks passed.
pub const EXIT_OK: u8 = 0;
/// A congruence or identity failed, or an internal cross-check disagreed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Bad arguments, unsupported input, or an I/O problem.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "class16",
    version,
    about = "Verify h(-p) = h(p) m(p) (mod 16) for primes p = 3 (mod 4)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit JSON reports (one object per line for sweeps).
    #[arg(long, global = true)]
    pub json: bool,
    /// Unit cache file (JSON lines).
    #[arg(long, global = true, value_name = "PATH", default_value = "class16-cache.jsonl")]
    pub cache: PathBuf,
    /// Neither read nor write the unit cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for sweeps; defaults to the number of processors.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Give up on a continued fraction after this many partial quotients.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_STEPS)]
    pub max_cf_steps: usize,
    /// Initial |x|, |y| bound when searching for odd-norm representatives.
    #[arg(long, global = true, value_name = "N", default_value_t = 50)]
    pub search_bound: i64,
    /// Include wall-clock timings in reports (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify a single prime.
    Verify { p: i64 },
    /// Verify every prime p = 3 (mod 4) in [lo, hi].
    Sweep {
        lo: i64,
        hi: i64,
        /// Also write a CSV summary to PATH.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Reproduce the worked examples p = 79, 439, 43063.
    Examples,
    /// Negative continued fraction of sqrt(p), or of (a + sqrt(p))/b.
    #[command(allow_negative_numbers = true)]
    Cf {
        #[arg(num_args = 1..=3, required = true)]
        args: Vec<i64>,
    },
    /// Fundamental solution of d^2 - p c^2 = 1.
    Pell { p: i64 },
    /// Dedekind sum s(h, k).
    #[command(allow_negative_numbers = true)]
    Dedekind { h: BigInt, k: BigInt },
}

impl GlobalOpts {
    fn verify_options(&self) -> VerifyOptions {
        let search_bound = self.search_bound.max(1);
        VerifyOptions {
            max_cf_steps: self.max_cf_steps,
            search_bound,
            max_search_bound: search_bound.saturating_mul(1 << 10),
        }
    }

    fn open_cache(&self) -> Result<Option<Cache>> {
        if self.no_cache {
            return Ok(None);
        }
        Ok(Some(Cache::open(&self.cache)?))
    }
}

/// Maps an error to the exit-code contract.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Consistency(_) | Error::Verification(_)) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let o = &cli.opts;
    match &cli.command {
        Command::Verify { p } => cmd_verify(*p, o, out),
        Command::Sweep { lo, hi, csv } => cmd_sweep(*lo, *hi, csv.as_ref(), o, out),
        Command::Examples => {
            let (text, ok) = run_examples()?;
            out.write_all(text.as_bytes())?;
            Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Cf { args } => cmd_cf(args, o, out),
        Command::Pell { p } => {
            let s = fundamental_pell(*p)?;
            writeln!(out, "d={} c={}", s.d, s.c)?;
            Ok(EXIT_OK)
        }
        Command::Dedekind { h, k } => {
            writeln!(out, "{}", dedekind_sum(h, k)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_verify(p: i64, o: &GlobalOpts, out: &mut dyn Write) -> Result<u8> {
    let mut cache = o.open_cache()?;
    let cached = cache.as_ref().and_then(|c| c.get(p).cloned());
    let hit = cached.is_some();
    let report = verify_with(p, &o.verify_options(), cached)?;
    if let (Some(c), false) = (cache.as_mut(), hit) {
        c.insert(&report.unit)?;
        c.flush()?;
    }
    if o.json {
        writeln!(out, "{}", ReportJson::from_report(&report, o.timing).to_json())?;
    } else {
        out.write_all(render_text(&report, o.timing).as_bytes())?;
    }
    Ok(if report.all_ok() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_sweep(
    lo: i64,
    hi: i64,
    csv: Option<&PathBuf>,
    o: &GlobalOpts,
    out: &mut dyn Write,
) -> Result<u8> {
    if lo <= 3 || lo > hi {
        bail!(Error::Domain(format!("sweep range needs 3 < lo <= hi, got [{lo}, {hi}]")));
    }
    let primes = sweep::sweep_primes(lo, hi);
    let jobs = o
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let mut csv = match csv {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(f);
            writeln!(w, "{CSV_HEADER}")?;
            Some(w)
        }
        None => None,
    };
    let mut cache = o.open_cache()?;
    let mut failed: Vec<(i64, String)> = Vec::new();
    let mut check_failure = false;
    sweep::run(&primes, &o.verify_options(), jobs, cache.as_mut(), |outcome| {
        match &outcome.result {
            Ok(r) => {
                if o.json {
                    writeln!(out, "{}", ReportJson::from_report(r, o.timing).to_json())?;
                } else {
                    writeln!(out, "{}", summary_line(r))?;
                }
                if let Some(w) = csv.as_mut() {
                    writeln!(w, "{}", csv_row(r, o.timing))?;
                }
                if !r.all_ok() {
                    check_failure = true;
                    failed.push((r.p, r.checks.failures().join(",")));
                }
            }
            Err(e) => {
                let err = anyhow::Error::from(e.clone());
                check_failure |= exit_code_for(&err) == EXIT_CHECK_FAILED;
                if !o.json {
                    writeln!(out, "p={} ERROR {e}", outcome.p)?;
                }
                failed.push((outcome.p, e.to_string()));
            }
        }
        Ok(())
    })?;
    if let Some(mut w) = csv {
        w.flush()?;
    }
    let mut summary = format!(
        "swept {} primes in [{lo}, {hi}]: {} passed, {} failed\n",
        primes.len(),
        primes.len() - failed.len(),
        failed.len()
    );
    for (p, why) in &failed {
        summary.push_str(&format!("  p={p}: {why}\n"));
    }
    if o.json {
        io::stderr().write_all(summary.as_bytes())?;
    } else {
        out.write_all(summary.as_bytes())?;
    }
    Ok(match (failed.is_empty(), check_failure) {
        (true, _) => EXIT_OK,
        (false, true) => EXIT_CHECK_FAILED,
        (false, false) => EXIT_USAGE,
    })
}

fn cmd_cf(args: &[i64], o: &GlobalOpts, out: &mut dyn Write) -> Result<u8> {
    let (a, b, p) = match *args {
        [p] => (0, 1, p),
        [a, b, p] => (a, b, p),
        _ => bail!(Error::Domain("cf takes either `p` or `a b p`".into())),
    };
    let x = QuadIrr::from_i64(a, b, p)?;
    let cf = neg_cf_with_limit(&x, o.max_cf_steps)?;
    if args.len() == 1 {
        writeln!(out, "{cf} m={}", m_from_period(&cf.period))?;
    } else {
        writeln!(out, "{cf}")?;
    }
    writeln!(out, "n={} period_length={}", cf.n(), cf.period.len())?;
    Ok(EXIT_OK)
}
