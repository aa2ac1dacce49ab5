//! Parallel verification over a range of primes with ordered output.

use std::collections::BTreeMap;
use std::sync::mpsc;

use anyhow::Result;
use class16_core::numeric::is_prime;
use class16_core::{verify_with, Error, PrimeReport, UnitData, VerifyOptions};
use rayon::prelude::*;

use crate::cache::Cache;

/// Primes `p = 3 (mod 4)` with `p > 3` in `[lo, hi]`.
pub fn sweep_primes(lo: i64, hi: i64) -> Vec<i64> {
    let start = lo.max(7);
    let first = start + (3 - start).rem_euclid(4);
    (first..=hi)
        .step_by(4)
        .filter(|&p| is_prime(p as u64))
        .collect()
}

/// Outcome for one prime, in sweep order.
pub struct Outcome {
    pub p: i64,
    pub result: std::result::Result<PrimeReport, Error>,
    /// Unit data computed in this run that was not in the cache.
    pub fresh_unit: Option<UnitData>,
}

/// Verifies every prime in `primes` on a pool of `jobs` threads and calls
/// `emit` on each outcome in input order from the calling thread.
pub fn run<F>(
    primes: &[i64],
    opts: &VerifyOptions,
    jobs: usize,
    cache: Option<&mut Cache>,
    mut emit: F,
) -> Result<()>
where
    F: FnMut(&Outcome) -> Result<()>,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let cached: Vec<Option<UnitData>> = match &cache {
        Some(c) => primes.iter().map(|&p| c.get(p).cloned()).collect(),
        None => vec![None; primes.len()],
    };
    let (tx, rx) = mpsc::channel::<(usize, Outcome)>();
    let mut cache = cache;
    std::thread::scope(|scope| -> Result<()> {
        let cached = &cached;
        scope.spawn(move || {
            pool.install(|| {
                primes.par_iter().enumerate().for_each_with(tx, |tx, (i, &p)| {
                    let from_cache = cached[i].clone();
                    let hit = from_cache.is_some();
                    let result = verify_with(p, opts, from_cache);
                    let fresh_unit = match (&result, hit) {
                        (Ok(r), false) => Some(r.unit.clone()),
                        _ => None,
                    };
                    let _ = tx.send((i, Outcome { p, result, fresh_unit }));
                });
            });
        });
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, outcome) in rx {
            pending.insert(i, outcome);
            while let Some(o) = pending.remove(&next) {
                if let (Some(c), Some(u)) = (cache.as_deref_mut(), &o.fresh_unit) {
                    c.insert(u)?;
                }
                emit(&o)?;
                next += 1;
            }
        }
        Ok(())
    })?;
    if let Some(c) = cache {
        c.flush()?;
    }
    Ok(())
}
