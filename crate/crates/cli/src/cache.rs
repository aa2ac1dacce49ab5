//! Append-only JSONL cache of fundamental units and `sqrt p` periods.
//!
//! Each line is one [`CacheRecord`]. Lines that fail to parse or validate are
//! skipped with a warning; the first valid record for a prime wins.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use class16_core::{PellSolution, UnitData};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema: u32,
    pub p: i64,
    pub d: String,
    pub c: String,
    /// Run-length pairs `[b, count]` of the period of `sqrt p`.
    pub period: Vec<[u64; 2]>,
}

impl CacheRecord {
    pub fn from_unit(u: &UnitData) -> Self {
        let mut period: Vec<[u64; 2]> = Vec::new();
        for b in &u.period {
            let b = u64::try_from(b).expect("partial quotient fits in u64");
            match period.last_mut() {
                Some([v, n]) if *v == b => *n += 1,
                _ => period.push([b, 1]),
            }
        }
        Self {
            schema: SCHEMA,
            p: u.pell.p,
            d: u.pell.d.to_str_radix(10),
            c: u.pell.c.to_str_radix(10),
            period,
        }
    }

    /// Rebuilds the unit data, checking `d^2 - p c^2 = 1` and that the
    /// period reproduces `(d, c)`.
    pub fn to_unit(&self) -> Result<UnitData> {
        anyhow::ensure!(self.schema == SCHEMA, "unknown schema {}", self.schema);
        let d: BigInt = self.d.parse().context("bad d")?;
        let c: BigInt = self.c.parse().context("bad c")?;
        let pell = PellSolution::new(self.p, d, c)?;
        let period = self
            .period
            .iter()
            .flat_map(|&[b, n]| std::iter::repeat_n(BigInt::from(b), n as usize))
            .collect();
        let unit = UnitData { pell, period };
        unit.validate()?;
        Ok(unit)
    }
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: HashMap<i64, UnitData>,
    writer: Option<BufWriter<File>>,
}

impl Cache {
    /// Loads `path` if it exists. Warnings for skipped lines go to stderr.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        match File::open(path) {
            Ok(f) => {
                for (i, line) in BufReader::new(f).lines().enumerate() {
                    let line = line.with_context(|| format!("reading {}", path.display()))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let parsed = serde_json::from_str::<CacheRecord>(&line)
                        .map_err(anyhow::Error::from)
                        .and_then(|r| r.to_unit());
                    match parsed {
                        Ok(u) => {
                            entries.entry(u.pell.p).or_insert(u);
                        }
                        Err(e) => eprintln!(
                            "warning: {}:{}: skipping cache line: {e:#}",
                            path.display(),
                            i + 1
                        ),
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
            writer: None,
        })
    }

    pub fn get(&self, p: i64) -> Option<&UnitData> {
        self.entries.get(&p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends a record unless `p` is already cached.
    pub fn insert(&mut self, unit: &UnitData) -> Result<()> {
        if self.entries.contains_key(&unit.pell.p) {
            return Ok(());
        }
        if self.writer.is_none() {
            let f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(&self.path)
                .with_context(|| format!("opening {} for append", self.path.display()))?;
            self.writer = Some(BufWriter::new(f));
        }
        let w = self.writer.as_mut().expect("writer just opened");
        serde_json::to_writer(&mut *w, &CacheRecord::from_unit(unit))?;
        w.write_all(b"\n")?;
        self.entries.insert(unit.pell.p, unit.clone());
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        if let Some(w) = self.writer.as_mut() {
            w.flush()?;
        }
        Ok(())
    }
}

impl Drop for Cache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}
