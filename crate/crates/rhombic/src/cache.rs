//! On-disk caches under `--cache-dir`.
//!
//! * `cost_table.csv` (`n,cost,first_part`, even `n` only) with
//!   `cost_table.meta.json` (`{"limit": .., "format_version": 1}`).
//! * `classnum.csv` (`D,h`), append-only.
//!
//! A cache that fails to parse or validate is ignored and rebuilt. Failing
//! to write one is reported on stderr and otherwise harmless.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rhombic_core::classnum::class_number;
use rhombic_core::partition::DEFAULT_MEMORY_BUDGET;
use rhombic_core::CostTable;
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

pub const COST_TABLE_FILE: &str = "cost_table.csv";
pub const COST_TABLE_META: &str = "cost_table.meta.json";
pub const CLASSNUM_FILE: &str = "classnum.csv";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub limit: u64,
    pub format_version: u32,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// A cost table covering at least `needed`, from disk when possible.
    pub fn cost_table(&self, needed: u64) -> Result<CostTable> {
        if let Some(t) = self.load_cost_table(needed) {
            return Ok(t);
        }
        let table = CostTable::build_with_budget(needed, DEFAULT_MEMORY_BUDGET)?;
        if let Err(e) = self.store_cost_table(&table) {
            eprintln!("warning: cost table not cached: {e}");
        }
        Ok(table)
    }

    fn load_cost_table(&self, needed: u64) -> Option<CostTable> {
        let meta_path = self.path(COST_TABLE_META);
        let meta: TableMeta = serde_json::from_slice(&fs::read(&meta_path).ok()?).ok()?;
        if meta.format_version != FORMAT_VERSION || meta.limit < needed {
            return None;
        }
        match read_cost_csv(&self.path(COST_TABLE_FILE), meta.limit) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("warning: ignoring cost table cache: {e}");
                None
            }
        }
    }

    pub fn store_cost_table(&self, table: &CostTable) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        let csv_path = self.path(COST_TABLE_FILE);
        write_atomic(&csv_path, |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["n", "cost", "first_part"])?;
            let costs = table.cost_column();
            let parts = table.first_part_column();
            for (half, (c, p)) in costs.iter().zip(parts).enumerate() {
                out.write_record([(2 * half).to_string(), c.to_string(), p.to_string()])?;
            }
            out.flush()?;
            Ok(())
        })?;
        let meta = TableMeta { limit: table.limit(), format_version: FORMAT_VERSION };
        write_atomic(&self.path(COST_TABLE_META), |w| {
            serde_json::to_writer(&mut *w, &meta).map_err(std::io::Error::other)?;
            w.write_all(b"\n")
        })
    }

    pub fn class_numbers(&self) -> Result<ClassNumberCache> {
        ClassNumberCache::open(self.path(CLASSNUM_FILE))
    }

    /// Removes every cache file this tool writes.
    pub fn clear(&self) -> Result<()> {
        for name in [COST_TABLE_FILE, COST_TABLE_META, CLASSNUM_FILE] {
            let p = self.path(name);
            match fs::remove_file(&p) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(CliError::io(p, e)),
            }
        }
        Ok(())
    }
}

fn read_cost_csv(path: &Path, limit: u64) -> Result<CostTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::format(path, e))?;
    let entries = (limit / 2 + 1) as usize;
    let mut cost = Vec::with_capacity(entries);
    let mut first = Vec::with_capacity(entries);
    let mut record = csv::ByteRecord::new();
    while reader.read_byte_record(&mut record).map_err(|e| CliError::format(path, e))? {
        let field = |i: usize| -> Result<u64> {
            let raw = record.get(i).ok_or_else(|| CliError::format(path, "short row"))?;
            std::str::from_utf8(raw)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::format(path, "non-numeric field"))
        };
        if field(0)? != 2 * cost.len() as u64 {
            return Err(CliError::format(path, "rows out of order"));
        }
        let to16 = |v: u64| u16::try_from(v).map_err(|_| CliError::format(path, "value exceeds 16 bits"));
        cost.push(to16(field(1)?)?);
        first.push(to16(field(2)?)?);
    }
    if cost.len() != entries {
        return Err(CliError::format(path, format!("expected {entries} rows, found {}", cost.len())));
    }
    CostTable::from_columns(limit, cost, first).map_err(|e| CliError::format(path, e))
}

/// Writes through a sibling temporary file and renames it into place.
fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let file = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(&tmp, e))?;
    drop(w);
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Resource(e.to_string())
    }
}

/// Class numbers keyed by `D`, backed by an append-only CSV.
#[derive(Debug)]
pub struct ClassNumberCache {
    path: PathBuf,
    known: BTreeMap<u64, u64>,
    pending: Vec<(u64, u64)>,
}

impl ClassNumberCache {
    pub fn open(path: PathBuf) -> Result<Self> {
        let mut known = BTreeMap::new();
        if path.exists() {
            match read_classnum_csv(&path) {
                Ok(rows) => known.extend(rows),
                Err(e) => eprintln!("warning: ignoring class number cache: {e}"),
            }
        }
        Ok(Self { path, known, pending: Vec::new() })
    }

    /// An in-memory cache that never touches disk.
    pub fn ephemeral() -> Self {
        Self { path: PathBuf::new(), known: BTreeMap::new(), pending: Vec::new() }
    }

    pub fn get(&mut self, d: u64) -> rhombic_core::Result<u64> {
        if let Some(&h) = self.known.get(&d) {
            return Ok(h);
        }
        let h = class_number(d)?;
        self.known.insert(d, h);
        self.pending.push((d, h));
        Ok(h)
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    /// Appends values computed since the last flush.
    pub fn flush(&mut self) -> Result<()> {
        if self.pending.is_empty() || self.path.as_os_str().is_empty() {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        let fresh = !self.path.exists();
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| CliError::io(&self.path, e))?;
        let mut w = BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            if fresh {
                writeln!(w, "D,h")?;
            }
            for (d, h) in &self.pending {
                writeln!(w, "{d},{h}")?;
            }
            w.flush()
        };
        write().map_err(|e| CliError::io(&self.path, e))?;
        self.pending.clear();
        Ok(())
    }
}

impl Drop for ClassNumberCache {
    fn drop(&mut self) {
        if let Err(e) = self.flush() {
            eprintln!("warning: class numbers not cached: {e}");
        }
    }
}

fn read_classnum_csv(path: &Path) -> Result<Vec<(u64, u64)>> {
    #[derive(Deserialize)]
    struct Row {
        #[serde(rename = "D")]
        d: u64,
        h: u64,
    }
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::format(path, e))?;
    reader
        .deserialize::<Row>()
        .map(|r| r.map(|r| (r.d, r.h)).map_err(|e| CliError::format(path, e)))
        .collect()
}
