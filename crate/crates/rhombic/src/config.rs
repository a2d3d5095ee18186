use std::path::PathBuf;

use clap::ValueEnum;
use rhombic_core::partition::{DEFAULT_TABLE_LIMIT, DEFAULT_WITNESS_LIMIT, GREEDY_CROSSOVER};

use crate::{CliError, Result};

/// Largest size scanned for exceptional sizes by default.
pub const DEFAULT_SCAN_LIMIT: u64 = 30_000;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub const DEFAULT_CACHE_DIR: &str = ".rhombic-cache";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub cache_dir: PathBuf,
    /// Largest cost table the tool will build or load.
    pub table_limit: u64,
    pub witness_limit: u64,
    pub scan_limit: u64,
    pub format: OutputFormat,
    pub seed: u64,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            table_limit: DEFAULT_TABLE_LIMIT,
            witness_limit: DEFAULT_WITNESS_LIMIT,
            scan_limit: DEFAULT_SCAN_LIMIT,
            format: OutputFormat::Text,
            seed: DEFAULT_SEED,
            threads: default_threads(),
        }
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get()).min(16)
}

impl Config {
    /// Checked before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.table_limit < GREEDY_CROSSOVER {
            return Err(CliError::Input(format!(
                "--table-limit {} is below the greedy crossover {GREEDY_CROSSOVER}",
                self.table_limit
            )));
        }
        if self.scan_limit > self.table_limit {
            return Err(CliError::Input(format!(
                "scan limit {} exceeds --table-limit {}",
                self.scan_limit, self.table_limit
            )));
        }
        if self.witness_limit > self.table_limit {
            return Err(CliError::Input(format!(
                "witness limit {} exceeds --table-limit {}",
                self.witness_limit, self.table_limit
            )));
        }
        if self.threads == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Table size needed to answer `cost(n)`: the whole range when `n` fits,
    /// otherwise just enough for the greedy descent.
    pub fn table_for(&self, n: Option<u64>) -> u64 {
        match n {
            Some(n) if n <= self.table_limit => n.max(GREEDY_CROSSOVER),
            _ => GREEDY_CROSSOVER,
        }
    }
}
