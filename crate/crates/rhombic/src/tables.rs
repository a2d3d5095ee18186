//! The exceptional-size appendix table and the MCD table, as CSV.

use std::collections::BTreeSet;

use rhombic_core::classnum::{mcd_with, McdRecord};
use rhombic_core::partition::{enumerate_min_witnesses, ExceptionKind, ExceptionRecord};
use rhombic_core::rhombic::rhombic_floor;
use rhombic_core::{CostTable, RhombicPartition};
use serde::Deserialize;

use crate::cache::ClassNumberCache;
use crate::{scan, CliError, Result};

/// Checked-in output of [`appendix_csv`] at the default limits.
pub const GOLDEN_APPENDIX: &str = include_str!("../golden/appendix.csv");
/// Checked-in output of [`mcd_csv`].
pub const GOLDEN_MCD: &str = include_str!("../golden/mcd.csv");
/// The published table transcribed as printed, including its misprints;
/// `strict` marks the sizes shown in bold.
pub const PUBLISHED_APPENDIX: &str = include_str!("../golden/appendix_published.csv");

/// Odd primes in the published MCD table.
pub const MCD_PRIMES: [u64; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixRow {
    pub n: u64,
    pub cost: u64,
    pub rhombic_floor: u64,
    pub strict: bool,
    pub ways: Vec<RhombicPartition>,
}

/// One row per exceptional size up to `scan_limit`, with every minimum-cost
/// partition.
pub fn appendix_rows(
    table: &CostTable,
    scan_limit: u64,
    witness_limit: u64,
    threads: usize,
) -> Result<Vec<AppendixRow>> {
    if table.limit() < scan_limit {
        return Err(CliError::Resource(format!(
            "appendix scan to {scan_limit} needs a cost table of that size, have {}",
            table.limit()
        )));
    }
    let records: Vec<ExceptionRecord> = scan::exception_scan(table, scan_limit, threads)?;
    records
        .into_iter()
        .map(|r| {
            Ok(AppendixRow {
                n: r.n,
                cost: r.exact_cost,
                rhombic_floor: rhombic_floor(r.n),
                strict: r.kind == ExceptionKind::Strict,
                ways: enumerate_min_witnesses(r.n, table, witness_limit)?,
            })
        })
        .collect()
}

pub fn join_ways(ways: &[RhombicPartition]) -> String {
    ways.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(";")
}

/// `n,cost,rhombic_floor,ways`, ways as `[a,b,..]` joined by `;`.
pub fn appendix_csv(rows: &[AppendixRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "cost", "rhombic_floor", "ways"])?;
    for r in rows {
        w.write_record([r.n.to_string(), r.cost.to_string(), r.rhombic_floor.to_string(), join_ways(&r.ways)])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Resource(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows of the MCD table for [`MCD_PRIMES`].
pub fn mcd_rows(classes: &mut ClassNumberCache, cap: u64) -> Result<Vec<McdRecord>> {
    MCD_PRIMES.iter().map(|&m| Ok(mcd_with(m, cap, |d| classes.get(d))?)).collect()
}

pub fn mcd_csv(rows: &[McdRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "D", "i", "h"])?;
    for r in rows {
        w.write_record([r.m.to_string(), r.d.to_string(), r.i.to_string(), r.h.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Resource(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A row of the published appendix; `ways` kept exactly as printed.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PublishedRow {
    pub n: u64,
    pub cost: u64,
    pub rhombic_floor: u64,
    #[serde(deserialize_with = "bool_from_int")]
    pub strict: bool,
    #[serde(deserialize_with = "ways_from_str")]
    pub ways: Vec<Vec<u64>>,
}

fn bool_from_int<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
    match u8::deserialize(d)? {
        0 => Ok(false),
        1 => Ok(true),
        v => Err(serde::de::Error::custom(format!("expected 0 or 1, got {v}"))),
    }
}

fn ways_from_str<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<u64>>, D::Error> {
    let s = String::deserialize(d)?;
    parse_ways(&s).map_err(serde::de::Error::custom)
}

/// Parses `[5,2,2];[4,4]`.
pub fn parse_ways(s: &str) -> std::result::Result<Vec<Vec<u64>>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|w| {
            let inner = w
                .trim()
                .strip_prefix('[')
                .and_then(|w| w.strip_suffix(']'))
                .ok_or_else(|| format!("malformed partition {w:?}"))?;
            inner
                .split(',')
                .map(|p| p.trim().parse::<u64>().map_err(|e| format!("{p:?}: {e}")))
                .collect()
        })
        .collect()
}

pub fn published_rows() -> Result<Vec<PublishedRow>> {
    csv::Reader::from_reader(PUBLISHED_APPENDIX.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<PublishedRow>, _>>()
        .map_err(|e| CliError::format("appendix_published.csv", e))
}

/// Parses the output of [`appendix_csv`].
pub fn parse_appendix_csv(text: &str) -> Result<Vec<(u64, u64, u64, Vec<Vec<u64>>)>> {
    let mut out = Vec::new();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::format("appendix.csv", e))?;
        let num = |i: usize| -> Result<u64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::format("appendix.csv", format!("bad field {i}")))
        };
        let ways = parse_ways(rec.get(3).unwrap_or("")).map_err(|e| CliError::format("appendix.csv", e))?;
        out.push((num(0)?, num(1)?, num(2)?, ways));
    }
    Ok(out)
}

/// Sum of `s(s-1)` over the parts.
pub fn pair_count(parts: &[u64]) -> u64 {
    parts.iter().map(|&s| s * (s.saturating_sub(1))).sum()
}

pub fn part_cost(parts: &[u64]) -> u64 {
    parts.iter().map(|&s| s.saturating_sub(1)).sum()
}

pub fn ways_set(ways: &[RhombicPartition]) -> BTreeSet<Vec<u64>> {
    ways.iter().map(|w| w.parts().to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ways_examples() {
        assert_eq!(parse_ways("[5,2,2];[4,4]").unwrap(), vec![vec![5, 2, 2], vec![4, 4]]);
        assert_eq!(parse_ways("[47,14]").unwrap(), vec![vec![47, 14]]);
        assert!(parse_ways("[5,2").is_err());
    }

    #[test]
    fn published_table_shape() {
        let rows = published_rows().unwrap();
        assert_eq!(rows.len(), 51);
        let strict: Vec<u64> = rows.iter().filter(|r| r.strict).map(|r| r.n).collect();
        assert_eq!(strict, [40, 238, 922, 1188, 2344]);
    }

    #[test]
    fn small_appendix_rows() {
        let t = CostTable::build(200).unwrap();
        let rows = appendix_rows(&t, 130, 200, 2).unwrap();
        let csv = appendix_csv(&rows).unwrap();
        let expected_head = "n,cost,rhombic_floor,ways\n24,6,5,\"[5,2,2];[4,4]\"\n40,8,6,\"[5,5]\"\n";
        assert!(csv.starts_with(expected_head), "{csv}");
        assert!(csv.contains("120,14,11,\"[11,3,2,2];[10,6]\"\n"));
        assert!(GOLDEN_APPENDIX.starts_with(expected_head));
    }
}
