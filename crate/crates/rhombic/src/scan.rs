//! Range-partitioned scans over a shared, immutable cost table.

use std::thread;

use rhombic_core::partition::{exception_scan_range, ExceptionRecord};
use rhombic_core::CostTable;

use crate::Result;

/// Splits `[lo, hi]` into `parts` contiguous even-aligned chunks.
pub fn chunks(lo: u64, hi: u64, parts: usize) -> Vec<(u64, u64)> {
    if hi < lo {
        return Vec::new();
    }
    let parts = parts.max(1) as u64;
    let width = ((hi - lo) / parts + 2) & !1;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = start.saturating_add(width - 1).min(hi);
        out.push((start, end));
        if end == hi {
            break;
        }
        start = end + 1;
    }
    out
}

/// [`exception_scan_range`] over `[2, limit]` on `threads` workers; the
/// output is identical to the sequential scan.
pub fn exception_scan(table: &CostTable, limit: u64, threads: usize) -> Result<Vec<ExceptionRecord>> {
    // Per-size work grows with n, so use more chunks than threads.
    let ranges = chunks(2, limit, threads * 8);
    let mut results: Vec<Result<Vec<ExceptionRecord>>> = Vec::with_capacity(ranges.len());
    thread::scope(|s| {
        let per_worker: Vec<Vec<(usize, (u64, u64))>> = (0..threads.max(1))
            .map(|w| ranges.iter().copied().enumerate().skip(w).step_by(threads.max(1)).collect())
            .collect();
        let handles: Vec<_> = per_worker
            .into_iter()
            .map(|jobs| {
                s.spawn(move || {
                    jobs.into_iter()
                        .map(|(i, (lo, hi))| (i, exception_scan_range(table, lo, hi).map_err(Into::into)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut indexed: Vec<(usize, Result<Vec<ExceptionRecord>>)> =
            handles.into_iter().flat_map(|h| h.join().expect("scan worker panicked")).collect();
        indexed.sort_by_key(|(i, _)| *i);
        results.extend(indexed.into_iter().map(|(_, r)| r));
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rhombic_core::partition::exception_scan as sequential;

    #[test]
    fn chunks_cover_range() {
        for (lo, hi, parts) in [(2, 30_000, 7), (2, 2, 4), (2, 10, 64), (5, 9, 2)] {
            let c = chunks(lo, hi, parts);
            assert_eq!(c.first().unwrap().0, lo);
            assert_eq!(c.last().unwrap().1, hi);
            for w in c.windows(2) {
                assert_eq!(w[0].1 + 1, w[1].0);
            }
        }
        assert!(chunks(5, 4, 3).is_empty());
    }

    #[test]
    fn parallel_matches_sequential() {
        let t = CostTable::build(5000).unwrap();
        assert_eq!(exception_scan(&t, 5000, 3).unwrap(), sequential(&t, 5000).unwrap());
    }
}
