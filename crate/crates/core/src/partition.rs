//! Minimum cost of equivalence relations of a given size.
//!
//! An equivalence relation whose non-singleton classes have sizes
//! `s_1 >= s_2 >= ... >= s_k` has *size* `sum s_i(s_i - 1)` (ordered pairs of
//! distinct equivalent elements) and *cost* `sum (s_i - 1)` (image values lost
//! by a function inducing it). `cost(n)` is the least cost over all relations
//! of size `n`; it is an unbounded knapsack over the rhombic part sizes
//! `t(t-1)`.
//!
//! Small sizes are answered from a dense [`CostTable`]. Large sizes descend
//! greedily, removing a class of size [`rhombic_floor`] at each step, until the
//! residual falls inside the table. The greedy step is exact for every size
//! except the five in [`STRICT_EXCEPTIONS`], all of which sit far below
//! [`GREEDY_CROSSOVER`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, resource};
use crate::rhombic::{rhombic, rhombic_big, rhombic_floor, rhombic_floor_big};
use crate::Result;

/// Sizes where a minimum-cost relation cannot contain a class of size
/// `rhombic_floor(n)`; there the greedy total overshoots by exactly one.
pub const STRICT_EXCEPTIONS: [u64; 5] = [40, 238, 922, 1188, 2344];

/// Smallest table limit for which greedy descent is allowed to hand the
/// residual to the table. Every exceptional size lies below it.
pub const GREEDY_CROSSOVER: u64 = 30_000;

/// Default dense table size.
pub const DEFAULT_TABLE_LIMIT: u64 = 3_000_000;

/// Default allowance for the dense table (two `u16` per even size).
pub const DEFAULT_MEMORY_BUDGET: usize = 64 << 20;

/// Default cap for witness enumeration.
pub const DEFAULT_WITNESS_LIMIT: u64 = 25_000;

/// Multiset of class sizes, stored non-increasing, every part at least 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RhombicPartition {
    parts: Vec<u64>,
}

impl RhombicPartition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = parts.iter().find(|&&s| s < 2) {
            return Err(invalid!("class size {bad} is below 2"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// `sum s(s-1)`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&s| rhombic(s)).sum()
    }

    /// `sum (s-1)`.
    pub fn cost(&self) -> u64 {
        self.parts.iter().map(|&s| s - 1).sum()
    }

    pub fn largest(&self) -> Option<u64> {
        self.parts.first().copied()
    }
}

impl fmt::Display for RhombicPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

fn require_even(n: u64) -> Result<()> {
    if n % 2 == 1 {
        return Err(invalid!(
            "size {n} is odd; every equivalence class contributes an even number of pairs"
        ));
    }
    Ok(())
}

/// Dense exact `cost(n)` for every even `n` up to `limit`, together with the
/// largest part of the lexicographically greatest optimal partition.
#[derive(Clone, PartialEq, Eq)]
pub struct CostTable {
    limit: u64,
    cost: Vec<u16>,
    first_part: Vec<u16>,
}

impl fmt::Debug for CostTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostTable").field("limit", &self.limit).finish_non_exhaustive()
    }
}

impl CostTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_budget(limit, DEFAULT_MEMORY_BUDGET)
    }

    pub fn build_with_budget(limit: u64, budget_bytes: usize) -> Result<Self> {
        let limit = limit & !1;
        let entries = Self::entries_for(limit, budget_bytes)?;
        let mut cost = vec![0u16; entries];
        let mut first_part = vec![0u16; entries];
        for half in 1..entries {
            let n = 2 * half as u64;
            let mut best = u32::MAX;
            let mut best_t = 0;
            // Descending t, strict improvement: ties keep the largest part.
            let mut t = rhombic_floor(n);
            while t >= 2 {
                let rest = n - rhombic(t);
                let c = (t - 1) as u32 + cost[(rest / 2) as usize] as u32;
                if c < best {
                    best = c;
                    best_t = t;
                }
                t -= 1;
            }
            cost[half] = best as u16;
            first_part[half] = best_t as u16;
        }
        Ok(Self { limit, cost, first_part })
    }

    fn entries_for(limit: u64, budget_bytes: usize) -> Result<usize> {
        let entries = limit / 2 + 1;
        let bytes = entries.saturating_mul(4);
        if bytes > budget_bytes as u64 {
            return Err(resource!(
                "cost table to {limit} needs {bytes} bytes, budget is {budget_bytes}"
            ));
        }
        // u16 storage holds every cost and part well past 10^9.
        if limit > 4_000_000_000 {
            return Err(resource!("cost table limit {limit} exceeds 16-bit storage"));
        }
        Ok(entries as usize)
    }

    /// Rebuild from stored columns (one entry per even `n` in `0..=limit`).
    /// Checks the recurrence on every entry.
    pub fn from_columns(limit: u64, cost: Vec<u16>, first_part: Vec<u16>) -> Result<Self> {
        let limit = limit & !1;
        let entries = (limit / 2 + 1) as usize;
        if cost.len() != entries || first_part.len() != entries {
            return Err(invalid!(
                "expected {entries} entries for limit {limit}, got {} and {}",
                cost.len(),
                first_part.len()
            ));
        }
        if cost[0] != 0 || first_part[0] != 0 {
            return Err(invalid!("entry for n = 0 must be (0, 0)"));
        }
        for half in 1..entries {
            let n = 2 * half as u64;
            let t = first_part[half] as u64;
            if t < 2 || rhombic(t) > n {
                return Err(invalid!("first part {t} is not admissible for n = {n}"));
            }
            let rest = ((n - rhombic(t)) / 2) as usize;
            if cost[half] as u64 != t - 1 + cost[rest] as u64 {
                return Err(invalid!("stored cost for n = {n} does not match its first part"));
            }
        }
        Ok(Self { limit, cost, first_part })
    }

    /// Largest even size covered.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `cost(n)` for even `n <= limit`.
    pub fn get(&self, n: u64) -> Option<u64> {
        if n % 2 == 1 || n > self.limit {
            return None;
        }
        Some(self.cost[(n / 2) as usize] as u64)
    }

    pub fn first_part(&self, n: u64) -> Option<u64> {
        if n % 2 == 1 || n > self.limit {
            return None;
        }
        Some(self.first_part[(n / 2) as usize] as u64)
    }

    pub fn cost_column(&self) -> &[u16] {
        &self.cost
    }

    pub fn first_part_column(&self) -> &[u16] {
        &self.first_part
    }

    /// Unchecked lookup for hot loops; `n` must be even and in range.
    #[inline]
    fn at(&self, n: u64) -> u64 {
        self.cost[(n / 2) as usize] as u64
    }

    fn lookup(&self, n: u64) -> Result<u64> {
        require_even(n)?;
        self.get(n)
            .ok_or_else(|| resource!("n = {n} exceeds the cost table limit {}", self.limit))
    }
}

/// Exact `cost(n)` for any even `n`.
pub fn cost(n: &BigUint, table: &CostTable) -> Result<BigUint> {
    if n.bit(0) {
        return Err(invalid!(
            "size {n} is odd; every equivalence class contributes an even number of pairs"
        ));
    }
    let mut residual = n.clone();
    let mut total = BigUint::zero();
    loop {
        if let Some(small) = residual.to_u64().filter(|&r| r <= table.limit()) {
            return Ok(total + table.at(small));
        }
        if table.limit() < GREEDY_CROSSOVER {
            return Err(resource!(
                "greedy descent needs a cost table of at least {GREEDY_CROSSOVER}, have {}",
                table.limit()
            ));
        }
        let t = rhombic_floor_big(&residual);
        residual -= rhombic_big(&t);
        total += t - 1u32;
    }
}

pub fn cost_u64(n: u64, table: &CostTable) -> Result<u64> {
    if n <= table.limit() {
        return table.lookup(n);
    }
    let c = cost(&BigUint::from(n), table)?;
    Ok(c.to_u64().expect("cost of a u64 size fits in u64"))
}

/// `B_k = cost(2k)`: the least weight of a triangular-number sum for `k`.
pub fn b(k: u64, table: &CostTable) -> Result<u64> {
    let n = k.checked_mul(2).ok_or_else(|| invalid!("k = {k} is too large"))?;
    cost_u64(n, table)
}

/// Least cost over relations of size `n` with exactly `k` non-singleton
/// classes; `None` when no such relation exists.
pub fn cost_with_k_classes(n: u64, k: u64) -> Result<Option<u64>> {
    require_even(n)?;
    if k == 0 {
        return Err(invalid!("k must be at least 1"));
    }
    if 2 * k > n {
        return Ok(None);
    }
    const NONE: u32 = u32::MAX;
    let entries = (n / 2 + 1) as usize;
    // row[m/2] = least cost of m using exactly j parts
    let mut row = vec![NONE; entries];
    row[0] = 0;
    let parts: Vec<u64> = (2..=rhombic_floor(n)).collect();
    for _ in 0..k {
        let mut next = vec![NONE; entries];
        for (half, slot) in next.iter_mut().enumerate() {
            let m = 2 * half as u64;
            for &t in &parts {
                let r = rhombic(t);
                if r > m {
                    break;
                }
                let prev = row[((m - r) / 2) as usize];
                if prev != NONE {
                    *slot = (*slot).min(prev + (t - 1) as u32);
                }
            }
        }
        row = next;
    }
    let c = row[entries - 1];
    Ok((c != NONE).then_some(c as u64))
}

/// One step-by-step record of the greedy descent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyTrace {
    pub n: BigUint,
    /// `e_j = rhombic_floor(n_j)`.
    pub sizes: Vec<BigUint>,
    /// `n_j = n - sum_{i<j} e_i(e_i - 1)`; the residual before step `j`.
    pub residuals: Vec<BigUint>,
    pub greedy_cost: BigUint,
    pub exact_cost: BigUint,
    /// First residual that is a strict exception, if any.
    pub exception_hit: Option<u64>,
}

pub fn greedy_sequence(n: &BigUint, table: &CostTable) -> Result<GreedyTrace> {
    let exact_cost = cost(n, table)?;
    let mut sizes = Vec::new();
    let mut residuals = Vec::new();
    let mut greedy_cost = BigUint::zero();
    let mut exception_hit = None;
    let mut residual = n.clone();
    while !residual.is_zero() {
        if exception_hit.is_none() {
            exception_hit = residual.to_u64().filter(|r| STRICT_EXCEPTIONS.contains(r));
        }
        let e = rhombic_floor_big(&residual);
        residuals.push(residual.clone());
        residual -= rhombic_big(&e);
        greedy_cost += &e - 1u32;
        sizes.push(e);
    }
    Ok(GreedyTrace { n: n.clone(), sizes, residuals, greedy_cost, exact_cost, exception_hit })
}

/// All minimum-cost partitions of `n`, lexicographically descending.
pub fn enumerate_min_witnesses(
    n: u64,
    table: &CostTable,
    witness_limit: u64,
) -> Result<Vec<RhombicPartition>> {
    require_even(n)?;
    if n > witness_limit {
        return Err(resource!("witness enumeration is capped at {witness_limit}, asked for {n}"));
    }
    let target = table.lookup(n)?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    collect_witnesses(table, n, rhombic_floor(n), target, &mut stack, &mut out);
    Ok(out)
}

fn collect_witnesses(
    table: &CostTable,
    rest: u64,
    max_part: u64,
    budget: u64,
    stack: &mut Vec<u64>,
    out: &mut Vec<RhombicPartition>,
) {
    if rest == 0 {
        if budget == 0 {
            out.push(RhombicPartition { parts: stack.clone() });
        }
        return;
    }
    let top = max_part.min(rhombic_floor(rest));
    for s in (2..=top).rev() {
        let after = rest - rhombic(s);
        // Unrestricted cost is a lower bound for the bounded remainder.
        if s - 1 + table.at(after) == budget {
            stack.push(s);
            collect_witnesses(table, after, s, budget - (s - 1), stack, out);
            stack.pop();
        }
    }
}

/// Whether `rest` can be split with cost exactly `budget` using parts no
/// larger than `max_part`. `budget` must equal the unrestricted optimum or be
/// larger than it.
fn bounded_witness_exists(table: &CostTable, rest: u64, max_part: u64, budget: u64) -> bool {
    if rest == 0 {
        return budget == 0;
    }
    let top = max_part.min(rhombic_floor(rest));
    (2..=top).rev().any(|s| {
        let after = rest - rhombic(s);
        s - 1 + table.at(after) == budget
            && bounded_witness_exists(table, after, s, budget - (s - 1))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExceptionKind {
    /// Every relation with a class of size `rhombic_floor(n)` costs one more
    /// than the optimum.
    Strict,
    /// The optimum is reachable both with and without a maximal class.
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExceptionRecord {
    pub n: u64,
    pub exact_cost: u64,
    /// Least cost among relations that contain a class of size
    /// `rhombic_floor(n)`.
    pub greedy_max_cost: u64,
    pub kind: ExceptionKind,
}

/// Every even `n <= limit` with a minimum-cost partition whose largest part
/// is below `rhombic_floor(n)`.
pub fn exception_scan(table: &CostTable, limit: u64) -> Result<Vec<ExceptionRecord>> {
    exception_scan_range(table, 0, limit)
}

/// [`exception_scan`] restricted to `lo <= n <= hi`; disjoint ranges can be
/// scanned independently and concatenated.
pub fn exception_scan_range(table: &CostTable, lo: u64, hi: u64) -> Result<Vec<ExceptionRecord>> {
    if hi > table.limit() {
        return Err(resource!("scan to {hi} exceeds the cost table limit {}", table.limit()));
    }
    let mut out = Vec::new();
    let start = (lo.max(2) + 1) & !1;
    let mut n = start;
    while n <= hi {
        if let Some(record) = classify_size(table, n) {
            out.push(record);
        }
        n += 2;
    }
    Ok(out)
}

/// Classification of a single even `n` within the table.
pub fn exception_record(table: &CostTable, n: u64) -> Result<Option<ExceptionRecord>> {
    table.lookup(n)?;
    Ok(if n < 2 { None } else { classify_size(table, n) })
}

fn classify_size(table: &CostTable, n: u64) -> Option<ExceptionRecord> {
    let floor = rhombic_floor(n);
    let exact = table.at(n);
    let greedy_max = floor - 1 + table.at(n - rhombic(floor));
    if exact < greedy_max {
        return Some(ExceptionRecord {
            n,
            exact_cost: exact,
            greedy_max_cost: greedy_max,
            kind: ExceptionKind::Strict,
        });
    }
    if floor > 2 && bounded_witness_exists(table, n, floor - 1, exact) {
        return Some(ExceptionRecord {
            n,
            exact_cost: exact,
            greedy_max_cost: greedy_max,
            kind: ExceptionKind::Tie,
        });
    }
    None
}

/// `(sqrt(n) - 1, (-3 + sqrt(9 + 12n)) / 2)`, which strictly below and weakly
/// above bracket `cost(n)` for even `n >= 2`.
pub fn cost_bounds(n: u64) -> Result<(f64, f64)> {
    require_even(n)?;
    if n < 2 {
        return Err(invalid!("cost bounds need n >= 2"));
    }
    let x = n as f64;
    Ok((libm::sqrt(x) - 1.0, (-3.0 + libm::sqrt(9.0 + 12.0 * x)) / 2.0))
}
