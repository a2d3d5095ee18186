//! Exhaustive desk-scale searches for `x^2 + D = 4y^n`, `x^2 + x + 1 = y^n`
//! and the two cubic Thue equations, plus the reduction helpers used when a
//! prime divides `D`.
//!
//! Perfect squares are detected by exact integer square root only.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::{gcd, Integer};
use num_traits::{One, Pow, ToPrimitive};

use crate::classnum::factorize;
use crate::error::invalid;
use crate::rhombic::{exact_sqrt, solve_rhombic};
use crate::Result;

/// Searches stop raising `y^n` once it needs more bits than this.
pub const DEFAULT_BIT_BUDGET: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LrnSolution {
    pub d: u64,
    pub x: BigUint,
    pub y: u64,
    pub n: u32,
    /// `gcd(x, y) = 1`.
    pub coprime: bool,
}

impl LrnSolution {
    /// `x^2 + D = 4 y^n`, recomputed from scratch.
    pub fn verify(&self) -> bool {
        &self.x * &self.x + self.d == (BigUint::from(self.y).pow(self.n) << 2u32)
    }
}

/// Every `x^2 + D = 4y^n` with odd `3 <= y <= y_max`, odd `3 <= n <= n_max`,
/// `x >= 1`. Non-coprime hits are kept (and tagged) unless `require_coprime`.
pub fn lrn_search(
    d: u64,
    y_max: u64,
    n_max: u32,
    require_coprime: bool,
    bit_budget: u64,
) -> Result<Vec<LrnSolution>> {
    if d % 8 != 3 {
        return Err(invalid!("D = {d} is not 3 mod 8"));
    }
    let mut out = Vec::new();
    for y in (3..=y_max).step_by(2) {
        lrn_search_y(d, y, n_max, bit_budget, &mut out);
    }
    if require_coprime {
        out.retain(|s| s.coprime);
    }
    out.sort();
    Ok(out)
}

fn lrn_search_y(d: u64, y: u64, n_max: u32, bit_budget: u64, out: &mut Vec<LrnSolution>) {
    let y_big = BigUint::from(y);
    let y_sq = &y_big * &y_big;
    let mut power = &y_sq * &y_big;
    let mut n = 3;
    while n <= n_max {
        let four_power: BigUint = &power << 2u32;
        if four_power.bits() > bit_budget {
            break;
        }
        if four_power > BigUint::from(d) {
            if let Some(x) = exact_sqrt(&(four_power - d)) {
                if x >= BigUint::one() {
                    let coprime = gcd(x.clone(), y_big.clone()).is_one();
                    let hit = LrnSolution { d, x, y, n, coprime };
                    debug_assert!(hit.verify());
                    if hit.verify() {
                        out.push(hit);
                    }
                }
            }
        }
        power *= &y_sq;
        n += 2;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NagellSolution {
    pub x: BigUint,
    pub y: u64,
    pub n: u32,
}

/// Solutions of `x^2 + x + 1 = y^n` with `3 <= y <= y_max`, odd
/// `3 <= n <= n_max` and `x >= 1`, found as `t(t-1) = y^n - 1` with `x = t-1`.
pub fn nagell_search(y_max: u64, n_max: u32, bit_budget: u64) -> Vec<NagellSolution> {
    let mut out = Vec::new();
    for y in 3..=y_max {
        let y_big = BigUint::from(y);
        let y_sq = &y_big * &y_big;
        let mut power = &y_sq * &y_big;
        let mut n = 3;
        while n <= n_max && power.bits() <= bit_budget {
            if let Some(t) = solve_rhombic(&(&power - 1u32)) {
                if t >= BigUint::from(2u32) {
                    out.push(NagellSolution { x: t - 1u32, y, n });
                }
            }
            power *= &y_sq;
            n += 2;
        }
    }
    out.sort();
    out
}

/// Which cubic Thue form: `a^3 + 3a^2 b - b^3 = 1` or `a^3 - 3ab^2 - b^3 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThueCase {
    K1,
    K2,
}

impl ThueCase {
    pub fn eval(self, a: i64, b: i64) -> i128 {
        let (a, b) = (a as i128, b as i128);
        match self {
            ThueCase::K1 => a * a * a + 3 * a * a * b - b * b * b,
            ThueCase::K2 => a * a * a - 3 * a * b * b - b * b * b,
        }
    }

    /// Integer points where `d/da` of the form vanishes, for fixed `b`.
    fn critical_points(self, b: i64) -> [i64; 2] {
        match self {
            ThueCase::K1 => [0, -2 * b],
            ThueCase::K2 => [-b.abs(), b.abs()],
        }
    }
}

/// All `(a, b)` with `|a|, |b| <= bound` solving the given form, sorted.
///
/// For each `b` the cubic in `a` is monotone between its (integer) critical
/// points, so each piece is bisected exactly in `i128`.
pub fn thue_solutions(case: ThueCase, bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for b in -bound..=bound {
        let [c1, c2] = case.critical_points(b);
        let (c1, c2) = (c1.min(c2), c1.max(c2));
        let mut cuts = Vec::with_capacity(4);
        cuts.push(-bound);
        for c in [c1, c2] {
            if c > -bound && c < bound {
                cuts.push(c);
            }
        }
        cuts.push(bound);
        for w in cuts.windows(2) {
            if let Some(a) = monotone_root(|a| case.eval(a, b) - 1, w[0], w[1]) {
                out.push((a, b));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn monotone_root(f: impl Fn(i64) -> i128, lo: i64, hi: i64) -> Option<i64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0 {
        return Some(lo);
    }
    if fhi == 0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let increasing = flo < 0;
    let (mut l, mut h) = (lo, hi);
    while h - l > 1 {
        let mid = l + (h - l) / 2;
        let v = f(mid);
        if v == 0 {
            return Some(mid);
        }
        if (v < 0) == increasing {
            l = mid;
        } else {
            h = mid;
        }
    }
    None
}

/// Solutions of both Thue forms within the box `|a|, |b| <= bound`.
pub fn thue_search(bound: i64) -> Result<(Vec<(i64, i64)>, Vec<(i64, i64)>)> {
    if bound < 1 {
        return Err(invalid!("Thue search bound must be at least 1"));
    }
    Ok((thue_solutions(ThueCase::K1, bound), thue_solutions(ThueCase::K2, bound)))
}

/// `(i, t)` for `i = 0..=i_max`, where `t(t-1) = y^2 - 1 - 2i` if solvable.
pub fn square_case_check(y: u64, i_max: u64) -> Result<Vec<(u64, Option<BigUint>)>> {
    if y < 3 || y.is_even() {
        return Err(invalid!("square case needs an odd y >= 3, got {y}"));
    }
    let q = BigUint::from(y) * y;
    let mut out = Vec::new();
    for i in 0..=i_max {
        let sub = BigUint::from(1 + 2 * i);
        if sub > q {
            break;
        }
        out.push((i, solve_rhombic(&(&q - sub))));
    }
    Ok(out)
}

/// Stripping `p^{2l}` from `D` when `x^2 + D = 4p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionResult {
    pub d: u64,
    pub p: u64,
    pub n: u32,
    pub l: u32,
    /// `D / p^{2l}`, again `3 mod 8`.
    pub e: u64,
    /// `n - 2l`.
    pub m: u32,
    /// Least reduced exponent permitted: `(n-1)/2` for `p` in {3,5,7}, else
    /// `(n+1)/2`.
    pub m_min: u32,
    pub within_limit: bool,
}

pub fn reduce(d: u64, p: u64, n: u32) -> Result<ReductionResult> {
    if d % 8 != 3 {
        return Err(invalid!("D = {d} is not 3 mod 8"));
    }
    if p < 3 || factorize(p) != [(p, 1)] {
        return Err(invalid!("p = {p} is not an odd prime"));
    }
    if n.is_even() {
        return Err(invalid!("n = {n} is not odd"));
    }
    let p2 = p * p;
    let (mut e, mut l) = (d, 0u32);
    // Largest even power of p dividing gcd(D, p^n).
    while e % p2 == 0 && 2 * (l + 1) <= n {
        e /= p2;
        l += 1;
    }
    let m = n - 2 * l;
    let m_min = if matches!(p, 3 | 5 | 7) { (n - 1) / 2 } else { (n + 1) / 2 };
    Ok(ReductionResult { d, p, n, l, e, m, m_min, within_limit: m >= m_min })
}

/// Necessary conditions for `q = y^n` to meet the base bound: `n` odd and
/// every prime divisor of `y` is `1 mod 6`.
pub fn meets_bound_filter(y: u64, n: u32) -> Result<bool> {
    if y < 2 {
        return Err(invalid!("y must be at least 2"));
    }
    Ok(n.is_odd() && factorize(y).iter().all(|&(p, _)| p % 6 == 1))
}

/// `q = y^n` with `n` as large as possible (`y` not itself a perfect power).
pub fn perfect_power(q: &BigUint) -> (BigUint, u32) {
    let bits = q.bits();
    if bits <= 1 {
        return (q.clone(), 1);
    }
    let mut n = bits as u32;
    while n >= 2 {
        let root = q.nth_root(n);
        for cand in [root.clone(), root + 1u32] {
            if cand > BigUint::one() && Pow::pow(&cand, n) == *q {
                return (cand, n);
            }
        }
        n -= 1;
    }
    (q.clone(), 1)
}

pub fn perfect_power_u64(q: u64) -> (u64, u32) {
    let (y, n) = perfect_power(&BigUint::from(q));
    (y.to_u64().expect("root of a u64 fits"), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn triples(sols: &[LrnSolution]) -> Vec<(u64, u64, u32)> {
        sols.iter().map(|s| (s.x.to_u64().unwrap(), s.y, s.n)).collect()
    }

    #[test]
    fn lrn_examples() {
        let s = lrn_search(3, 1000, 13, true, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(triples(&s), vec![(37, 7, 3)]);
        let s = lrn_search(83, 1000, 13, true, DEFAULT_BIT_BUDGET).unwrap();
        assert_eq!(triples(&s), vec![(5, 3, 3), (3785, 153, 3)]);
        let s = lrn_search(27, 100, 7, false, DEFAULT_BIT_BUDGET).unwrap();
        let hit = s.iter().find(|h| h.y == 3 && h.n == 3).unwrap();
        assert_eq!(hit.x, BigUint::from(9u32));
        assert!(!hit.coprime);
        assert!(lrn_search(5, 10, 5, true, DEFAULT_BIT_BUDGET).is_err());
    }

    #[test]
    fn nagell_examples() {
        let triples = |v: Vec<NagellSolution>| {
            v.into_iter().map(|s| (s.x.to_u64().unwrap(), s.y, s.n)).collect::<Vec<_>>()
        };
        assert_eq!(triples(nagell_search(1000, 15, DEFAULT_BIT_BUDGET)), vec![(18, 7, 3)]);
        assert!(nagell_search(5, 15, DEFAULT_BIT_BUDGET).is_empty());
        assert_eq!(triples(nagell_search(7, 3, DEFAULT_BIT_BUDGET)), vec![(18, 7, 3)]);
    }

    #[test]
    fn nagell_matches_lrn_with_d3() {
        let n = nagell_search(300, 9, DEFAULT_BIT_BUDGET);
        let l = lrn_search(3, 300, 9, false, DEFAULT_BIT_BUDGET).unwrap();
        let from_nagell: Vec<_> = n.iter().map(|s| (&s.x * 2u32 + 1u32, s.y, s.n)).collect();
        let from_lrn: Vec<_> = l.iter().map(|s| (s.x.clone(), s.y, s.n)).collect();
        assert_eq!(from_nagell, from_lrn);
    }

    #[test]
    fn thue_small_box_matches_brute_force() {
        for case in [ThueCase::K1, ThueCase::K2] {
            let mut brute = Vec::new();
            for a in -60..=60 {
                for b in -60..=60 {
                    if case.eval(a, b) == 1 {
                        brute.push((a, b));
                    }
                }
            }
            assert_eq!(thue_solutions(case, 60), brute);
        }
    }

    #[test]
    fn thue_examples() {
        let (_, k2) = thue_search(1).unwrap();
        assert_eq!(k2, vec![(-1, 1), (0, -1), (1, 0)]);
        let (k1, k2) = thue_search(10_000).unwrap();
        let mut expected = vec![(1, 0), (0, -1), (-1, 1), (1, -3), (-3, 2), (2, 1)];
        expected.sort();
        assert_eq!(k2, expected);
        let mut mapped: Vec<_> = k2.iter().map(|&(a, b)| (-b, -a)).collect();
        mapped.sort();
        assert_eq!(k1, mapped);
        assert!(thue_search(0).is_err());
    }

    #[test]
    fn square_case_examples() {
        let r = square_case_check(5, 2).unwrap();
        assert_eq!(r[0].1, None);
        assert_eq!(r[1].1, None);
        assert_eq!(r[2].1, Some(BigUint::from(5u32)));
        assert_eq!(square_case_check(3, 1).unwrap()[1].1, Some(BigUint::from(3u32)));
        assert!(square_case_check(11, 4).unwrap().iter().all(|(_, t)| t.is_none()));
        assert!(square_case_check(4, 1).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(59 * 9, 3, 11).unwrap();
        assert_eq!((r.l, r.e, r.m), (1, 59, 9));
        assert!(r.within_limit);
        let r = reduce(659, 7, 11).unwrap();
        assert_eq!((r.l, r.e, r.m), (0, 659, 11));
        let r = reduce(107 * 625, 5, 13).unwrap();
        assert_eq!((r.l, r.e, r.m), (2, 107, 9));
        assert_eq!(r.m_min, 6);
        // 13^4 leaves m = 3 < 4 for n = 7.
        let r = reduce(107 * 13u64.pow(4), 13, 7).unwrap();
        assert!(!r.within_limit);
    }

    #[test]
    fn filter_examples() {
        assert!(meets_bound_filter(7, 3).unwrap());
        assert!(!meets_bound_filter(7, 4).unwrap());
        assert!(!meets_bound_filter(3, 5).unwrap());
        assert!(meets_bound_filter(13 * 7, 1).unwrap());
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power_u64(343), (7, 3));
        assert_eq!(perfect_power_u64(729), (3, 6));
        assert_eq!(perfect_power_u64(41), (41, 1));
        assert_eq!(perfect_power_u64(1 << 40), (2, 40));
    }
}
