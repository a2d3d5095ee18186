//! Closed-form upper bounds on `V(f)` for `f` in C4 over a group of order
//! `q`, the exact bound `q - cost(q - 1)`, and a report comparing them.
//!
//! Formula values are [`HalfRadical`]s so every floor is exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive, Zero};

use crate::classnum::{factorize, is_prime};
use crate::diophantine::perfect_power;
use crate::error::invalid;
use crate::partition::{b, cost, exception_record, CostTable};
use crate::radical::HalfRadical;
use crate::rhombic::{rhombic_floor_big, rhombic_big};
use crate::Result;

/// `D_i = 8i + 3`.
pub fn d_i(i: u64) -> u64 {
    8 * i + 3
}

/// Largest `q` that is trial-factored when a hypothesis needs its primes.
pub const FACTOR_LIMIT: u64 = 1 << 44;

/// Squarings allowed in [`bound_square`] before `q` is considered too large.
pub const MAX_SQUARE_LEVEL: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MethodId {
    /// `q - (-1 + sqrt(4q - 3)) / 2`.
    Base,
    /// `q - (1 + sqrt(4q - 11)) / 2`.
    Step1,
    /// Square `q = y^(2^j)`.
    Square,
    /// Odd powers `q = y^n`, indexed by a case table.
    OddPower,
    /// Prime powers `p^n` with `n >= 11`, `gcd(n, 15) = 1`.
    PrimePower,
    /// `q = p^7`.
    Seventh,
}

impl MethodId {
    pub const ALL: [MethodId; 6] = [
        MethodId::Base,
        MethodId::Step1,
        MethodId::Square,
        MethodId::OddPower,
        MethodId::PrimePower,
        MethodId::Seventh,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodId::Base => "base",
            MethodId::Step1 => "step1",
            MethodId::Square => "thm2",
            MethodId::OddPower => "thm3",
            MethodId::PrimePower => "thm4",
            MethodId::Seventh => "n7",
        }
    }
}

/// One formula evaluated at one `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodEntry {
    pub id: MethodId,
    /// Absent when the formula cannot be evaluated at this `q`.
    pub value: Option<HalfRadical>,
    pub floor: Option<BigInt>,
    pub applicable: bool,
    /// Which branch of the formula fired, or why it does not apply.
    pub case: String,
}

impl MethodEntry {
    fn new(id: MethodId, value: HalfRadical, case: String) -> Result<Self> {
        let floor = value.floor()?;
        Ok(Self { id, value: Some(value), floor: Some(floor), applicable: true, case })
    }

    fn inapplicable(id: MethodId, reason: String) -> Self {
        Self { id, value: None, floor: None, applicable: false, case: reason }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// `q - (t - 1)` with `t = (1 + sqrt(4q - d)) / 2` and the surd left exact,
/// then minus `extra`.
fn q_minus_root(q: &BigUint, d: &BigUint, extra: &BigInt) -> Result<HalfRadical> {
    let four_q = q * 4u32;
    if &four_q < d {
        return Err(invalid!("4q - {d} is negative for q = {q}"));
    }
    let int = BigInt::from(q.clone()) * 2 + 1 - extra * 2;
    Ok(HalfRadical::half(int).with_sqrt(true, four_q - d))
}

/// Upper bound `q - (-1 + sqrt(4q - 3)) / 2` and lower bound `(q + 1) / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseBound {
    pub upper: MethodEntry,
    pub lower: HalfRadical,
}

pub fn bound_base(q: &BigUint) -> Result<BaseBound> {
    if q < &BigUint::from(2u32) {
        return Err(invalid!("q must be at least 2"));
    }
    let upper = q_minus_root(q, &3u32.into(), &BigInt::zero())?;
    Ok(BaseBound {
        upper: MethodEntry::new(MethodId::Base, upper, "step 0".to_string())?,
        lower: HalfRadical::half(BigInt::from(q + 1u32)),
    })
}

/// Whether `q - 1` is one of the sizes where a minimum-cost relation may
/// avoid a maximal class. Beyond the table every size is regular.
fn in_exceptional_set(q_minus_1: &BigUint, table: &CostTable) -> Result<bool> {
    match q_minus_1.to_u64().filter(|&n| n <= table.limit()) {
        Some(n) => Ok(exception_record(table, n)?.is_some()),
        None => Ok(false),
    }
}

/// `q - (1 + sqrt(4q - 11)) / 2`, when the base bound is known unattainable.
pub fn bound_step1(q: &BigUint, table: &CostTable) -> Result<MethodEntry> {
    let id = MethodId::Step1;
    if q.is_even() || q < &BigUint::from(3u32) {
        return Ok(MethodEntry::inapplicable(id, "q must be odd and at least 3".to_string()));
    }
    if q == &BigUint::from(343u32) {
        return Ok(MethodEntry::inapplicable(id, "q = 343 is excluded".to_string()));
    }
    let n = q - 1u32;
    if in_exceptional_set(&n, table)? {
        return Ok(MethodEntry::inapplicable(id, format!("q - 1 = {n} is exceptional")));
    }
    let (_, power) = perfect_power(q);
    let case = if power > 1 {
        format!("q is a proper power (exponent {power})")
    } else {
        match q.to_u64().filter(|&v| v <= FACTOR_LIMIT) {
            Some(v) => match factorize(v).iter().find(|&&(p, _)| p % 6 != 1) {
                Some(&(p, _)) => format!("prime {p} divides q and is not 1 mod 6"),
                None => {
                    return Ok(MethodEntry::inapplicable(
                        id,
                        "q is not a proper power and every prime factor is 1 mod 6".to_string(),
                    ))
                }
            },
            None => {
                return Ok(MethodEntry::inapplicable(id, "q too large to factor".to_string()));
            }
        }
    };
    let value = HalfRadical::half(BigInt::from(q.clone()) * 2 - 1).with_sqrt(true, q * 4u32 - 11u32);
    MethodEntry::new(id, value, case)
}

/// `q + j - sum_{i<j} y^(2^i) - c` for `q = y^(2^j)`, with `c = 7` for
/// `y = 5`, `15` for `y = 11`, else `(-1 + sqrt(4y - 3)) / 2`.
pub fn bound_square(y: u64, j: u32) -> Result<MethodEntry> {
    if y < 2 || crate::rhombic::isqrt_u128(y as u128).pow(2) == y as u128 {
        return Err(invalid!("y = {y} must be a nonsquare integer above 1"));
    }
    if j < 1 || j > MAX_SQUARE_LEVEL {
        return Err(invalid!("j must lie in 1..={MAX_SQUARE_LEVEL}"));
    }
    let yb = BigUint::from(y);
    let mut powers = Vec::with_capacity(j as usize + 1);
    let mut cur = yb.clone();
    for _ in 0..=j {
        powers.push(cur.clone());
        cur = &cur * &cur;
    }
    let q = powers[j as usize].clone();
    let sum: BigUint = powers[..j as usize].iter().sum();
    let base = BigInt::from(q) + j - BigInt::from(sum);
    let (value, case) = match y {
        5 => (HalfRadical::integer(base - 7), "Y5"),
        11 => (HalfRadical::integer(base - 15), "Y11"),
        _ => (
            HalfRadical::half(base * 2 + 1).with_sqrt(true, BigUint::from(4 * y - 3)),
            "GENERIC",
        ),
    };
    MethodEntry::new(MethodId::Square, value, case.to_string())
}

const ODD_POWER_SPECIAL_BASES: [u64; 6] = [3, 5, 7, 41, 153, 591];

fn power_of(n: u64, base: u64) -> Option<u32> {
    let mut a = 0;
    let mut m = n;
    while m > 1 && m % base == 0 {
        m /= base;
        a += 1;
    }
    (m == 1 && a >= 1).then_some(a)
}

/// The index `i` for odd `y, n > 1`, one arm per line of the case list.
pub fn odd_power_index(y: u64, n: u32) -> Result<u64> {
    if y < 3 || n < 3 || y.is_even() || n.is_even() {
        return Err(invalid!("y and n must be odd and above 1, got y = {y}, n = {n}"));
    }
    let q = BigUint::from(y).pow(n);
    let is = |b: u64, e: u32| q == BigUint::from(b).pow(e);
    let special = ODD_POWER_SPECIAL_BASES.contains(&y);
    let n = n as u64;
    let i = if is(7, 3) {
        0
    } else if is(3, 5) {
        1
    } else if is(5, 7) {
        2
    } else if is(3, 3) || is(5, 3) || is(41, 3) || is(591, 3) {
        7
    } else if is(153, 3) {
        10
    } else if power_of(n, 3).is_some_and(|a| a >= 1) && !special {
        13
    } else if power_of(n, 3).is_some_and(|a| a >= 2) && special {
        13
    } else if power_of(n, 5).is_some_and(|a| a >= 1) && y != 3 {
        16
    } else if power_of(n, 5).is_some_and(|a| a >= 2) && y == 3 {
        16
    } else {
        18
    };
    Ok(i)
}

/// `q - (sqrt(4q - D_i) - 1) / 2 - beta_i` with `beta_i = B(i)`.
pub fn bound_oddpower(y: u64, n: u32, table: &CostTable) -> Result<MethodEntry> {
    let i = odd_power_index(y, n)?;
    let q = BigUint::from(y).pow(n);
    let beta = b(i, table)?;
    let value = q_minus_root(&q, &d_i(i).into(), &big(beta))?;
    MethodEntry::new(MethodId::OddPower, value, format!("i={i}"))
}

/// The three prime powers excluded from [`bound_primepower`], with the exact
/// costs that replace it.
pub const PRIME_POWER_EXCLUSIONS: [(u64, u32, u64); 3] = [(3, 11, 441), (5, 11, 7054), (5, 13, 35013)];

/// `D_j` for `q = p^n` and the branch that produced it.
pub fn prime_power_discriminant<F>(p: u64, n: u32, mut mcd: F) -> Result<(BigUint, String)>
where
    F: FnMut(u64) -> Result<u64>,
{
    let p2 = BigUint::from(p).pow(2u32);
    let mut options: Vec<(BigUint, String)> = Vec::new();
    options.push((mcd(n as u64)?.into(), "MCD(n)".to_string()));
    match n % 3 {
        1 => {
            options.push((BigUint::from(mcd(n as u64 - 2)?) * &p2, "MCD(n-2)p^2".to_string()));
            options.push((BigUint::from(107u32) * &p2 * &p2, "107p^4".to_string()));
        }
        2 => options.push((BigUint::from(107u32) * &p2, "107p^2".to_string())),
        _ => return Err(invalid!("n = {n} is divisible by 3")),
    }
    // First minimum wins, so MCD(n) is preferred on ties.
    let mut best = options.swap_remove(0);
    for o in options {
        if o.0 < best.0 {
            best = o;
        }
    }
    Ok(best)
}

/// `q + 1 - (sqrt(4q - D_j) + sqrt(4j + 1)) / 2` for `q = p^n`.
pub fn bound_primepower<F>(p: u64, n: u32, table: &CostTable, mcd: F) -> Result<MethodEntry>
where
    F: FnMut(u64) -> Result<u64>,
{
    let id = MethodId::PrimePower;
    if p < 3 || !is_prime(p) {
        return Ok(MethodEntry::inapplicable(id, format!("{p} is not an odd prime")));
    }
    if n < 11 || n % 2 == 0 || n.gcd(&15) != 1 {
        return Ok(MethodEntry::inapplicable(id, format!("n = {n} must be odd, at least 11 and prime to 15")));
    }
    let q = BigUint::from(p).pow(n);
    if let Some(&(_, _, c)) = PRIME_POWER_EXCLUSIONS.iter().find(|&&(pp, nn, _)| pp == p && nn == n) {
        let exact = cost(&(&q - 1u32), table)?;
        let mut e = MethodEntry::new(
            id,
            HalfRadical::integer(BigInt::from(&q - &exact)),
            format!("excluded; exact cost {exact} substituted"),
        )?;
        debug_assert_eq!(exact, BigUint::from(c));
        e.applicable = false;
        return Ok(e);
    }
    let (dj, branch) = prime_power_discriminant(p, n, mcd)?;
    let j = (&dj - 3u32) / 8u32;
    let four_q = &q * 4u32;
    if four_q < dj {
        return Err(invalid!("4q - D_j is negative"));
    }
    let value = HalfRadical::half(BigInt::from(q) * 2 + 2)
        .with_sqrt(true, four_q - &dj)
        .with_sqrt(true, j * 4u32 + 1u32);
    MethodEntry::new(id, value, format!("D_j={dj} ({branch})"))
}

/// `B(251)`, the constant in the seventh-power bound.
pub const SEVENTH_POWER_CONSTANT: u64 = 29;

/// `q - 29 - (sqrt(4q - 251) - 1) / 2` for `q = p^7`, `p >= 7` prime.
pub fn bound_n7(p: u64) -> Result<MethodEntry> {
    let id = MethodId::Seventh;
    if p < 7 || !is_prime(p) {
        return Ok(MethodEntry::inapplicable(id, format!("needs a prime p >= 7, got {p}")));
    }
    let q = BigUint::from(p).pow(7u32);
    let value = q_minus_root(&q, &251u32.into(), &big(SEVENTH_POWER_CONSTANT))?;
    MethodEntry::new(id, value, "D=251".to_string())
}

/// `q - cost(q - 1)`, the largest image size of a C4 function.
pub fn bound_exact(q: &BigUint, table: &CostTable) -> Result<BigUint> {
    if q.is_zero() || q.is_even() {
        return Err(invalid!("q = {q} must be odd so that q - 1 is even"));
    }
    let n = q - 1u32;
    Ok(q - cost(&n, table)?)
}

/// The first step `i` at which `x^2 + D_i = 4q` is solvable, i.e. the
/// first `i` with `q - 1 - 2i` rhombic, and the bound it gives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteppingBound {
    pub i: BigUint,
    pub t: BigUint,
    pub beta: BigUint,
    pub value: BigUint,
}

pub fn stepping_bound(q: &BigUint, table: &CostTable) -> Result<SteppingBound> {
    if q.is_even() || q < &BigUint::from(3u32) {
        return Err(invalid!("q = {q} must be odd and at least 3"));
    }
    let n = q - 1u32;
    let t = rhombic_floor_big(&n);
    let residual = &n - rhombic_big(&t);
    let i = &residual / 2u32;
    let beta = cost(&residual, table)?;
    let value = q - (&t - 1u32) - &beta;
    Ok(SteppingBound { i, t, beta, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiscrepancyKind {
    /// The formula's floor is below the attainable maximum.
    Unsound,
    /// The formula's floor is above the attainable maximum.
    Slack,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub id: MethodId,
    pub kind: DiscrepancyKind,
    pub floor: BigInt,
    pub exact: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub q: BigUint,
    /// `q = y^n` with `n` maximal.
    pub y: BigUint,
    pub n: u32,
    pub lower: HalfRadical,
    pub methods: Vec<MethodEntry>,
    pub exact: Option<BigUint>,
    pub discrepancies: Vec<Discrepancy>,
    /// `q <= 7`, where the standing assumption `q > 7` fails.
    pub below_threshold_warning: bool,
}

impl BoundReport {
    pub fn method(&self, id: MethodId) -> Option<&MethodEntry> {
        self.methods.iter().find(|m| m.id == id)
    }
}

/// Every formula that can be evaluated at `q`, with the exact bound when
/// `q` is odd.
pub fn bound_report<F>(q: &BigUint, table: &CostTable, mut mcd: F) -> Result<BoundReport>
where
    F: FnMut(u64) -> Result<u64>,
{
    let base = bound_base(q)?;
    let (y, n) = perfect_power(q);
    let mut methods = Vec::from([base.upper]);
    let odd = q.is_odd();
    if odd {
        methods.push(bound_step1(q, table)?);
    }
    let (j, m) = (n.trailing_zeros(), n >> n.trailing_zeros());
    if j >= 1 && j <= MAX_SQUARE_LEVEL {
        if let Some(yy) = Pow::pow(&y, m).to_u64() {
            methods.push(bound_square(yy, j)?);
        }
    }
    if odd && m > 1 {
        // q = y^m with m the odd part of the maximal exponent.
        if let Some(yy) = Pow::pow(&y, 1u32 << j).to_u64() {
            methods.push(bound_oddpower(yy, m, table)?);
            let prime = j == 0 && m >= 7 && yy <= FACTOR_LIMIT && is_prime(yy);
            if prime && m >= 11 && m.gcd(&15) == 1 {
                methods.push(bound_primepower(yy, m, table, &mut mcd)?);
            }
            if prime && m == 7 {
                methods.push(bound_n7(yy)?);
            }
        }
    }
    let exact = if odd { Some(bound_exact(q, table)?) } else { None };
    let mut discrepancies = Vec::new();
    if let Some(exact) = &exact {
        let e = BigInt::from(exact.clone());
        for m in methods.iter().filter(|m| m.applicable) {
            let Some(floor) = &m.floor else { continue };
            let kind = match floor.cmp(&e) {
                Ordering::Less => DiscrepancyKind::Unsound,
                Ordering::Greater => DiscrepancyKind::Slack,
                Ordering::Equal => continue,
            };
            discrepancies.push(Discrepancy { id: m.id, kind, floor: floor.clone(), exact: exact.clone() });
        }
    }
    Ok(BoundReport {
        below_threshold_warning: q <= &BigUint::from(7u32),
        q: q.clone(),
        y,
        n,
        lower: base.lower,
        methods,
        exact,
        discrepancies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classnum::{mcd, DEFAULT_MCD_CAP};
    use crate::partition::GREEDY_CROSSOVER;
    use std::sync::OnceLock;

    fn table() -> &'static CostTable {
        static T: OnceLock<CostTable> = OnceLock::new();
        T.get_or_init(|| CostTable::build(GREEDY_CROSSOVER).unwrap())
    }

    fn mcd_d(m: u64) -> Result<u64> {
        Ok(mcd(m, DEFAULT_MCD_CAP)?.d)
    }

    fn q(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn base_examples() {
        assert_eq!(bound_base(&q(343)).unwrap().upper.floor, Some(big(325)));
        assert!(bound_base(&q(343)).unwrap().upper.value.as_ref().unwrap().is_rational());
        assert_eq!(bound_base(&q(13)).unwrap().upper.floor, Some(big(10)));
        let nine = bound_base(&q(9)).unwrap();
        assert_eq!(nine.upper.floor, Some(big(6)));
        assert_eq!(nine.upper.value.as_ref().unwrap().decimal().unwrap(), "6.627718");
        assert_eq!(nine.lower.floor().unwrap(), big(5));
    }

    #[test]
    fn step1_examples() {
        let t = table();
        let e = bound_step1(&q(243), t).unwrap();
        assert!(e.applicable);
        assert_eq!(e.floor, Some(big(227)));
        assert!(e.value.as_ref().unwrap().is_rational());
        assert!(!bound_step1(&q(343), t).unwrap().applicable);
        assert!(!bound_step1(&q(25), t).unwrap().applicable);
        // 7 * 13 = 91 has only primes 1 mod 6 and is not a power
        assert!(!bound_step1(&q(91), t).unwrap().applicable);
        assert!(bound_step1(&q(35), t).unwrap().applicable);
    }

    #[test]
    fn square_examples() {
        assert_eq!(bound_square(3, 1).unwrap().floor, Some(big(6)));
        let five = bound_square(5, 1).unwrap();
        assert_eq!((five.floor, five.case.as_str()), (Some(big(14)), "Y5"));
        assert_eq!(bound_square(3, 2).unwrap().floor, Some(big(70)));
        assert_eq!(bound_square(11, 1).unwrap().floor, Some(big(96)));
        assert!(bound_square(4, 1).is_err());
    }

    #[test]
    fn oddpower_examples() {
        let t = table();
        let e = bound_oddpower(7, 3, t).unwrap();
        assert_eq!((e.floor, e.case.as_str()), (Some(big(325)), "i=0"));
        let e = bound_oddpower(41, 3, t).unwrap();
        assert_eq!((e.floor, e.case.as_str()), (Some(big(68655)), "i=7"));
        let e = bound_oddpower(3, 3, t).unwrap();
        assert_eq!((e.floor, e.case.as_str()), (Some(big(20)), "i=7"));
        assert_eq!(odd_power_index(3, 5).unwrap(), 1);
        assert_eq!(odd_power_index(3, 9).unwrap(), 13);
        assert_eq!(odd_power_index(3, 25).unwrap(), 16);
        assert_eq!(odd_power_index(7, 5).unwrap(), 16);
        assert_eq!(odd_power_index(11, 3).unwrap(), 13);
        assert_eq!(odd_power_index(3, 7).unwrap(), 18);
        assert!(odd_power_index(4, 3).is_err());
    }

    #[test]
    fn primepower_examples() {
        let t = table();
        let e = bound_primepower(7, 11, t, mcd_d).unwrap();
        assert!(e.applicable);
        assert!(e.case.starts_with("D_j=659 "), "{}", e.case);
        let (dj, branch) = prime_power_discriminant(13, 127, mcd_d).unwrap();
        assert_eq!((dj, branch.as_str()), (q(131 * 169), "MCD(n-2)p^2"));
        let e = bound_primepower(3, 11, t, mcd_d).unwrap();
        assert!(!e.applicable);
        assert_eq!(e.floor, Some(BigInt::from(3u64.pow(11) - 441)));
        assert!(!bound_primepower(3, 15, t, mcd_d).unwrap().applicable);
    }

    #[test]
    fn n7_examples() {
        let e = bound_n7(7).unwrap();
        assert_eq!(e.floor, Some(big(822607)));
        assert!(!bound_n7(5).unwrap().applicable);
        let e = bound_n7(11).unwrap();
        let direct = 11f64.powi(7) - 29.0 - ((4.0 * 11f64.powi(7) - 251.0).sqrt() - 1.0) / 2.0;
        assert!((e.value.as_ref().unwrap().to_f64() - direct).abs() < 1e-6);
    }

    #[test]
    fn exact_examples() {
        let t = table();
        assert_eq!(bound_exact(&q(343), t).unwrap(), q(325));
        assert_eq!(bound_exact(&q(3u64.pow(11)), t).unwrap(), q(3u64.pow(11) - 441));
        assert!(bound_exact(&q(100), t).is_err());
    }

    #[test]
    fn stepping_examples() {
        let t = table();
        let s = stepping_bound(&q(243), t).unwrap();
        assert_eq!((s.i, s.value), (q(1), q(227)));
        // q - 1 = 40 is a strict exception: the first step overshoots by one
        let s = stepping_bound(&q(41), t).unwrap();
        assert_eq!(s.value, bound_exact(&q(41), t).unwrap() - 1u32);
    }

    #[test]
    fn report_examples() {
        let t = table();
        let r = bound_report(&q(343), t, mcd_d).unwrap();
        assert_eq!(r.exact, Some(q(325)));
        assert_eq!(r.method(MethodId::OddPower).unwrap().floor, Some(big(325)));
        assert!(r.discrepancies.iter().all(|d| d.kind != DiscrepancyKind::Unsound));

        let r = bound_report(&q(25), t, mcd_d).unwrap();
        assert_eq!(r.exact, Some(q(19)));
        assert_eq!(r.method(MethodId::Square).unwrap().floor, Some(big(14)));
        assert!(r
            .discrepancies
            .iter()
            .any(|d| d.id == MethodId::Square && d.kind == DiscrepancyKind::Unsound));

        let r = bound_report(&q(243), t, mcd_d).unwrap();
        assert_eq!(r.method(MethodId::OddPower).unwrap().floor, Some(big(227)));
        assert!(r.discrepancies.is_empty());
        assert!(bound_report(&q(5), t, mcd_d).unwrap().below_threshold_warning);
    }
}
