//! Class numbers of imaginary quadratic discriminants by direct enumeration of
//! reduced primitive binary quadratic forms, plus the squarefree helpers and
//! the modified class divisor built on top of them.

use alloc::vec::Vec;

use num_integer::{gcd, Integer};

use crate::error::invalid;
use crate::{Error, Result};

/// Default upper end for [`mcd`] searches.
pub const DEFAULT_MCD_CAP: u64 = 1_000_000;

/// A discriminant `-d` with its form class number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormClassRecord {
    pub d: u64,
    pub h: u64,
}

impl FormClassRecord {
    pub fn discriminant(&self) -> i64 {
        -(self.d as i64)
    }
}

/// Number of reduced primitive positive-definite forms `(a, b, c)` with
/// `b^2 - 4ac = discriminant`.
///
/// Reduced means `-a < b <= a <= c`, with `b >= 0` whenever `a = c`.
pub fn count_forms(discriminant: i64) -> Result<u64> {
    if discriminant >= 0 {
        return Err(invalid!("discriminant {discriminant} is not negative"));
    }
    let abs = discriminant.unsigned_abs();
    if !matches!(discriminant.rem_euclid(4), 0 | 1) {
        return Err(invalid!("discriminant {discriminant} is not 0 or 1 mod 4"));
    }
    let mut count = 0;
    // b has the parity of the discriminant; a <= sqrt(|D|/3).
    let mut b = abs % 2;
    while 3 * b * b <= abs {
        let four_ac = b * b + abs;
        let ac = four_ac / 4;
        let mut a = b.max(1);
        while a * a <= ac {
            if ac % a == 0 {
                let c = ac / a;
                if gcd(gcd(a, b), c) == 1 {
                    count += 1;
                    // (a, -b, c) is also reduced unless b = 0, b = a or a = c.
                    if b > 0 && b < a && a < c {
                        count += 1;
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(count)
}

/// `h(-d)` for `d = 3 mod 4`. For non-squarefree `d` this is the class number
/// of the order of discriminant `-d`, not of the field.
pub fn class_number(d: u64) -> Result<u64> {
    if d % 4 != 3 {
        return Err(invalid!("D = {d} is not 3 mod 4"));
    }
    count_forms(-(d as i64))
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// `h(-D)` for every `D = 3 mod 8` with `D <= limit`, indexed by
/// `(D - 3) / 8`, by sweeping all reduced primitive forms once.
///
/// Costs about `sum h(-D)`, i.e. `O(limit^1.5)`, against `O(limit^2)` for
/// calling [`class_number`] on each `D`.
pub fn class_numbers_3mod8(limit: u64) -> Vec<u32> {
    let len = if limit < 3 { 0 } else { ((limit - 3) / 8 + 1) as usize };
    let mut h = alloc::vec![0u32; len];
    // D = 4ac - b^2 with b odd; D = 3 mod 8 forces ac odd.
    let mut a = 1u64;
    while 3 * a * a <= limit {
        let mut b = 1i64;
        while b <= a as i64 {
            for sign in [1i64, -1] {
                let bb = b * sign;
                if bb == -(a as i64) {
                    continue;
                }
                let bu = b as u64;
                let mut c = a;
                loop {
                    let d = 4 * a * c - bu * bu;
                    if d > limit {
                        break;
                    }
                    let negative_ok = !(bb < 0 && (c == a || bu == a));
                    if d % 8 == 3 && negative_ok && gcd(gcd(a, bu), c) == 1 {
                        h[((d - 3) / 8) as usize] += 1;
                    }
                    c += 1;
                }
            }
            b += 2;
        }
        a += 1;
    }
    h
}

/// `Q(n)`: the largest squarefree divisor of `n`.
pub fn greatest_squarefree_factor(n: u64) -> u64 {
    factorize(n).iter().map(|&(p, _)| p).product()
}

/// `Q_p(n) = Q(n) / gcd(p, Q(n))`.
pub fn p_free_squarefree_factor(n: u64, p: u64) -> u64 {
    let q = greatest_squarefree_factor(n);
    q / gcd(p, q)
}

/// `MCD(m)`: the smallest `D = 3 mod 8` with `gcd(m, h(-D)) > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McdRecord {
    pub m: u64,
    pub d: u64,
    /// `(D - 3) / 8`.
    pub i: u64,
    pub h: u64,
}

pub fn mcd(m: u64, cap: u64) -> Result<McdRecord> {
    if m < 3 || m.is_even() {
        return Err(invalid!("MCD needs an odd m >= 3, got {m}"));
    }
    // Sieve windows of growing size; each pass restarts from D = 3.
    let mut limit = 4096u64.min(cap);
    loop {
        let h = class_numbers_3mod8(limit);
        if let Some(i) = h.iter().position(|&v| gcd(m, v as u64) > 1) {
            let i = i as u64;
            return Ok(McdRecord { m, d: 8 * i + 3, i, h: h[i as usize] as u64 });
        }
        if limit >= cap {
            return Err(Error::NotFound(alloc::format!("MCD({m}) exceeds the search cap D <= {cap}")));
        }
        limit = limit.saturating_mul(4).min(cap);
    }
}

/// [`mcd`] with a caller-supplied class-number source (e.g. a cache).
pub fn mcd_with<F>(m: u64, cap: u64, mut class_number_of: F) -> Result<McdRecord>
where
    F: FnMut(u64) -> Result<u64>,
{
    if m < 3 || m.is_even() {
        return Err(invalid!("MCD needs an odd m >= 3, got {m}"));
    }
    let mut d = 3;
    while d <= cap {
        let h = class_number_of(d)?;
        if gcd(m, h) > 1 {
            return Ok(McdRecord { m, d, i: (d - 3) / 8, h });
        }
        d += 8;
    }
    Err(Error::NotFound(alloc::format!("MCD({m}) exceeds the search cap D <= {cap}")))
}
