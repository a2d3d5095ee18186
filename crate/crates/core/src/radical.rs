//! Exact evaluation of `(a + sum ±sqrt(r)) / 2`, the shape every closed-form
//! bound takes.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, resource};
use crate::rhombic::{exact_sqrt, isqrt_big};
use crate::Result;

/// Digits kept after the decimal point by [`HalfRadical::decimal`].
pub const DECIMAL_DIGITS: u32 = 6;

/// Refinement stops after this many bits; only reached for sums of surds
/// that are secretly integers, which the constructor rules out.
const MAX_REFINE_BITS: u64 = 1 << 14;

/// `(int + sum sign_k * sqrt(r_k)) / 2`, kept with perfect-square radicands
/// folded into `int`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfRadical {
    int: BigInt,
    terms: Vec<(bool, BigUint)>,
}

impl HalfRadical {
    pub fn integer(v: BigInt) -> Self {
        Self { int: v * 2, terms: Vec::new() }
    }

    /// `int / 2` with no surds.
    pub fn half(int: BigInt) -> Self {
        Self { int, terms: Vec::new() }
    }

    /// Adds `sqrt(r) / 2` (or subtracts it when `negative`).
    pub fn with_sqrt(mut self, negative: bool, r: BigUint) -> Self {
        match exact_sqrt(&r) {
            Some(s) => {
                let s = BigInt::from(s);
                if negative {
                    self.int -= s;
                } else {
                    self.int += s;
                }
            }
            None => self.terms.push((negative, r)),
        }
        self
    }

    /// `true` when no irrational surd remains.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    /// Twice the value, when that is an integer.
    pub fn doubled_integer(&self) -> Option<&BigInt> {
        self.is_rational().then_some(&self.int)
    }

    /// The value times `c`, in the same shape.
    fn scaled(&self, c: &BigUint) -> Self {
        let c2 = c * c;
        Self {
            int: &self.int * BigInt::from(c.clone()),
            terms: self.terms.iter().map(|(neg, r)| (*neg, r * &c2)).collect(),
        }
    }

    /// Bracket of twice the value times `2^k`: `[lo, hi]`, exact when rational.
    fn bracket(&self, k: u64) -> (BigInt, BigInt) {
        let mut lo = &self.int << k;
        let mut hi = lo.clone();
        for (neg, r) in &self.terms {
            let s = BigInt::from(isqrt_big(&(r << (2 * k))));
            // s <= sqrt(r) 2^k < s + 1
            if *neg {
                lo -= &s + 1;
                hi -= s;
            } else {
                lo += &s;
                hi += s + 1;
            }
        }
        (lo, hi)
    }

    /// Exact `floor` of the value.
    pub fn floor(&self) -> Result<BigInt> {
        if self.is_rational() {
            return Ok(self.int.div_floor(&BigInt::from(2)));
        }
        let mut k = 32;
        while k <= MAX_REFINE_BITS {
            let (lo, hi) = self.bracket(k);
            let den = BigInt::one() << (k + 1);
            let (a, b) = (lo.div_floor(&den), hi.div_floor(&den));
            // hi is never attained for irrational values, so hi on an
            // integer boundary still pins the floor from below.
            if a == b || (b == &a + 1 && hi.is_multiple_of(&den)) {
                return Ok(a);
            }
            k *= 2;
        }
        Err(resource!("could not separate {self} from an integer"))
    }

    /// `ceil` of the value.
    pub fn ceil(&self) -> Result<BigInt> {
        let f = self.floor()?;
        Ok(if self.is_rational() && self.int.is_even() { f } else { f + 1 })
    }

    /// Sign comparison with an integer.
    pub fn cmp_int(&self, v: &BigInt) -> Result<Ordering> {
        let f = self.floor()?;
        Ok(match f.cmp(v) {
            Ordering::Less => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
            Ordering::Equal if self.is_rational() && self.int == v * 2 => Ordering::Equal,
            Ordering::Equal => Ordering::Greater,
        })
    }

    /// Decimal string with [`DECIMAL_DIGITS`] digits, rounded toward
    /// negative infinity.
    pub fn decimal(&self) -> Result<String> {
        let scale = BigUint::from(10u32).pow(DECIMAL_DIGITS);
        let scaled = self.scaled(&scale).floor()?;
        let (sign, mag) = (if scaled.is_negative() { "-" } else { "" }, scaled.magnitude().clone());
        let (whole, frac) = mag.div_rem(&scale);
        let mut out = String::new();
        let _ = fmt::write(&mut out, format_args!("{sign}{whole}.{frac:0>6}"));
        Ok(out)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = self.int.to_f64().unwrap_or(f64::NAN);
        for (neg, r) in &self.terms {
            let s = libm::sqrt(r.to_f64().unwrap_or(f64::INFINITY));
            v += if *neg { -s } else { s };
        }
        v / 2.0
    }

    /// `v - self` for integer `v`.
    pub fn sub_from(&self, v: &BigInt) -> Self {
        Self {
            int: v * 2 - &self.int,
            terms: self.terms.iter().map(|(neg, r)| (!neg, r.clone())).collect(),
        }
    }
}

impl fmt::Display for HalfRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.int)?;
        for (neg, r) in &self.terms {
            write!(f, " {} sqrt({r})", if *neg { '-' } else { '+' })?;
        }
        write!(f, ")/2")
    }
}

/// `sqrt(r)` as a [`HalfRadical`]; `r` must be non-negative.
pub fn sqrt_of(r: &BigInt) -> Result<HalfRadical> {
    match r.sign() {
        Sign::Minus => Err(invalid!("square root of negative {r}")),
        _ => Ok(HalfRadical::half(BigInt::zero()).with_sqrt(false, r.magnitude() * 4u32)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn floors() {
        // (1 + sqrt(33)) / 2 = 3.372...
        let v = HalfRadical::half(big(1)).with_sqrt(false, 33u32.into());
        assert_eq!(v.floor().unwrap(), big(3));
        assert_eq!(v.decimal().unwrap(), "3.372281");
        // 9 - (-1 + sqrt(33)) / 2 = 6.627...
        let w = HalfRadical::half(big(19)).with_sqrt(true, 33u32.into());
        assert_eq!(w.floor().unwrap(), big(6));
        assert_eq!(w.ceil().unwrap(), big(7));
        let exact = HalfRadical::half(big(1)).with_sqrt(false, 49u32.into());
        assert!(exact.is_rational());
        assert_eq!(exact.floor().unwrap(), big(4));
        assert_eq!(exact.decimal().unwrap(), "4.000000");
        assert_eq!(exact.cmp_int(&big(4)).unwrap(), Ordering::Equal);
        assert_eq!(w.cmp_int(&big(6)).unwrap(), Ordering::Greater);
        let neg = HalfRadical::half(big(-3));
        assert_eq!(neg.floor().unwrap(), big(-2));
        assert_eq!(neg.decimal().unwrap(), "-1.500000");
        assert_eq!(HalfRadical::half(big(-1)).decimal().unwrap(), "-0.500000");
    }

    #[test]
    fn two_surds() {
        // (sqrt(2) + sqrt(3)) / 2 = 1.573...
        let v = HalfRadical::half(big(0)).with_sqrt(false, 2u32.into()).with_sqrt(false, 3u32.into());
        assert_eq!(v.floor().unwrap(), big(1));
        assert!((v.to_f64() - 1.5731321849709863).abs() < 1e-12);
    }

    #[test]
    fn huge_values() {
        // sqrt(10^40 + 1) / 2 just above 5 * 10^19
        let r = BigUint::from(10u32).pow(40) + 1u32;
        let v = HalfRadical::half(big(0)).with_sqrt(false, r);
        assert_eq!(v.floor().unwrap(), BigInt::from(5u32) * BigInt::from(10u32).pow(19));
        assert_eq!(sqrt_of(&big(9)).unwrap().floor().unwrap(), big(3));
        assert!(sqrt_of(&big(-1)).is_err());
    }
}
