//! Rhombic numbers `t(t-1)` and exact integer square roots.
//!
//! No floating point is used anywhere in this module.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, Zero};

/// `t(t-1)`, the number of ordered pairs of distinct elements in a class of
/// size `t`.
#[inline]
pub const fn rhombic(t: u64) -> u64 {
    t * t.saturating_sub(1)
}

/// Floor of the square root, with the Newton result nudged so that
/// `r^2 <= n < (r+1)^2` holds exactly.
pub fn isqrt_u128(n: u128) -> u128 {
    let mut r = n.sqrt();
    while r * r > n {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

pub fn isqrt_big(n: &BigUint) -> BigUint {
    let mut r = n.sqrt();
    while &r * &r > *n {
        r -= 1u32;
    }
    loop {
        let next = &r + 1u32;
        if &next * &next <= *n {
            r = next;
        } else {
            return r;
        }
    }
}

/// `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = isqrt_big(n);
    (&r * &r == *n).then_some(r)
}

/// Largest `t` with `t(t-1) <= n`. Note `rhombic_floor(0) = 1`.
pub fn rhombic_floor(n: u64) -> u64 {
    let n = n as u128;
    // t(t-1) <= n  <=>  (2t-1)^2 <= 4n+1
    let mut t = (isqrt_u128(4 * n + 1) + 1) / 2;
    while t * (t - 1) > n {
        t -= 1;
    }
    while (t + 1) * t <= n {
        t += 1;
    }
    t as u64
}

/// Arbitrary-precision [`rhombic_floor`].
pub fn rhombic_floor_big(n: &BigUint) -> BigUint {
    let disc: BigUint = (n << 2u32) + 1u32;
    let mut t: BigUint = (isqrt_big(&disc) + 1u32) >> 1u32;
    while &t * (&t - 1u32) > *n {
        t -= 1u32;
    }
    loop {
        let next = &t + 1u32;
        if &next * &t <= *n {
            t = next;
        } else {
            return t;
        }
    }
}

/// `t(t-1)` for a big `t`.
pub fn rhombic_big(t: &BigUint) -> BigUint {
    if t.is_zero() {
        return BigUint::zero();
    }
    t * (t - BigUint::one())
}

/// The `t` with `t(t-1) = m`, if there is one.
pub fn solve_rhombic(m: &BigUint) -> Option<BigUint> {
    let t = rhombic_floor_big(m);
    (rhombic_big(&t) == *m).then_some(t)
}

pub fn solve_rhombic_u64(m: u64) -> Option<u64> {
    let t = rhombic_floor(m);
    (rhombic(t) == m).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn floor_examples() {
        assert_eq!(rhombic_floor(128), 11);
        assert_eq!(rhombic_floor(0), 1);
        assert_eq!(rhombic_floor(342), 19);
        assert_eq!(rhombic_floor(341), 18);
        assert_eq!(rhombic_floor(u64::MAX), 4294967296);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_rhombic_u64(342), Some(19));
        assert_eq!(solve_rhombic_u64(0), Some(1));
        assert_eq!(solve_rhombic_u64(24), None);
        let m = BigUint::from(342u32);
        assert_eq!(solve_rhombic(&m), Some(BigUint::from(19u32)));
    }

    #[test]
    fn big_floor_on_huge_rhombic() {
        let t: BigUint = BigUint::from(10u32).pow(40) + 7u32;
        let n = rhombic_big(&t);
        assert_eq!(rhombic_floor_big(&n), t);
        assert_eq!(rhombic_floor_big(&(&n - 1u32)), &t - 1u32);
        assert_eq!(solve_rhombic(&n), Some(t));
    }

    proptest! {
        #[test]
        fn floor_is_maximal(n in 0u64..(1u64 << 62)) {
            let t = rhombic_floor(n);
            prop_assert!(rhombic(t) <= n);
            prop_assert!((t as u128 + 1) * t as u128 > n as u128);
            prop_assert_eq!(BigUint::from(t), rhombic_floor_big(&BigUint::from(n)));
        }

        #[test]
        fn isqrt_brackets(n in any::<u128>()) {
            let r = isqrt_u128(n);
            prop_assert!(r * r <= n);
            prop_assert!((r + 1).checked_mul(r + 1).map_or(true, |s| s > n));
        }
    }
}
