//! Finite groups and fields with elements numbered `0..q`.
//!
//! * `Cyclic(m)`: the ring `Z/mZ`, element `k` is the residue `k`.
//! * `PrimeField(p)`: `GF(p)`, same numbering.
//! * `ExtField`: `GF(p^n) = GF(p)[x] / (modulus)`; element `k` is the
//!   polynomial whose coefficient of `x^i` is the `i`-th base-`p` digit of `k`.
//!
//! Additive structure is always the group the lab differentiates over.

use alloc::vec;
use alloc::vec::Vec;

use crate::classnum::is_prime;
use crate::error::invalid;
use crate::Result;

/// How the domain was described by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSpec {
    Cyclic(u32),
    PrimeField(u32),
    /// `modulus` lists coefficients low to high (`n + 1` entries, monic).
    /// `None` selects the smallest monic irreducible polynomial.
    ExtField { p: u32, n: u32, modulus: Option<Vec<u32>> },
}

/// Largest order accepted when building a domain.
pub const MAX_DOMAIN_ORDER: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    Cyclic,
    Prime,
    Ext { modulus: Vec<u32> },
}

/// A validated domain with arithmetic on element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    kind: Kind,
    p: u32,
    n: u32,
    q: u32,
}

impl Domain {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        match spec {
            DomainSpec::Cyclic(m) => {
                if *m < 1 || *m > MAX_DOMAIN_ORDER {
                    return Err(invalid!("cyclic order {m} out of range"));
                }
                Ok(Self { kind: Kind::Cyclic, p: *m, n: 1, q: *m })
            }
            DomainSpec::PrimeField(p) => {
                if !is_prime(*p as u64) || *p > MAX_DOMAIN_ORDER {
                    return Err(invalid!("{p} is not a supported prime"));
                }
                Ok(Self { kind: Kind::Prime, p: *p, n: 1, q: *p })
            }
            DomainSpec::ExtField { p, n, modulus } => {
                let (p, n) = (*p, *n);
                if !is_prime(p as u64) {
                    return Err(invalid!("{p} is not prime"));
                }
                if n < 1 {
                    return Err(invalid!("extension degree must be at least 1"));
                }
                let q = (p as u64).checked_pow(n).filter(|&q| q <= MAX_DOMAIN_ORDER as u64);
                let Some(q) = q else {
                    return Err(invalid!("GF({p}^{n}) exceeds the supported order"));
                };
                let modulus = match modulus {
                    Some(m) => {
                        if m.len() != n as usize + 1 || m[n as usize] != 1 {
                            return Err(invalid!("modulus must be monic of degree {n}"));
                        }
                        if m.iter().any(|&c| c >= p) {
                            return Err(invalid!("modulus coefficients must be below {p}"));
                        }
                        if !is_irreducible(m, p) {
                            return Err(invalid!("modulus {m:?} is reducible over GF({p})"));
                        }
                        m.clone()
                    }
                    None => smallest_irreducible(p, n),
                };
                Ok(Self { kind: Kind::Ext { modulus }, p, n, q: q as u32 })
            }
        }
    }

    pub fn cyclic(m: u32) -> Result<Self> {
        Self::new(&DomainSpec::Cyclic(m))
    }

    pub fn prime_field(p: u32) -> Result<Self> {
        Self::new(&DomainSpec::PrimeField(p))
    }

    pub fn ext_field(p: u32, n: u32) -> Result<Self> {
        Self::new(&DomainSpec::ExtField { p, n, modulus: None })
    }

    /// Number of elements.
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, Kind::Cyclic) || is_prime(self.q as u64)
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        match &self.kind {
            Kind::Ext { modulus } => Some(modulus),
            _ => None,
        }
    }

    pub fn spec(&self) -> DomainSpec {
        match &self.kind {
            Kind::Cyclic => DomainSpec::Cyclic(self.q),
            Kind::Prime => DomainSpec::PrimeField(self.q),
            Kind::Ext { modulus } => {
                DomainSpec::ExtField { p: self.p, n: self.n, modulus: Some(modulus.clone()) }
            }
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            Kind::Cyclic | Kind::Prime => ((a as u64 + b as u64) % self.q as u64) as u32,
            Kind::Ext { .. } => self.digitwise(a, b, |x, y| (x + y) % self.p),
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            Kind::Cyclic | Kind::Prime => {
                ((a as u64 + self.q as u64 - b as u64) % self.q as u64) as u32
            }
            Kind::Ext { .. } => self.digitwise(a, b, |x, y| (x + self.p - y) % self.p),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += op(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.kind {
            Kind::Cyclic | Kind::Prime => ((a as u64 * b as u64) % self.q as u64) as u32,
            Kind::Ext { modulus } => {
                let p = self.p as u64;
                let n = self.n as usize;
                let (da, db) = (self.digits(a), self.digits(b));
                let mut prod = vec![0u64; 2 * n - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
                    }
                }
                // Reduce with x^n = -sum modulus[i] x^i.
                for k in (n..prod.len()).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, &m) in modulus[..n].iter().enumerate() {
                        let idx = k - n + i;
                        prod[idx] = (prod[idx] + c * (p - m as u64)) % p;
                    }
                }
                self.from_digits(&prod[..n])
            }
        }
    }

    /// Square-and-multiply, with `x^0 = 1` including `0^0`.
    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut acc = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    pub fn one(&self) -> u32 {
        if self.q == 1 {
            0
        } else {
            1
        }
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.n)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, digits: &[u64]) -> u32 {
        digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d as u32)
    }
}

/// Remainder of `num` modulo the monic `den` over `GF(p)`, coefficients low
/// to high.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                let v = (r[shift + i] as u64 + (p - lead) as u64 * c as u64) % p as u64;
                r[shift + i] = v as u32;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive check: no monic polynomial of degree `1..=deg/2` divides `f`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = k;
            for _ in 0..d {
                g.push((k % p as u64) as u32);
                k /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `n`, ordering candidates by
/// `sum c_i p^i` over the non-leading coefficients.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for k in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut k = k;
        for _ in 0..n {
            f.push((k % p as u64) as u32);
            k /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(2, 3), [1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(3, 2), [1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 8), [1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert!(is_irreducible(&[2, 1, 0, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn field_axioms_small() {
        for spec in [
            DomainSpec::ExtField { p: 3, n: 2, modulus: None },
            DomainSpec::ExtField { p: 2, n: 4, modulus: None },
            DomainSpec::ExtField { p: 3, n: 3, modulus: None },
            DomainSpec::PrimeField(7),
        ] {
            let f = Domain::new(&spec).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.sub(f.add(a, 5 % q), 5 % q), a);
                if a != 0 {
                    assert_eq!(f.pow(a, q as u64 - 1), 1, "{spec:?} a = {a}");
                    assert!((1..q).any(|b| f.mul(a, b) == 1));
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        let bad = DomainSpec::ExtField { p: 3, n: 2, modulus: Some(vec![2, 0, 1]) };
        assert!(Domain::new(&bad).is_err());
        let not_monic = DomainSpec::ExtField { p: 3, n: 2, modulus: Some(vec![1, 0, 2]) };
        assert!(Domain::new(&not_monic).is_err());
        assert!(Domain::prime_field(9).is_err());
        let given = DomainSpec::ExtField { p: 3, n: 4, modulus: Some(vec![2, 1, 0, 0, 1]) };
        assert_eq!(Domain::new(&given).unwrap().order(), 81);
    }
}
