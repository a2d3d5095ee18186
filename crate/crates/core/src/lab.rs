//! Explicit functions on finite groups and fields: image sizes, `N_k`,
//! differential operators, planarity and the C3/C4 classes, and the
//! correspondence between functions meeting the base bound and planar
//! difference sets.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngExt, SeedableRng};
use rand_pcg::Pcg64;

use crate::error::{invalid, resource};
use crate::field::{Domain, DomainSpec};
use crate::rhombic::{rhombic, solve_rhombic_u64};
use crate::Result;

/// Default cap on the group order for the `O(q^2)` differential checks.
pub const DEFAULT_PLANARITY_CAP: u32 = 8192;

/// Orders at or below this are flagged in reports (the bounds assume q > 7).
pub const SMALL_ORDER_THRESHOLD: u32 = 7;

/// A function on a domain given by its image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    domain: Domain,
    images: Vec<u32>,
}

impl FunctionTable {
    pub fn new(domain: Domain, images: Vec<u32>) -> Result<Self> {
        let q = domain.order();
        if images.len() != q as usize {
            return Err(invalid!("table has {} entries, domain has {q}", images.len()));
        }
        if let Some(bad) = images.iter().find(|&&v| v >= q) {
            return Err(invalid!("image {bad} is outside 0..{q}"));
        }
        Ok(Self { domain, images })
    }

    /// `x -> x^d`, evaluated in the domain's multiplication.
    pub fn monomial(domain: Domain, d: u64) -> Self {
        let images = (0..domain.order()).map(|x| domain.pow(x, d)).collect();
        Self { domain, images }
    }

    pub fn from_fn(domain: Domain, f: impl Fn(u32) -> u32) -> Result<Self> {
        let images = (0..domain.order()).map(f).collect();
        Self::new(domain, images)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn order(&self) -> u32 {
        self.domain.order()
    }

    /// Preimage class sizes (including singletons), keyed by image.
    fn class_sizes(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.order() as usize];
        for &v in &self.images {
            counts[v as usize] += 1;
        }
        counts.retain(|&c| c > 0);
        counts
    }
}

/// `V(f)`, the number of distinct images.
pub fn image_size(f: &FunctionTable) -> u64 {
    f.class_sizes().len() as u64
}

/// `N_k(f)`: ordered `k`-tuples of distinct inputs sharing one image.
pub fn n_k(f: &FunctionTable, k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(invalid!("N_k needs k >= 2"));
    }
    let mut total = BigUint::zero();
    for s in f.class_sizes() {
        if s >= k as u64 {
            total += (0..k as u64).fold(BigUint::one(), |acc, i| acc * (s - i));
        }
    }
    Ok(total)
}

/// `x -> f(x + a) - f(x)`.
pub fn differential_operator(f: &FunctionTable, a: u32) -> Result<FunctionTable> {
    let dom = f.domain();
    if a == 0 || a >= dom.order() {
        return Err(invalid!("shift must be a nonzero element, got {a}"));
    }
    let images = (0..dom.order())
        .map(|x| dom.sub(f.images[dom.add(x, a) as usize], f.images[x as usize]))
        .collect();
    Ok(FunctionTable { domain: dom.clone(), images })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub q: u32,
    pub v: u64,
    pub n2: u64,
    pub is_permutation: bool,
    /// `N_2(f) = q - 1`.
    pub in_c4: bool,
    /// Every nontrivial differential operator has exactly one zero.
    pub in_c3: bool,
    /// Every nontrivial differential operator is a permutation.
    pub is_planar: bool,
    /// Largest preimage count over all images of all nontrivial operators.
    pub differential_uniformity: u64,
    /// class size -> number of classes of that size (singletons included).
    pub class_size_histogram: BTreeMap<u64, u64>,
    pub below_threshold_warning: bool,
}

impl AnalysisReport {
    /// `q - sum (s - 1)` over preimage classes.
    pub fn cost_identity_holds(&self) -> bool {
        let lost: u64 = self.class_size_histogram.iter().map(|(s, c)| (s - 1) * c).sum();
        let pairs: u64 = self.class_size_histogram.iter().map(|(s, c)| rhombic(*s) * c).sum();
        self.v == self.q as u64 - lost && self.n2 == pairs
    }
}

pub fn classify(f: &FunctionTable) -> Result<AnalysisReport> {
    classify_with_cap(f, DEFAULT_PLANARITY_CAP)
}

pub fn classify_with_cap(f: &FunctionTable, cap: u32) -> Result<AnalysisReport> {
    let q = f.order();
    if q > cap {
        return Err(resource!("differential checks are O(q^2); q = {q} exceeds the cap {cap}"));
    }
    let sizes = f.class_sizes();
    let mut class_size_histogram = BTreeMap::new();
    for &s in &sizes {
        *class_size_histogram.entry(s).or_insert(0) += 1;
    }
    let v = sizes.len() as u64;
    let n2: u64 = sizes.iter().map(|&s| rhombic(s)).sum();

    let dom = f.domain();
    let mut du = 0u64;
    let mut planar = q > 1;
    let mut c3 = q > 1;
    let mut counts = vec![0u32; q as usize];
    for a in 1..q {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..q {
            let d = dom.sub(f.images[dom.add(x, a) as usize], f.images[x as usize]);
            counts[d as usize] += 1;
        }
        let max = *counts.iter().max().unwrap_or(&0) as u64;
        du = du.max(max);
        planar &= max == 1;
        c3 &= counts[0] == 1;
    }
    let report = AnalysisReport {
        q,
        v,
        n2,
        is_permutation: v == q as u64,
        in_c4: n2 + 1 == q as u64,
        in_c3: c3,
        is_planar: planar,
        differential_uniformity: du,
        class_size_histogram,
        below_threshold_warning: q <= SMALL_ORDER_THRESHOLD,
    };
    debug_assert!(!report.is_planar || report.in_c3);
    debug_assert!(!report.in_c3 || report.in_c4);
    Ok(report)
}

/// Whether every nonzero `g` is `x - y` with `x, y` in `set` in exactly
/// `lambda` ways.
pub fn is_difference_set(set: &[u32], domain: &Domain, lambda: u64) -> bool {
    let q = domain.order();
    if set.is_empty() || set.iter().any(|&s| s >= q) {
        return false;
    }
    let mut members = set.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() != set.len() {
        return false;
    }
    let mut reps = vec![0u64; q as usize];
    for &x in &members {
        for &y in &members {
            if x != y {
                reps[domain.sub(x, y) as usize] += 1;
            }
        }
    }
    reps[1..].iter().all(|&r| r == lambda)
}

/// The function that is constant on a planar difference set and injective,
/// with fresh images, elsewhere.
pub fn ds_to_function(set: &[u32], domain: &Domain) -> Result<FunctionTable> {
    if set.len() < 2 {
        return Err(invalid!("a difference set needs at least two elements"));
    }
    if !is_difference_set(set, domain, 1) {
        return Err(invalid!("{set:?} is not a planar difference set in a group of order {}", domain.order()));
    }
    let anchor = *set.iter().min().unwrap();
    FunctionTable::from_fn(domain.clone(), |x| if set.contains(&x) { anchor } else { x })
}

/// The preimage set of the repeated value of a C3 function meeting the base
/// bound (one class of size `t` with `t(t-1) = q-1`, all others singletons).
pub fn function_to_ds(f: &FunctionTable) -> Result<Vec<u32>> {
    let report = classify(f)?;
    let q = f.order() as u64;
    let big: Vec<(&u64, &u64)> = report.class_size_histogram.iter().filter(|(s, _)| **s > 1).collect();
    let shape_ok = match big.as_slice() {
        [(&t, &1)] => solve_rhombic_u64(q - 1) == Some(t),
        _ => false,
    };
    if !shape_ok || !report.in_c3 {
        return Err(invalid!(
            "function does not meet the base bound as a C3 function (in_c3 = {}, class sizes {:?})",
            report.in_c3,
            report.class_size_histogram
        ));
    }
    let mut counts = vec![0u32; q as usize];
    for &v in f.images() {
        counts[v as usize] += 1;
    }
    let repeated = counts.iter().position(|&c| c > 1).unwrap() as u32;
    Ok((0..q as u32).filter(|&x| f.images()[x as usize] == repeated).collect())
}

/// `C(q, k) k! / q^(k-1)`, the mean of `N_k` over all functions on a q-set.
pub fn expected_nk(q: u64, k: u64) -> Result<BigRational> {
    if k < 2 || k > q {
        return Err(invalid!("expected N_k needs 2 <= k <= q, got k = {k}, q = {q}"));
    }
    let falling = (0..k).fold(BigUint::one(), |acc, i| acc * (q - i));
    let denom = BigUint::from(q).pow((k - 1) as u32);
    Ok(BigRational::new(falling.into(), denom.into()))
}

/// Trials per independently seeded block in [`monte_carlo_nk`].
pub const MONTE_CARLO_BLOCK: u64 = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub q: u64,
    pub k: u32,
    pub trials: u64,
    pub seed: u64,
    pub sum: BigUint,
    pub sum_sq: BigUint,
}

impl MonteCarloSummary {
    pub fn mean(&self) -> BigRational {
        BigRational::new(self.sum.clone().into(), BigUint::from(self.trials).into())
    }

    pub fn mean_f64(&self) -> f64 {
        self.sum.to_f64().unwrap_or(f64::NAN) / self.trials as f64
    }

    /// Standard error of the mean from the unbiased sample variance.
    pub fn std_error(&self) -> f64 {
        if self.trials < 2 {
            return f64::NAN;
        }
        let n = self.trials as f64;
        let mean = self.mean_f64();
        let var = (self.sum_sq.to_f64().unwrap_or(f64::NAN) - n * mean * mean) / (n - 1.0);
        libm::sqrt(var.max(0.0) / n)
    }

    pub fn merge(mut self, other: &MonteCarloSummary) -> Self {
        self.trials += other.trials;
        self.sum += &other.sum;
        self.sum_sq += &other.sum_sq;
        self
    }
}

/// Seed of block `block` derived from the run seed (splitmix64 finaliser).
pub fn block_seed(seed: u64, block: u64) -> u64 {
    let mut z = seed ^ block.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Number of blocks needed for `trials`.
pub fn monte_carlo_blocks(trials: u64) -> u64 {
    trials.div_ceil(MONTE_CARLO_BLOCK)
}

/// One block of [`monte_carlo_nk`]; blocks are independent so callers may run
/// them in parallel and [`MonteCarloSummary::merge`] the results.
pub fn monte_carlo_block(q: u64, k: u32, trials: u64, seed: u64, block: u64) -> MonteCarloSummary {
    let start = block * MONTE_CARLO_BLOCK;
    let count = trials.saturating_sub(start).min(MONTE_CARLO_BLOCK);
    let mut rng = Pcg64::seed_from_u64(block_seed(seed, block));
    let mut counts = vec![0u64; q as usize];
    let mut sum = BigUint::zero();
    let mut sum_sq = BigUint::zero();
    for _ in 0..count {
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..q {
            counts[rng.random_range(0..q) as usize] += 1;
        }
        let nk: u128 = counts
            .iter()
            .filter(|&&s| s >= k as u64)
            .map(|&s| (0..k as u64).map(|i| (s - i) as u128).product::<u128>())
            .sum();
        sum += nk;
        sum_sq += BigUint::from(nk) * nk;
    }
    MonteCarloSummary { q, k, trials: count, seed, sum, sum_sq }
}

/// Mean of `N_k` over `trials` uniformly random functions on a q-set.
pub fn monte_carlo_nk(q: u64, k: u32, trials: u64, seed: u64) -> Result<MonteCarloSummary> {
    if trials == 0 {
        return Err(invalid!("at least one trial is needed"));
    }
    if q == 0 || k < 2 {
        return Err(invalid!("need q >= 1 and k >= 2"));
    }
    let empty = MonteCarloSummary { q, k, trials: 0, seed, sum: BigUint::zero(), sum_sq: BigUint::zero() };
    Ok((0..monte_carlo_blocks(trials))
        .map(|b| monte_carlo_block(q, k, trials, seed, b))
        .fold(empty, |acc, b| acc.merge(&b)))
}

/// A uniformly random image table on `domain`.
pub fn random_function<R: Rng + ?Sized>(domain: &Domain, rng: &mut R) -> FunctionTable {
    let q = domain.order();
    let images = (0..q).map(|_| rng.random_range(0..q)).collect();
    FunctionTable { domain: domain.clone(), images }
}

/// A seeded random function, reproducible from `(spec, seed)`.
pub fn seeded_random_function(spec: &DomainSpec, seed: u64) -> Result<FunctionTable> {
    let domain = Domain::new(spec)?;
    let mut rng = Pcg64::seed_from_u64(seed);
    Ok(random_function(&domain, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn gf(p: u32) -> Domain {
        Domain::prime_field(p).unwrap()
    }

    #[test]
    fn image_size_examples() {
        assert_eq!(image_size(&FunctionTable::monomial(gf(7), 2)), 4);
        let id = FunctionTable::from_fn(Domain::cyclic(9).unwrap(), |x| x).unwrap();
        assert_eq!(image_size(&id), 9);
        let f = FunctionTable::monomial(Domain::ext_field(3, 4).unwrap(), 14);
        assert_eq!(image_size(&f), 41);
    }

    #[test]
    fn n_k_examples() {
        let sq = FunctionTable::monomial(gf(7), 2);
        assert_eq!(n_k(&sq, 2).unwrap(), BigUint::from(6u32));
        let id = FunctionTable::from_fn(Domain::cyclic(9).unwrap(), |x| x).unwrap();
        assert!(n_k(&id, 2).unwrap().is_zero());
        let constant = FunctionTable::from_fn(Domain::cyclic(9).unwrap(), |_| 4).unwrap();
        assert_eq!(n_k(&constant, 2).unwrap(), BigUint::from(72u32));
        assert_eq!(n_k(&constant, 3).unwrap(), BigUint::from(504u32));
        assert!(n_k(&constant, 1).is_err());
    }

    #[test]
    fn differential_operator_examples() {
        let sq = FunctionTable::monomial(gf(7), 2);
        let d = differential_operator(&sq, 1).unwrap();
        let expect: Vec<u32> = (0..7).map(|x| (2 * x + 1) % 7).collect();
        assert_eq!(d.images(), expect.as_slice());
        let constant = FunctionTable::from_fn(gf(7), |_| 3).unwrap();
        assert!(differential_operator(&constant, 2).unwrap().images().iter().all(|&v| v == 0));
        let lin = FunctionTable::from_fn(Domain::cyclic(5).unwrap(), |x| x).unwrap();
        assert!(differential_operator(&lin, 2).unwrap().images().iter().all(|&v| v == 2));
        assert!(differential_operator(&lin, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        for p in [3, 5, 7, 11, 13] {
            let r = classify(&FunctionTable::monomial(gf(p), 2)).unwrap();
            assert!(r.is_planar && r.in_c3 && r.in_c4);
            assert_eq!(r.differential_uniformity, 1);
            assert_eq!(r.v, (p as u64 + 1) / 2);
        }
        let r = classify(&FunctionTable::monomial(Domain::ext_field(3, 4).unwrap(), 14)).unwrap();
        assert!(r.is_planar);
        let r = classify(&FunctionTable::monomial(Domain::ext_field(2, 3).unwrap(), 2)).unwrap();
        assert!(!r.is_planar);
        assert!(r.below_threshold_warning == false);
        assert!(classify(&FunctionTable::monomial(gf(5), 2)).unwrap().below_threshold_warning);
    }

    #[test]
    fn planarity_cap() {
        let f = FunctionTable::monomial(gf(13), 2);
        assert!(matches!(classify_with_cap(&f, 11), Err(crate::Error::Resource(_))));
    }

    #[test]
    fn difference_sets() {
        let z13 = Domain::cyclic(13).unwrap();
        let z7 = Domain::cyclic(7).unwrap();
        assert!(is_difference_set(&[0, 1, 3, 9], &z13, 1));
        assert!(is_difference_set(&[1, 2, 4], &z7, 1));
        assert!(!is_difference_set(&[0, 1], &Domain::cyclic(5).unwrap(), 1));

        let f = ds_to_function(&[0, 1, 3, 9], &z13).unwrap();
        let r = classify(&f).unwrap();
        assert_eq!(r.v, 10);
        assert!(r.in_c3);
        assert_eq!(function_to_ds(&f).unwrap(), vec![0, 1, 3, 9]);

        let f = ds_to_function(&[1, 2, 4], &z7).unwrap();
        let r = classify(&f).unwrap();
        assert_eq!(r.v, 5);
        assert!(r.in_c3);
        assert_eq!(function_to_ds(&f).unwrap(), vec![1, 2, 4]);

        assert!(ds_to_function(&[3], &z7).is_err());
        assert!(function_to_ds(&FunctionTable::monomial(gf(7), 2)).is_err());
    }

    #[test]
    fn expected_values() {
        assert_eq!(expected_nk(49, 2).unwrap(), BigRational::from_integer(48.into()));
        let e = expected_nk(5, 3).unwrap();
        assert_eq!(e, BigRational::new(12.into(), 5.into()));
        assert!(!e.is_integer());
        assert_eq!(expected_nk(2, 2).unwrap(), BigRational::one());
        assert!(expected_nk(3, 4).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_nk(9, 2, 1, 42).unwrap();
        let b = monte_carlo_nk(9, 2, 1, 42).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_nk(9, 2, 3000, 7).unwrap();
        assert_eq!(c.trials, 3000);
        assert!((c.mean_f64() - 8.0).abs() < 3.0 * c.std_error());
    }
}
