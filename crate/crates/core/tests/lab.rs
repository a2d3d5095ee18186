use std::collections::HashMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use rhombic_core::classnum::is_prime;
use rhombic_core::field::{Domain, DomainSpec};
use rhombic_core::lab::{
    classify, ds_to_function, expected_nk, function_to_ds, is_difference_set, monte_carlo_nk, n_k,
    seeded_random_function, FunctionTable,
};
use rhombic_core::partition::cost_u64;
use rhombic_core::CostTable;

fn fields_up_to(max: u32) -> Vec<Domain> {
    let mut out = Vec::new();
    for p in (2..=max).filter(|&p| is_prime(p as u64)) {
        out.push(Domain::prime_field(p).unwrap());
        let mut n = 2;
        while p.pow(n) <= max {
            out.push(Domain::ext_field(p, n).unwrap());
            n += 1;
        }
    }
    out
}

/// V and N2 straight from the image table.
fn direct_counts(f: &FunctionTable) -> (u64, u64) {
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for &y in f.images() {
        *counts.entry(y).or_default() += 1;
    }
    (counts.len() as u64, counts.values().map(|c| c * (c - 1)).sum())
}

#[test]
fn monomial_class_inclusions() {
    let mut planar = 0;
    for dom in fields_up_to(125) {
        let q = dom.order();
        for d in 1..q as u64 {
            let r = classify(&FunctionTable::monomial(dom.clone(), d)).unwrap();
            assert!(!r.is_planar || r.in_c3, "x^{d} over {q}");
            assert!(!r.in_c3 || r.in_c4, "x^{d} over {q}");
            assert_eq!(r.differential_uniformity == 1, r.is_planar, "x^{d} over {q}");
            if q % 2 == 0 {
                assert!(!r.is_planar);
            }
            planar += r.is_planar as u32;
        }
    }
    assert!(planar > 0);
}

#[test]
fn planar_examples() {
    for p in [3, 5, 7, 11, 13] {
        let r = classify(&FunctionTable::monomial(Domain::prime_field(p).unwrap(), 2)).unwrap();
        assert!(r.is_planar);
        assert_eq!(r.differential_uniformity, 1);
        assert_eq!(r.v, (p as u64 + 1) / 2);
    }
    assert!(classify(&FunctionTable::monomial(Domain::ext_field(3, 4).unwrap(), 14)).unwrap().is_planar);
    let r = classify(&FunctionTable::monomial(Domain::ext_field(3, 3).unwrap(), 4)).unwrap();
    assert!(r.is_planar);
    assert_eq!(r.v, 14);
}

#[test]
fn difference_sets_round_trip() {
    for (q, set) in [(7u32, vec![1u32, 2, 4]), (13, vec![0, 1, 3, 9]), (21, vec![3, 6, 7, 12, 14])] {
        let dom = Domain::cyclic(q).unwrap();
        assert!(is_difference_set(&set, &dom, 1));
        let f = ds_to_function(&set, &dom).unwrap();
        let r = classify(&f).unwrap();
        assert!(r.in_c3);
        let k = set.len() as u64;
        assert_eq!(q as u64, k * k - k + 1);
        // q - (sqrt(4q - 3) - 1) / 2 with sqrt(4q - 3) = 2k - 1.
        assert_eq!(r.v, q as u64 - (k - 1));
        let mut back = function_to_ds(&f).unwrap();
        back.sort();
        assert_eq!(back, set);
    }
    assert!(!is_difference_set(&[0, 1, 2], &Domain::cyclic(7).unwrap(), 1));
}

#[test]
fn monte_carlo_n2() {
    for q in [9u64, 49] {
        let s = monte_carlo_nk(q, 2, 20_000, 7).unwrap();
        let z = (s.mean_f64() - (q - 1) as f64).abs() / s.std_error();
        assert!(z <= 3.0, "q = {q}: z = {z}");
        assert_eq!(expected_nk(q, 2).unwrap(), num_rational::BigRational::from_integer(((q - 1) as i64).into()));
        assert_eq!(monte_carlo_nk(q, 2, 20_000, 7).unwrap(), s);
    }
}

fn table() -> &'static CostTable {
    static T: OnceLock<CostTable> = OnceLock::new();
    T.get_or_init(|| CostTable::build(30_000).unwrap())
}

fn specs() -> Vec<DomainSpec> {
    vec![
        DomainSpec::Cyclic(9),
        DomainSpec::Cyclic(10),
        DomainSpec::PrimeField(11),
        DomainSpec::ExtField { p: 2, n: 3, modulus: None },
        DomainSpec::ExtField { p: 3, n: 2, modulus: None },
        DomainSpec::Cyclic(25),
    ]
}

proptest! {
    #[test]
    fn image_size_is_q_minus_cost(which in 0usize..6, seed in any::<u64>()) {
        let f = seeded_random_function(&specs()[which], seed).unwrap();
        let r = classify(&f).unwrap();
        let (v, n2) = direct_counts(&f);
        prop_assert_eq!(r.v, v);
        prop_assert_eq!(r.n2, n2);
        prop_assert!(r.cost_identity_holds());
        prop_assert!(r.v + cost_u64(r.n2, table()).unwrap() <= r.q as u64);
        prop_assert_eq!(n_k(&f, 2).unwrap(), n2.into());
        prop_assert!(!r.is_planar || r.in_c3);
        prop_assert!(!r.in_c3 || r.in_c4);
    }
}
