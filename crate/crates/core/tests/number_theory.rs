use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;
use rhombic_core::classnum::{
    class_number, class_numbers_3mod8, count_forms, factorize, is_squarefree, mcd, p_free_squarefree_factor,
    DEFAULT_MCD_CAP,
};
use rhombic_core::diophantine::{lrn_search, nagell_search, thue_solutions, ThueCase, DEFAULT_BIT_BUDGET};

/// Counts reduced primitive forms by scanning every (a, b) with b^2 + D = 4ac.
fn brute_class_number(d: i64) -> u64 {
    let mut h = 0;
    let mut a = 1i64;
    while 3 * a * a <= d {
        for b in -a + 1..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    h
}

#[test]
fn class_numbers_match_brute_force() {
    let sieve = class_numbers_3mod8(4000);
    for (i, &h) in sieve.iter().enumerate() {
        let d = 8 * i as u64 + 3;
        assert_eq!(h as u64, brute_class_number(d as i64), "D = {d}");
        assert_eq!(class_number(d).unwrap(), h as u64, "D = {d}");
    }
    let hs: Vec<u64> = [107, 115, 123, 131, 139].iter().map(|&d| class_number(d).unwrap()).collect();
    assert_eq!(hs, [3, 2, 2, 5, 3]);
}

#[test]
fn mcd_table() {
    let table: Vec<(u64, u64, u64)> = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
        .iter()
        .map(|&m| {
            let r = mcd(m, DEFAULT_MCD_CAP).unwrap();
            (m, r.d, r.i)
        })
        .collect();
    assert_eq!(
        table,
        [
            (3, 59, 7),
            (5, 131, 16),
            (7, 251, 31),
            (11, 659, 82),
            (13, 1019, 127),
            (17, 1091, 136),
            (19, 2099, 262),
            (23, 1811, 226),
            (29, 2939, 367),
            (31, 3251, 406),
        ]
    );
}

#[test]
fn mcd_is_min_over_prime_divisors_and_squarefree() {
    for m in (3..=99u64).step_by(2) {
        let r = mcd(m, DEFAULT_MCD_CAP).unwrap();
        let by_primes = factorize(m).iter().map(|&(p, _)| mcd(p, DEFAULT_MCD_CAP).unwrap().d).min().unwrap();
        assert_eq!(r.d, by_primes, "m = {m}");
        assert!(is_squarefree(r.d), "m = {m}");
        assert_eq!(r.h, class_number(r.d).unwrap());
        assert!(r.h.gcd(&m) > 1);
    }
}

#[test]
fn four_d_ratio() {
    for d in (11..=500u64).step_by(8).filter(|&d| is_squarefree(d)) {
        let h = count_forms(-(d as i64)).unwrap();
        let h4 = count_forms(-4 * d as i64).unwrap();
        assert_eq!(h4, 3 * h, "D = {d}");
    }
    assert_eq!(count_forms(-12).unwrap(), count_forms(-3).unwrap());
}

#[test]
fn lrn_solutions() {
    let mut found = Vec::new();
    for d in [3, 11, 19, 59, 83] {
        for s in lrn_search(d, 1000, 13, true, DEFAULT_BIT_BUDGET).unwrap() {
            assert!(s.verify());
            found.push((s.d, s.x.to_string(), s.y, s.n));
        }
    }
    let expected = [
        (3, "37", 7, 3),
        (11, "31", 3, 5),
        (19, "559", 5, 7),
        (59, "7", 3, 3),
        (59, "21", 5, 3),
        (59, "525", 41, 3),
        (59, "28735", 591, 3),
        (83, "5", 3, 3),
        (83, "3785", 153, 3),
    ];
    let expected: Vec<_> = expected.iter().map(|&(d, x, y, n)| (d, x.to_string(), y, n)).collect();
    assert_eq!(found, expected);
}

#[test]
fn class_number_divisibility_for_composite_exponents() {
    let mut checked = 0;
    for d in (107..=20_000u64).step_by(8).filter(|&d| is_squarefree(d)) {
        for s in lrn_search(d, 15, 15, true, DEFAULT_BIT_BUDGET).unwrap() {
            let n = s.n as u64;
            if factorize(n).len() > 1 || factorize(n)[0].1 > 1 {
                let q = p_free_squarefree_factor(n, 3);
                assert_eq!(class_number(d).unwrap() % q, 0, "D = {d}, n = {n}");
                checked += 1;
            }
        }
    }
    // e.g. 277^2 + 2003 = 4 * 3^9
    assert!(checked >= 10, "{checked}");
}

#[test]
fn nagell_matches_lrn_with_d_3() {
    let nagell = nagell_search(300, 9, DEFAULT_BIT_BUDGET);
    let lrn = lrn_search(3, 300, 9, false, DEFAULT_BIT_BUDGET).unwrap();
    let from_nagell: Vec<(BigUint, u64, u32)> = nagell.iter().map(|s| (&s.x * 2u32 + 1u32, s.y, s.n)).collect();
    let mut from_lrn: Vec<(BigUint, u64, u32)> = lrn.iter().map(|s| (s.x.clone(), s.y, s.n)).collect();
    from_lrn.sort_by(|a, b| (a.1, a.2).cmp(&(b.1, b.2)));
    let mut from_nagell = from_nagell;
    from_nagell.sort_by(|a, b| (a.1, a.2).cmp(&(b.1, b.2)));
    assert_eq!(from_nagell, from_lrn);
    assert_eq!(
        nagell_search(1000, 15, DEFAULT_BIT_BUDGET).iter().map(|s| (s.x.to_string(), s.y, s.n)).collect::<Vec<_>>(),
        [("18".to_string(), 7, 3)]
    );
}

proptest! {
    #[test]
    fn thue_symmetry(bound in 1i64..400) {
        let mut k1 = thue_solutions(ThueCase::K1, bound);
        let mut mapped: Vec<(i64, i64)> = thue_solutions(ThueCase::K2, bound).iter().map(|&(a, b)| (-b, -a)).collect();
        k1.sort();
        mapped.sort();
        prop_assert_eq!(k1, mapped);
    }
}
