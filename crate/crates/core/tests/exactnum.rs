use cubicdelta::exactnum::arith::{euler_phi, is_squarefree};
use cubicdelta::exactnum::{
    cyclotomic_is_rational, factorize, mult_parts, CyclotomicElement, FiniteField, IntPolynomial,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

#[test]
fn factorize_small_and_large_cofactors() {
    let f = factorize(&BigInt::from(12)).unwrap();
    assert_eq!(f.factors, vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]);
    assert!(factorize(&BigInt::from(1)).unwrap().factors.is_empty());
    assert!(factorize(&BigInt::from(0)).is_err());
    for p in ["996001", "1898591", "107541241", "1722583559"] {
        let f = factorize(&big(p)).unwrap();
        assert_eq!(f.factors, vec![(big(p), 1)], "{p} should be prime");
    }
    let n = big("3").pow(13) * big("996001") * big("1898591") * big("107541241") * big("1722583559");
    let f = factorize(&n).unwrap();
    assert_eq!(f.product(), n);
    assert_eq!(f.display(), "3^13 * 996001 * 1898591 * 107541241 * 1722583559");
}

#[test]
fn factorize_negative_and_large_semiprime() {
    let n = -(big("1000000007") * big("998244353"));
    let f = factorize(&n).unwrap();
    assert_eq!(f.product(), n);
    assert_eq!(f.factors.len(), 2);
    // beyond u64: two ~30-bit primes times a Mersenne prime
    let n = big("1000000007") * big("998244353") * big("2305843009213693951");
    let f = factorize(&n).unwrap();
    assert_eq!(f.factors.len(), 3);
    assert_eq!(f.product(), n);
}

#[test]
fn mult_parts_examples() {
    assert_eq!(mult_parts(1), (1, 1, 1));
    assert_eq!(mult_parts(720), (30, 144, 16));
    assert_eq!(mult_parts(8), (2, 8, 8));
}

#[test]
fn mult_parts_divisibility_to_500() {
    for n in 1..=500u64 {
        let (rad, sq, cub) = mult_parts(n);
        assert_eq!(n % rad, 0);
        assert_eq!(sq % cub, 0);
        assert_eq!(n % sq, 0);
        assert!(is_squarefree(n / sq), "n = {n}");
    }
}

#[test]
fn cyclotomic_rationality_examples() {
    let s = (0..3).fold(CyclotomicElement::zero(3), |acc, k| {
        acc.add(&CyclotomicElement::zeta_pow(3, k))
    });
    assert_eq!(cyclotomic_is_rational(&s), Some(BigInt::from(0)));
    let i = CyclotomicElement::zeta_pow(4, 1);
    assert_eq!(cyclotomic_is_rational(&i.mul(&i)), Some(BigInt::from(-1)));
    assert_eq!(cyclotomic_is_rational(&i), None);
    // sum over the nonzero exponents 1..5 of ζ_6, checked against the
    // floating sum of the roots of unity
    let s = (1..6).fold(CyclotomicElement::zero(6), |acc, k| {
        acc.add(&CyclotomicElement::zeta_pow(6, k))
    });
    let direct: Complex64 = (1..6)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 6.0))
        .sum();
    let v = cyclotomic_is_rational(&s).unwrap();
    assert!((direct.re - -1.0).abs() < 1e-12 && direct.im.abs() < 1e-12);
    assert_eq!(v, BigInt::from(-1));
}

#[test]
fn cyclotomic_dimension_matches_phi() {
    for n in 1..=60u64 {
        assert_eq!(CyclotomicElement::zero(n).coeffs().len() as u64, euler_phi(n));
        // ζ^n = 1
        let z = CyclotomicElement::zeta_pow(n as u64, 1);
        let mut acc = CyclotomicElement::from_int(n, 1);
        for _ in 0..n {
            acc = acc.mul(&z);
        }
        assert_eq!(cyclotomic_is_rational(&acc), Some(BigInt::from(1)));
    }
}

fn element(n: u64, seed: &[i64]) -> CyclotomicElement {
    let counts: Vec<i64> = (0..n as usize).map(|k| seed[k % seed.len()]).collect();
    CyclotomicElement::from_exponent_counts(n, &counts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn cyclotomic_products_match_embedding(
        n in 1u64..=200,
        a in proptest::collection::vec(-5i64..=5, 1..7),
        b in proptest::collection::vec(-5i64..=5, 1..7),
    ) {
        let x = element(n, &a);
        let y = element(n, &b);
        let xy = x.mul(&y);
        let num = x.to_complex() * y.to_complex();
        let got = xy.to_complex();
        prop_assert!((got - num).norm() <= 1e-9 * (1.0 + num.norm()));
        let s = x.add(&y);
        prop_assert!((s.to_complex() - x.to_complex() - y.to_complex()).norm() < 1e-9 * (1.0 + num.norm()));
        // canonical: reducing again changes nothing
        let again = CyclotomicElement::reduce(n, xy.coeffs().to_vec());
        prop_assert_eq!(again, xy);
    }
}

const SMALL_Q: [(u64, u32); 12] = [
    (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (13, 1), (3, 3),
];

#[test]
fn finite_field_frobenius_and_cubing() {
    for (p, r) in [(2, 1), (2, 5), (3, 4), (5, 3), (7, 3), (101, 1), (11, 3), (97, 2)] {
        let k = FiniteField::new(p, r).unwrap();
        assert!(k.q <= 10_000);
        // x^q = x and Frobenius is a bijection fixing exactly F_p
        let mut image = vec![false; k.q as usize];
        let mut fixed = 0;
        for a in 0..k.q {
            assert_eq!(k.pow(a, k.q), a);
            let fa = k.frobenius(a);
            image[fa as usize] = true;
            if fa == a {
                fixed += 1;
            }
            for b in [1, 2 % k.q, k.q - 1] {
                assert_eq!(k.frobenius(k.mul(a, b)), k.mul(fa, k.frobenius(b)));
                assert_eq!(k.frobenius(k.add(a, b)), k.add(fa, k.frobenius(b)));
            }
        }
        assert!(image.iter().all(|&x| x));
        assert_eq!(fixed, p);
        let total: u64 = (0..k.q).map(|a| k.cubic_root_count(1, 0, 0, k.neg(a))).sum();
        assert_eq!(total, k.q);
    }
}

#[test]
fn cubic_root_count_examples() {
    let f7 = FiniteField::prime(7).unwrap();
    let direct = (0..7u64).filter(|x| (x * x * x) % 7 == 1).count() as u64;
    assert_eq!(f7.cubic_root_count(1, 0, 0, 6), direct);
    assert_eq!(direct, 3);
    let f5 = FiniteField::prime(5).unwrap();
    for a in 0..5 {
        assert_eq!(f5.cubic_root_count(1, 0, 0, f5.neg(a)), 1);
    }
    assert_eq!(f5.cubic_root_count(0, 0, 0, 0), 5);
    assert_eq!(f5.cubic_root_count(0, 0, 0, 3), 0);
}

#[test]
fn cubic_root_count_matches_enumeration() {
    for (p, r) in SMALL_Q {
        let k = FiniteField::new(p, r).unwrap();
        if k.q > 49 {
            continue;
        }
        let q = k.q;
        let step = if q > 16 { 3 } else { 1 };
        for a3 in (0..q).step_by(step) {
            for a2 in (0..q).step_by(step) {
                for a1 in 0..q {
                    for a0 in 0..q {
                        let want = (0..q)
                            .filter(|&x| {
                                let v = k.add(
                                    k.add(k.mul(a3, k.pow(x, 3)), k.mul(a2, k.mul(x, x))),
                                    k.add(k.mul(a1, x), a0),
                                );
                                v == 0
                            })
                            .count() as u64;
                        assert_eq!(k.cubic_root_count(a3, a2, a1, a0), want);
                    }
                }
            }
        }
    }
}

#[test]
fn cubic_root_count_gcd_path_agrees() {
    // q above the direct-evaluation cutoff
    for (p, r) in [(4099, 1), (67, 2), (17, 3)] {
        let k = FiniteField::new(p, r).unwrap();
        assert!(k.q > 4096);
        let mut seed = 12345u64;
        for _ in 0..40 {
            let mut next = || {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (seed >> 20) % k.q
            };
            let (a3, a2, a1, a0) = (next(), next(), next(), next());
            let want = (0..k.q)
                .filter(|&x| {
                    let v = k.add(
                        k.add(k.mul(a3, k.pow(x, 3)), k.mul(a2, k.mul(x, x))),
                        k.add(k.mul(a1, x), a0),
                    );
                    v == 0
                })
                .count() as u64;
            assert_eq!(k.cubic_root_count(a3, a2, a1, a0), want);
        }
        // split cubic with three prescribed roots
        let (r1, r2, r3) = (1, 2, 5 % k.q);
        let e2 = k.add(k.add(k.mul(r1, r2), k.mul(r1, r3)), k.mul(r2, r3));
        let c2 = k.neg(k.add(k.add(r1, r2), r3));
        let c0 = k.neg(k.mul(k.mul(r1, r2), r3));
        assert_eq!(k.cubic_root_count(1, c2, e2, c0), 3);
    }
}

#[test]
fn trace_matrix_gives_trace_of_products() {
    let k = FiniteField::new(5, 3).unwrap();
    let t = k.trace_matrix();
    for a in (0..k.q).step_by(7) {
        for b in (0..k.q).step_by(11) {
            let (ca, cb) = (k.coeffs(a), k.coeffs(b));
            let mut s = 0;
            for i in 0..3 {
                for j in 0..3 {
                    s += ca[i] * t[i][j] * cb[j];
                }
            }
            assert_eq!(s % 5, k.trace(k.mul(a, b)));
        }
    }
}

#[test]
fn polynomial_factorization() {
    let p5 = IntPolynomial::from_i64(&[1, 0, 9, 0, 20, 0, 100, 0, 1125, 0, 3125]);
    let f = p5.factor().unwrap();
    assert_eq!(
        f,
        vec![
            (IntPolynomial::from_i64(&[1, 0, 5]), 1),
            (IntPolynomial::from_i64(&[1, 0, 4, 0, 0, 0, 100, 0, 625]), 1)
        ]
    );
    let a = IntPolynomial::from_i64(&[1, 1, 7]);
    let b = IntPolynomial::from_i64(&[1, 4, 7]);
    let p7 = a.mul(&b.pow(4));
    assert_eq!(p7.factor().unwrap(), vec![(a, 1), (b, 4)]);
    let x2m2 = IntPolynomial::from_i64(&[-2, 0, 1]);
    assert_eq!(x2m2.factor().unwrap(), vec![(x2m2.clone(), 1)]);
}

#[test]
fn squarefree_decomposition_recovers_multiplicities() {
    let a = IntPolynomial::from_i64(&[1, 0, 13]);
    let b = IntPolynomial::from_i64(&[1, 7, 13]);
    let c = IntPolynomial::from_i64(&[1, 4, 13]);
    let f = a.mul(&b).mul(&c.pow(3));
    let d = f.squarefree_decomposition();
    assert_eq!(d, vec![(a.mul(&b), 1), (c.clone(), 3)]);
    assert_eq!(f.factor().unwrap(), vec![(a, 1), (c, 3), (b, 1)]);
}
