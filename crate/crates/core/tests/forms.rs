use cubicdelta::forms::{
    disc_delta, e_exponent, enumerate_singular_c, enumerate_singular_c_brute, is_singular_c,
    is_smooth_section, square_class_decompose, CVector, DiagonalCubicForm, DiscNormalization,
};
use cubicdelta::Error;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use DiscNormalization::{AppendixCode, Definition};

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

#[test]
fn reference_discriminant_value() {
    let f = DiagonalCubicForm::fermat(6).unwrap();
    let c = CVector::new(vec![1, 2, 3, 4, 5, 6]);
    let want = big("3").pow(13) * big("996001") * big("1898591") * big("107541241") * big("1722583559");
    assert_eq!(disc_delta(&f, &c, AppendixCode).unwrap(), want);
    // the two normalizations differ by 3^{e_m - 1} on Fermat input
    let d = disc_delta(&f, &c, Definition).unwrap();
    assert_eq!(d, want * BigInt::from(3).pow(68));
}

#[test]
fn e_exponent_values() {
    let got: Vec<u64> = (3..=7).map(|m| e_exponent(m).unwrap()).collect();
    assert_eq!(got, vec![3, 9, 27, 69, 171]);
    assert!(e_exponent(2).is_err());
    // closed formula, evaluated independently in i128
    for m in 3..=20i128 {
        let v = ((-1i128).pow((m - 1) as u32) - 2i128.pow((m - 1) as u32)) / 3
            + (m - 1) * 2i128.pow((m - 2) as u32);
        assert_eq!(e_exponent(m as usize).unwrap() as i128, v);
    }
}

#[test]
fn coordinate_vector_gives_power_of_three() {
    for m in 3..=6 {
        let f = DiagonalCubicForm::fermat(m).unwrap();
        let d = disc_delta(&f, &CVector::unit(m, m), Definition).unwrap();
        assert_eq!(d.magnitude(), BigInt::from(3).pow(e_exponent(m).unwrap() as u32).magnitude());
    }
    let f4 = DiagonalCubicForm::fermat(4).unwrap();
    assert_eq!(disc_delta(&f4, &CVector::unit(4, 4), Definition).unwrap(), BigInt::from(19683));
}

#[test]
fn alternating_ones_are_singular() {
    let f = DiagonalCubicForm::fermat(4).unwrap();
    let c = CVector::new(vec![1, 1, 1, 1]);
    assert!(disc_delta(&f, &c, Definition).unwrap().is_zero());
    assert!(matches!(is_smooth_section(&f, &c, 5), Err(Error::SingularSection)));
}

#[test]
fn smoothness_at_small_primes() {
    let f = DiagonalCubicForm::fermat(6).unwrap();
    let c = CVector::new(vec![1, 2, 3, 4, 5, 6]);
    assert!(!is_smooth_section(&f, &c, 3).unwrap());
    for p in [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
        assert!(is_smooth_section(&f, &c, p).unwrap(), "p = {p}");
    }
    // p dividing every c_i divides Δ
    let c = CVector::new(vec![5, 10, 15, 20, 25, 35]);
    assert!(!is_smooth_section(&f, &c, 5).unwrap());
}

/// Reference Δ by floating evaluation of the bracket product with complex
/// square roots, used to sanity-check the exact algebra on random input.
fn disc_float(f: &[i64], c: &[i64]) -> f64 {
    use num_complex::Complex64;
    let m = f.len();
    let roots: Vec<Complex64> = (0..m)
        .map(|i| Complex64::new((c[i] as f64).powi(3) / f[i] as f64, 0.0).sqrt())
        .collect();
    let mut prod = Complex64::new(1.0, 0.0);
    for s in 0u32..1 << (m - 1) {
        let mut b = roots[0];
        for i in 1..m {
            b += if s >> (i - 1) & 1 == 1 { -roots[i] } else { roots[i] };
        }
        prod *= b;
    }
    prod.re * 3f64
}

#[test]
fn exact_bracket_product_matches_floating_evaluation() {
    let cases: [(&[i64], &[i64]); 4] = [
        (&[1, 1, 1, 1], &[1, 2, 3, 5]),
        (&[1, 2, -3, 5], &[2, -1, 1, 3]),
        (&[1, 1, 1, 1, 1], &[1, -2, 3, 1, 2]),
        (&[2, 3, 5], &[1, 1, -1]),
    ];
    for (fc, cc) in cases {
        let f = DiagonalCubicForm::new(fc.to_vec()).unwrap();
        let c = CVector::new(cc.to_vec());
        let p: f64 = fc.iter().map(|&x| x as f64).product();
        let exact = disc_delta(&f, &c, Definition).unwrap();
        let m = fc.len();
        let scale = 3f64.powi(e_exponent(m).unwrap() as i32 - 1) * p.powi(1 << (m - 2));
        let want = disc_float(fc, cc) * scale;
        let got: f64 = exact.to_string().parse().unwrap();
        assert!((got - want).abs() <= 1e-6 * want.abs().max(1.0), "{fc:?} {cc:?}: {got} vs {want}");
    }
}

fn small_vec(m: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-4i64..=4, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn homogeneous_in_c(c in small_vec(4), lambda in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let f = DiagonalCubicForm::new(vec![1, 2, -1, 3]).unwrap();
        let d = disc_delta(&f, &CVector::new(c.clone()), Definition).unwrap();
        let cl: Vec<i64> = c.iter().map(|x| x * lambda).collect();
        let dl = disc_delta(&f, &CVector::new(cl), Definition).unwrap();
        prop_assert_eq!(dl, d * BigInt::from(lambda).pow(3 * 4));
    }

    #[test]
    fn homogeneous_in_f(c in small_vec(4), lambda in prop_oneof![-3i64..=-1, 2i64..=3]) {
        let f = DiagonalCubicForm::new(vec![1, -2, 1, 5]).unwrap();
        let c = CVector::new(c);
        let d = disc_delta(&f, &c, Definition).unwrap();
        let dl = disc_delta(&f.scaled(lambda).unwrap(), &c, Definition).unwrap();
        prop_assert_eq!(dl, d * BigInt::from(lambda).pow(3 * 4));
    }

    #[test]
    fn permutation_symmetric(c in small_vec(5), perm in Just(vec![0usize, 1, 2, 3, 4]).prop_shuffle()) {
        let f = DiagonalCubicForm::new(vec![1, 2, -3, 1, 4]).unwrap();
        let d = disc_delta(&f, &CVector::new(c.clone()), Definition).unwrap();
        let cp: Vec<i64> = perm.iter().map(|&i| c[i]).collect();
        let dp = disc_delta(&f.permuted(&perm), &CVector::new(cp), Definition).unwrap();
        prop_assert_eq!(dp.magnitude(), d.magnitude());
    }

    #[test]
    fn square_class_test_matches_delta(c in small_vec(4), fc in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 4)) {
        let f = DiagonalCubicForm::new(fc).unwrap();
        let c = CVector::new(c);
        let zero = disc_delta(&f, &c, Definition).unwrap().is_zero();
        prop_assert_eq!(is_singular_c(&f, &c).unwrap(), zero);
    }
}

#[test]
fn singular_enumeration_examples() {
    let f6 = DiagonalCubicForm::fermat(6).unwrap();
    assert!(enumerate_singular_c(&f6, 1).contains(&CVector::new(vec![1; 6])));
    let f4 = DiagonalCubicForm::fermat(4).unwrap();
    assert!(enumerate_singular_c(&f4, 1).contains(&CVector::new(vec![1; 4])));
}

#[test]
fn singular_enumeration_matches_brute_force() {
    let f4 = DiagonalCubicForm::fermat(4).unwrap();
    let fast = enumerate_singular_c(&f4, 3);
    let slow = enumerate_singular_c_brute(&f4, 3);
    assert_eq!(fast, slow);
    assert!(fast.windows(2).all(|w| w[0] < w[1]));
    for (fc, z) in [(vec![1i64, 2, -1, 2], 4u64), (vec![1, -3, 3, 1, 9], 2), (vec![2, 1, 1, -2], 4)] {
        let f = DiagonalCubicForm::new(fc).unwrap();
        assert_eq!(enumerate_singular_c(&f, z), enumerate_singular_c_brute(&f, z));
    }
}

#[test]
fn square_class_examples() {
    let f6 = DiagonalCubicForm::fermat(6).unwrap();
    let d = square_class_decompose(&f6, &CVector::new(vec![1, 4, 9, 16, 25, 36])).unwrap();
    assert_eq!(d.classes.len(), 1);
    assert_eq!(d.classes[0].g, 1);

    let f4 = DiagonalCubicForm::fermat(4).unwrap();
    let d = square_class_decompose(&f4, &CVector::new(vec![1, 1, 1, 1])).unwrap();
    assert!(d.vanishing);
    // any vanishing sign pattern is acceptable; (+,−,+,−) is one of them
    let e = &d.classes[0].e;
    assert!(e.iter().all(|x| x.abs() == 1));
    assert_eq!(e.iter().map(|x| x.pow(3)).sum::<i64>(), 0);
    assert_eq!(e[0], 1);

    let d = square_class_decompose(&f6, &CVector::new(vec![2, 2, 8, 8, 18, 18])).unwrap();
    assert_eq!(d.classes.len(), 1);
    assert_eq!(d.classes[0].g, 2);
    let abs: Vec<i64> = d.classes[0].e.iter().map(|x| x.abs()).collect();
    assert_eq!(abs, vec![1, 1, 2, 2, 3, 3]);
    for (i, &e) in d.classes[0].indices.iter().zip(&d.classes[0].e) {
        assert_eq!([2, 2, 8, 8, 18, 18][*i], 2 * e * e);
    }

    assert!(square_class_decompose(&f4, &CVector::new(vec![1, 0, 1, 1])).is_err());
}
