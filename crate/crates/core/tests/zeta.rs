mod common;

use common::affine_count_direct;
use cubicdelta::cache::DiskCache;
use cubicdelta::exactnum::{FiniteField, HalfPower, IntPolynomial};
use cubicdelta::expsums::{count_hypersurface_coeffs, expsum_prime_power, CountMethod};
use cubicdelta::forms::{CVector, DiagonalCubicForm};
use cubicdelta::zeta::*;
use cubicdelta::Error;
use num_bigint::BigInt;
use num_traits::Zero;

fn fermat(m: usize) -> DiagonalCubicForm {
    DiagonalCubicForm::fermat(m).unwrap()
}

fn c6() -> CVector {
    CVector::new(vec![1, 2, 3, 4, 5, 6])
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

const P5: [i64; 11] = [1, 0, 9, 0, 20, 0, 100, 0, 1125, 0, 3125];
const P7: [i64; 11] = [1, 17, 147, 828, 3354, 10182, 23478, 40572, 50421, 40817, 16807];
const P11: [i64; 11] = [1, 1, 3, 20, 49, 14, 539, 2420, 3993, 14641, 161051];
const P13: [i64; 11] = [1, 19, 197, 1388, 7286, 29666, 94718, 234572, 432809, 542659, 371293];

#[test]
fn middle_dimension_values() {
    assert_eq!(middle_dimension(4), 2);
    assert_eq!(middle_dimension(5), 6);
    assert_eq!(middle_dimension(6), 10);
    assert_eq!(middle_dimension(7), 22);
}

#[test]
fn full_polynomials_at_5_and_7() {
    for (p, want) in [(5u64, P5), (7, P7)] {
        let d = frobenius_charpoly(&fermat(6), &c6(), p, 5).unwrap();
        assert!(d.complete);
        assert_eq!(d.charpoly, poly(&want), "p={p}");
        assert_eq!(d.charpoly.coeff(0), BigInt::from(1));
        assert_eq!(d.charpoly.lead(), BigInt::from(p).pow(5));
        let w = weil_report(&d).unwrap();
        assert!(w.fe_holds);
        assert!(w.max_modulus_error < 1e-9, "{w:?}");
        assert_eq!(w.moduli.len(), 10);
    }
}

#[test]
fn partial_depth_at_11_and_13() {
    for (p, want) in [(11u64, &P11[..4]), (13, &P13[..4])] {
        let d = frobenius_charpoly(&fermat(6), &c6(), p, 3).unwrap();
        assert!(!d.complete);
        assert_eq!(d.charpoly, poly(want));
        assert!(weil_report(&d).is_err());
    }
}

#[test]
fn full_polynomials_at_11_and_13() {
    for (p, want) in [(11u64, P11), (13, P13)] {
        let d = frobenius_charpoly(&fermat(6), &c6(), p, 5).unwrap();
        assert_eq!(d.charpoly, poly(&want), "p={p}");
    }
}

#[test]
fn factorizations() {
    let f5 = charpoly_factor(&frobenius_charpoly(&fermat(6), &c6(), 5, 5).unwrap()).unwrap();
    assert_eq!(f5, vec![(poly(&[1, 0, 5]), 1), (poly(&[1, 0, 4, 0, 0, 0, 100, 0, 625]), 1)]);
    let f7 = charpoly_factor(&frobenius_charpoly(&fermat(6), &c6(), 7, 5).unwrap()).unwrap();
    assert_eq!(f7, vec![(poly(&[1, 1, 7]), 1), (poly(&[1, 4, 7]), 4)]);
    // the factorization routine on the full degree-10 polynomials
    let f13 = poly(&P13).factor().unwrap();
    assert_eq!(f13, vec![(poly(&[1, 0, 13]), 1), (poly(&[1, 4, 13]), 3), (poly(&[1, 7, 13]), 1)]);
    assert_eq!(poly(&P11).factor().unwrap(), vec![(poly(&P11), 1)]);
}

#[test]
fn prediction_over_f_5_6() {
    let d = frobenius_charpoly(&fermat(6), &c6(), 5, 5).unwrap();
    let n6 = count_section_ext(&fermat(6), &c6(), 5, 6).unwrap();
    assert_eq!(predicted_count(&d, 6).unwrap(), n6);
    // depth 6 overdetermines the polynomial and must agree
    let d6 = frobenius_charpoly(&fermat(6), &c6(), 5, 6).unwrap();
    assert_eq!(d6.charpoly, d.charpoly);
}

#[test]
fn first_order_counts() {
    // t-coefficient 0 at p = 5 and 17 at p = 7: E_c(p) = p·c_1
    let fixed = |q: i64| (q.pow(4) - 1) / (q - 1);
    let n5 = count_section_ext(&fermat(6), &c6(), 5, 1).unwrap();
    assert_eq!(n5, BigInt::from(fixed(5)));
    let n7 = count_section_ext(&fermat(6), &c6(), 7, 1).unwrap();
    assert_eq!(n7, BigInt::from(fixed(7) + 7 * 17));
}

#[test]
fn local_factor_values() {
    let d5 = frobenius_charpoly(&fermat(6), &c6(), 5, 5).unwrap();
    let l5 = local_factor_coeffs(&d5, 6).unwrap();
    assert_eq!(l5.values[0], HalfPower::new(BigInt::from(1), 5, 0));
    assert!(l5.values[1].value.is_zero());
    let d7 = frobenius_charpoly(&fermat(6), &c6(), 7, 5).unwrap();
    let l7 = local_factor_coeffs(&d7, 4).unwrap();
    assert_eq!(l7.values[1], HalfPower::new(BigInt::from(-17), 7, 1));
    // λ̃(p) = (−1)^{m−3} Ẽ_c(p)
    assert_eq!(normalized_trace(&d7), HalfPower::new(BigInt::from(17), 7, 1));
    // L · P(p^{−1/2}t) = 1
    let inv = inverse_factor_coeffs(&d7).unwrap();
    for l in 1..=4usize {
        let mut acc = cubicdelta::exactnum::Surd::zero();
        for i in 0..=l {
            acc = acc.add(&inv[i].to_surd().mul(&l7.values[l - i].to_surd()));
        }
        assert!(acc.is_zero(), "l={l}");
    }
}

#[test]
fn weil_negative_control() {
    let mut c = P7.to_vec();
    c[9] += 1;
    let w = weil_report_poly(&poly(&c), 7);
    assert!(!w.fe_holds);
    assert_eq!(w.fe_residual[1], BigInt::from(1));
    let w = weil_report_poly(&poly(&P7), 7);
    assert!(w.fe_residual.iter().all(Zero::is_zero));
}

#[test]
fn elliptic_sections() {
    let f = fermat(4);
    let c = CVector::new(vec![1, 2, 3, 5]);
    for p in [5u64, 7, 11, 13, 17] {
        let d = match frobenius_charpoly(&f, &c, p, 3) {
            Ok(d) => d,
            Err(Error::BadPrime(..)) => continue,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(d.charpoly.degree(), Some(2));
        let rho = &d.counts[0];
        // a_p = p + 1 − #E
        assert_eq!(d.charpoly.coeff(1), rho - BigInt::from(p + 1));
        assert!(weil_report(&d).unwrap().max_modulus_error < 1e-9);
    }
    // c = e_4: the section is the Fermat cubic curve
    for p in [5u64, 7, 13] {
        let n = count_section_ext(&f, &CVector::unit(4, 4), p, 2).unwrap();
        let h = count_hypersurface_coeffs(&[1, 1, 1], p * p, CountMethod::Auto).unwrap();
        assert_eq!(Some(n), h.rho);
    }
}

#[test]
fn good_reduction_consistency() {
    // S̃_c(p) = Ẽ_c(p) − p^{−1/2} Ẽ(p)
    let f = fermat(6);
    for p in [5u64, 7] {
        let d = frobenius_charpoly(&f, &c6(), p, 5).unwrap();
        let s = expsum_prime_power(&f, &c6(), p, 1).unwrap().normalized.to_surd();
        let h = count_hypersurface_coeffs(&[1; 6], p, CountMethod::Auto).unwrap();
        let e = HalfPower::new(h.e.unwrap(), p, 5).to_surd();
        let want = normalized_trace(&d).to_surd().sub(&e);
        assert_eq!(s, want, "p={p}");
    }
}

#[test]
fn ext_counts_match_enumeration() {
    let f = DiagonalCubicForm::new(vec![1, 2, 1, 1]).unwrap();
    let c = CVector::new(vec![1, 1, 3, 0]);
    for (p, r) in [(2u64, 1u32), (2, 2), (2, 3), (5, 1), (5, 2), (7, 1), (7, 2)] {
        if p == 2 && f.coeffs().iter().any(|x| x % 2 == 0) {
            continue;
        }
        let q = p.pow(r);
        let k = FiniteField::new(p, r).unwrap();
        let aff = affine_count_direct(&k, f.coeffs(), Some(&c.0));
        let n = count_section_ext(&f, &c, p, r).unwrap();
        assert_eq!(n, BigInt::from((aff - 1) / (q - 1)), "q={q}");
    }
    let f = fermat(4);
    for (p, r) in [(2u64, 2u32), (2, 3), (5, 2), (7, 2)] {
        let k = FiniteField::new(p, r).unwrap();
        let aff = affine_count_direct(&k, f.coeffs(), Some(&[1, 1, 3, 0]));
        let n = count_section_ext(&f, &CVector::new(vec![1, 1, 3, 0]), p, r).unwrap();
        assert_eq!(n, BigInt::from((aff - 1) / (p.pow(r) - 1)));
    }
}

#[test]
fn errors() {
    let f = fermat(6);
    assert!(matches!(count_section_ext(&f, &CVector::new(vec![5; 6]), 5, 1), Err(Error::BadPrime(5, _))));
    assert!(matches!(count_section_ext(&f, &c6(), 3, 1), Err(Error::BadPrime(3, _))));
    assert!(matches!(count_section_ext(&f, &c6(), 5, 12), Err(Error::ResourceLimit(_))));
    assert!(matches!(frobenius_charpoly(&fermat(5), &CVector::new(vec![1, 2, 3, 4, 5]), 7, 3), Err(Error::Domain(_))));
    // 3^13 · 996001 · … : p = 996001 divides Δ
    let big = frobenius_charpoly_with(&f, &c6(), 996001, 1, &ZetaOptions::default());
    assert!(matches!(big, Err(Error::BadPrime(996001, _))));
    let sing = CVector::new(vec![1; 6]);
    assert!(matches!(frobenius_charpoly(&f, &sing, 7, 5), Err(Error::SingularSection)));
}

#[test]
fn count_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = DiskCache::new(dir.path());
    let opts = ZetaOptions { cache: Some(&cache), ..ZetaOptions::default() };
    let cold = frobenius_charpoly_with(&fermat(6), &c6(), 7, 5, &opts).unwrap();
    let warm = frobenius_charpoly_with(&fermat(6), &c6(), 7, 5, &opts).unwrap();
    assert_eq!(cold, warm);
    let json = serde_json::to_string(&cold).unwrap();
    let back: SectionZetaData = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cold);
}
