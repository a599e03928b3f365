//! Built-in check batteries: each check re-derives a known identity or value
//! through the library and reports pass/fail.

use std::time::Instant;

use cubicdelta::cache::DiskCache;
use cubicdelta::delta::{
    brute_force_count, brute_force_count_mitm, delta_identity_report, real_density, singular_series,
    DeltaParams, SmoothWeight,
};
use cubicdelta::dirichlet::{dirichlet_convolve, Choice, SequenceBuilder};
use cubicdelta::exactnum::Surd;
use cubicdelta::expsums::{expsum, expsum_cyclotomic, hooley_rhs, GTable};
use cubicdelta::forms::{disc_delta, e_exponent, CVector, DiagonalCubicForm, DiscNormalization};
use cubicdelta::lab::{self, ModulusFilter};
use cubicdelta::zeta::{frobenius_charpoly_with, weil_report, ZetaOptions};
use cubicdelta::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::args::Level;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub level: Level,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    /// Set when a check hit a resource limit; later checks were skipped.
    pub stopped: Option<String>,
}

type CheckFn<'a> = Box<dyn Fn() -> Result<(bool, String)> + 'a>;

fn fermat(m: usize) -> DiagonalCubicForm {
    DiagonalCubicForm::fermat(m).expect("m ≥ 1")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn fast_checks<'a>(cache: Option<&'a DiskCache>) -> Vec<(&'static str, CheckFn<'a>)> {
    vec![
        ("disc reference value", Box::new(|| {
            let f = fermat(6);
            let c = CVector::new((1..=6).collect());
            let d = disc_delta(&f, &c, DiscNormalization::AppendixCode)?;
            let want = BigInt::from(3).pow(13)
                * 996001u64
                * 1898591u64
                * 107541241u64
                * 1722583559u64;
            Ok((d == want || d == -want, format!("{d}")))
        })),
        ("e_m exponents", Box::new(|| {
            let e: Vec<u64> = (3..=6).map(e_exponent).collect::<Result<_>>()?;
            Ok((e == [3, 9, 27, 69], format!("{e:?}")))
        })),
        ("S_c multiplicative", Box::new(|| {
            let f = fermat(4);
            let c = CVector::new(vec![1, 2, 3, 5]);
            let mut bad = 0;
            for n1 in 2..=12u64 {
                for n2 in 2..=60 / n1 {
                    if gcd(n1, n2) == 1 {
                        let l = expsum(&f, &c, n1 * n2)?.value;
                        let r = expsum(&f, &c, n1)?.value * expsum(&f, &c, n2)?.value;
                        bad += (l != r) as u32;
                    }
                }
            }
            Ok((bad == 0, format!("{bad} mismatches")))
        })),
        ("S_c unit invariance", Box::new(|| {
            let f = fermat(4);
            let c = vec![1i64, -2, 3, 4];
            let mut bad = 0;
            for n in 2..=20u64 {
                let base = expsum(&f, &CVector::new(c.clone()), n)?.value;
                for l in (1..n as i64).filter(|&l| gcd(l as u64, n) == 1) {
                    let s = expsum(&f, &CVector::new(c.iter().map(|x| x * l).collect()), n)?.value;
                    bad += (s != base) as u32;
                }
            }
            Ok((bad == 0, format!("{bad} mismatches")))
        })),
        ("S_c engine vs cyclotomic tables", Box::new(move || {
            let f = fermat(4);
            let mut bad = 0;
            for n in 2..=9u64 {
                let t = GTable::load_or_build(n, cache)?;
                for c in [[1i64, 2, 3, 5], [0, 1, -1, 2], [3, 3, 1, 0]] {
                    let a = expsum(&f, &CVector::new(c.to_vec()), n)?.value;
                    bad += (a != expsum_cyclotomic(&t, f.coeffs(), &c)?) as u32;
                }
            }
            Ok((bad == 0, format!("{bad} mismatches")))
        })),
        ("S_c(p) from point counts", Box::new(|| {
            let f = fermat(4);
            let c = CVector::new(vec![1, 2, 3, 5]);
            let mut bad = 0;
            for p in [7u64, 11, 13, 17, 19, 23, 29, 31] {
                bad += (expsum(&f, &c, p)?.value != hooley_rhs(&f, &c, p)?) as u32;
            }
            Ok((bad == 0, format!("{bad} mismatches")))
        })),
        ("zeta P5 low coefficients", Box::new(move || {
            let opts = ZetaOptions { cache, ..ZetaOptions::default() };
            let d = frobenius_charpoly_with(&fermat(6), &CVector::new((1..=6).collect()), 5, 3, &opts)?;
            let got: Vec<String> = (0..4).map(|i| d.charpoly.coeff(i).to_string()).collect();
            Ok((got == ["1", "0", "9", "0"], got.join(",")))
        })),
        ("Dirichlet inverse pairs", Box::new(|| {
            let f = fermat(4);
            let c = CVector::new(vec![1, 2, 3, 5]);
            let mut bld = SequenceBuilder::new(&f);
            let mut bad = 0;
            for ch in [Choice::Full, Choice::Coprime] {
                let (b, a, ap) = bld.triple(ch, &c, 60)?;
                let ab = dirichlet_convolve(&a, &b)?;
                let s = bld.s_tilde(&c, 60)?;
                let apb = dirichlet_convolve(&ap, &b)?;
                for n in 1..=60u64 {
                    let want = if n == 1 { Surd::int(1) } else { Surd::zero() };
                    bad += (ab.value_surd(n) != want) as u32;
                    bad += (apb.value_surd(n) != s.value_surd(n)) as u32;
                }
            }
            Ok((bad == 0, format!("{bad} mismatches")))
        })),
        ("Mahler identity", Box::new(|| {
            let bad = lab::mahler_fuzz(10_000, 1000, 1);
            Ok((bad == 0 && lab::mahler_check(1, 1), format!("{bad} failures")))
        })),
        ("differencing identity", Box::new(|| {
            let bad = lab::vdc_fuzz(10_000, 100, 1);
            Ok((bad == 0 && lab::vdc_polynomial_identity(), format!("{bad} failures")))
        })),
        ("ternary counts", Box::new(|| {
            let mut bad = 0;
            for (h, k, x) in [([1, 1, 1], 3, 1), ([2, -1, 3], 5, 6), ([0, 3, -2], 1, 7), ([1, 2, -3], 54, 9)] {
                let mut n = 0u64;
                for a in -x..=x {
                    for b in -x..=x {
                        for c in -x..=x {
                            n += (h[0] * a * a + h[1] * b * b + h[2] * c * c == k) as u64;
                        }
                    }
                }
                bad += (lab::ternary_count(h, k, x as u64)? != n) as u32;
            }
            Ok((bad == 0, format!("{bad} mismatches")))
        })),
        ("binary quadratic counts", Box::new(|| {
            let a = lab::binary_quadratic_count(1, 1, 0, 5)?;
            let b = lab::binary_quadratic_count(1, -1, 0, 1)?;
            Ok((a == 1 && b == 9, format!("{a}, {b}")))
        })),
        ("square locus and Mordell", Box::new(|| {
            let sols = lab::square_locus(10);
            let on = sols
                .iter()
                .filter(|(h, _)| h[2] != 0)
                .map(|(h, z)| lab::mordell_transform(h[0], h[1], h[2], *z).map(|p| p.on_curve))
                .collect::<Result<Vec<_>>>()?;
            let ok = sols.contains(&([1, 1, -2], 6)) && on.iter().all(|&b| b);
            Ok((ok, format!("{} solutions", sols.len())))
        })),
        ("Weyl sums", Box::new(|| {
            let t = lab::weyl_sum_rational(1, 2, 2)?;
            let z = lab::weyl_sum_rational(0, 1, 7)?;
            Ok((t == Complex64::new(1.0, 0.0) && z == Complex64::new(15.0, 0.0), format!("{t}, {z}")))
        })),
        ("totient search", Box::new(|| {
            let r = lab::phi_divisibility_search(20_000, 9, 10)?;
            Ok(((r.max_tested, r.max_discovered) == (19999, 330), format!("{r:?}")))
        })),
        ("covering sweep", Box::new(|| {
            let s = lab::covering_sweep(32, ModulusFilter::All, Ratio::from_integer(4))?;
            Ok(((s.infimum, s.l) == (1, 252), format!("inf {} L {}", s.infimum, s.l)))
        })),
        ("point count routes", Box::new(|| {
            let f = DiagonalCubicForm::new(vec![1, 1, -1, -1])?;
            let w = SmoothWeight::standard(4);
            let a = brute_force_count(&f, &w, 5.0)?;
            let b = brute_force_count_mitm(&f, &w, 5.0)?;
            Ok(((a - b).abs() <= 1e-9 * a.abs().max(1.0), format!("{a} vs {b}")))
        })),
        ("real density routes", Box::new(|| {
            let f = DiagonalCubicForm::new(vec![1, 1, -1, -1])?;
            let r = real_density(&f, &SmoothWeight::standard(4))?;
            Ok((r.agree, format!("rel diff {:.2e}", r.rel_diff)))
        })),
    ]
}

fn full_checks<'a>(cache: Option<&'a DiskCache>) -> Vec<(&'static str, CheckFn<'a>)> {
    vec![
        ("zeta P5 and P7 in full", Box::new(move || {
            let opts = ZetaOptions { cache, ..ZetaOptions::default() };
            let c = CVector::new((1..=6).collect());
            let p5 = frobenius_charpoly_with(&fermat(6), &c, 5, 5, &opts)?;
            let p7 = frobenius_charpoly_with(&fermat(6), &c, 7, 5, &opts)?;
            let s = |d: &cubicdelta::zeta::SectionZetaData| {
                d.charpoly.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            };
            let ok = s(&p5) == "1,0,9,0,20,0,100,0,1125,0,3125"
                && s(&p7) == "1,17,147,828,3354,10182,23478,40572,50421,40817,16807";
            let w5 = weil_report(&p5)?;
            let w7 = weil_report(&p7)?;
            let weil = w5.fe_holds && w7.fe_holds && w5.max_modulus_error < 1e-9;
            Ok((ok && weil, format!("{} | {}", s(&p5), s(&p7))))
        })),
        ("delta identity at X = 6", Box::new(|| {
            let f = DiagonalCubicForm::new(vec![1, 1, -1, -1])?;
            let rep = delta_identity_report(&f, &SmoothWeight::standard(4), &DeltaParams::new(6.0)?, false)?;
            Ok((rep.rel_error <= 0.02, format!("rel error {:.3e}", rep.rel_error)))
        })),
        ("singular series, m = 8", Box::new(|| {
            let rep = singular_series(&fermat(8), 512)?;
            let inc: Vec<f64> = rep.increments.iter().filter(|(n, _)| *n >= 32).map(|x| x.1).collect();
            let ok = inc.windows(2).all(|w| w[1] <= w[0]);
            Ok((ok, format!("{inc:?}")))
        })),
        ("key-point filter", Box::new(|| {
            let cfg = lab::DifferencingConfig::new(1000, 10.0 / 13.0, 0.01)?;
            let r = lab::vdc_keypoint_check(&cfg, 10_000, 1)?;
            Ok((r.violations == 0, format!("{} violations", r.violations)))
        })),
        ("Mahler identity, 10^6 samples", Box::new(|| {
            let bad = lab::mahler_fuzz(1_000_000, 1000, 2);
            Ok((bad == 0, format!("{bad} failures")))
        })),
    ]
}

pub fn run(level: Level, cache: Option<&DiskCache>) -> Summary {
    let mut list = fast_checks(cache);
    if level == Level::Full {
        list.extend(full_checks(cache));
    }
    let mut checks = Vec::new();
    let mut stopped = None;
    for (name, f) in list {
        let t = Instant::now();
        let (passed, detail) = match f() {
            Ok(r) => r,
            Err(Error::ResourceLimit(why)) => {
                stopped = Some(format!("{name}: {why}"));
                break;
            }
            Err(e) => (false, format!("error: {e}")),
        };
        checks.push(Check { name: name.into(), passed, detail, seconds: t.elapsed().as_secs_f64() });
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    Summary { level, checks, passed, failed, stopped }
}
