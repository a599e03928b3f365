//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported but do not fail the
//! run; everything else must pass.

mod common;

use std::error::Error as StdError;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use common::{expsum_direct, gcd, Lcg};
use cubicdelta::delta::{
    delta_identity_report, integral_ic, real_density, real_density_fourier, singular_series, DeltaParams,
    SmoothWeight,
};
use cubicdelta::dirichlet::stats::{
    dyadic_moment_stat, gram_matrix, large_sieve_norm, second_moment_stat, CBox,
    DeletedBox, Gamma, MomentKind,
};
use cubicdelta::dirichlet::{
    dirichlet_convolve, restriction_identity_check, Choice, CoefficientSequence, SequenceBuilder,
};
use cubicdelta::exactnum::arith::{factor_u64, is_prime_u64, primes_up_to};
use cubicdelta::exactnum::{factorize, HalfPower, IntPolynomial, Surd};
use cubicdelta::expsums::{count_hypersurface, expsum, expsum_prime_power, expsum_prime_power_bounded, hooley_rhs};
use cubicdelta::forms::{disc_delta, e_exponent, CVector, DiagonalCubicForm, DiscNormalization};
use cubicdelta::lab::{
    binary_quadratic_count, jutila_covering_ratio, mahler_fuzz, mordell_transform, phi_divisibility_search,
    square_locus, ternary_count, trivial_family, vdc_fuzz, vdc_polynomial_identity, ModulusFilter,
};
use cubicdelta::zeta::{charpoly_factor, count_section_ext, frobenius_charpoly, predicted_count, weil_report, SectionZetaData};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, Box<dyn StdError>>;

/// Criteria that are expected to fail; see the project notes.
const KNOWN_FAILURES: &[u32] = &[8];

macro_rules! ensure {
    ($c:expr, $($t:tt)*) => {
        if !$c {
            return Err(format!($($t)*).into());
        }
    };
}

fn fermat(m: usize) -> DiagonalCubicForm {
    DiagonalCubicForm::fermat(m).unwrap()
}

fn c6() -> CVector {
    CVector::new(vec![1, 2, 3, 4, 5, 6])
}

fn delta_def(f: &DiagonalCubicForm, c: &CVector) -> BigInt {
    disc_delta(f, c, DiscNormalization::Definition).unwrap()
}

fn nonsingular(f: &DiagonalCubicForm, seed: u64, k: usize, bound: i64) -> Vec<CVector> {
    let mut rng = Lcg(seed);
    let mut out = vec![];
    while out.len() < k {
        let c = CVector::new(rng.vec(f.m(), -bound, bound));
        if !delta_def(f, &c).is_zero() {
            out.push(c);
        }
    }
    out
}

fn c1_discriminant() -> Outcome {
    let t = Instant::now();
    let d = disc_delta(&fermat(6), &c6(), DiscNormalization::AppendixCode)?;
    let fac = factorize(&d)?;
    let got: Vec<(String, u32)> = fac.factors.iter().map(|(p, e)| (p.to_string(), *e)).collect();
    let want = [("3", 13), ("996001", 1), ("1898591", 1), ("107541241", 1), ("1722583559", 1)];
    ensure!(got.len() == want.len(), "factors {got:?}");
    for ((p, e), (wp, we)) in got.iter().zip(want) {
        ensure!(p == wp && *e == we, "factors {got:?}");
    }
    ensure!(t.elapsed().as_secs_f64() < 10.0, "took {:?}", t.elapsed());
    Ok(format!("{d}"))
}

fn c2_e_exponents() -> Outcome {
    let e: Vec<u64> = (3..=6).map(e_exponent).collect::<Result<_, _>>()?;
    ensure!(e == [3, 9, 27, 69], "e_m = {e:?}");
    for m in [4usize, 5] {
        let d = delta_def(&fermat(m), &CVector::unit(m, m));
        let want = BigInt::from(3).pow(e_exponent(m)? as u32);
        ensure!(d == want, "m = {m}: {d} vs 3^{}", e_exponent(m)?);
    }
    Ok(format!("e_m = {e:?}"))
}

const P5: [i64; 11] = [1, 0, 9, 0, 20, 0, 100, 0, 1125, 0, 3125];
const P7: [i64; 11] = [1, 17, 147, 828, 3354, 10182, 23478, 40572, 50421, 40817, 16807];
const P11: [i64; 11] = [1, 1, 3, 20, 49, 14, 539, 2420, 3993, 14641, 161051];
const P13: [i64; 11] = [1, 19, 197, 1388, 7286, 29666, 94718, 234572, 432809, 542659, 371293];

/// Full-depth polynomials at 5, 7, 11, 13, shared by criteria 3 and 4.
fn full_charpolys() -> &'static Vec<SectionZetaData> {
    static DATA: OnceLock<Vec<SectionZetaData>> = OnceLock::new();
    DATA.get_or_init(|| {
        [5u64, 7, 11, 13].iter().map(|&p| frobenius_charpoly(&fermat(6), &c6(), p, 5).unwrap()).collect()
    })
}

fn c3_zeta() -> Outcome {
    for (p, want) in [(7u64, &P7), (11, &P11), (13, &P13)] {
        let d = frobenius_charpoly(&fermat(6), &c6(), p, 3)?;
        ensure!(d.charpoly == IntPolynomial::from_i64(&want[..4]), "p = {p} depth 3: {}", d.charpoly);
    }
    let full = full_charpolys();
    ensure!(full[0].complete && full[0].charpoly == IntPolynomial::from_i64(&P5), "P5 = {}", full[0].charpoly);
    let f5 = charpoly_factor(&full[0])?;
    let want = vec![
        (IntPolynomial::from_i64(&[1, 0, 5]), 1),
        (IntPolynomial::from_i64(&[1, 0, 4, 0, 0, 0, 100, 0, 625]), 1),
    ];
    ensure!(f5 == want, "factorization {f5:?}");
    // stretch: complete polynomials at 7, 11, 13
    for (d, want) in full[1..].iter().zip([P7, P11, P13]) {
        ensure!(d.charpoly == IntPolynomial::from_i64(&want), "p = {}: {}", d.p, d.charpoly);
    }
    Ok("P5 exact, depth-3 prefixes at 7/11/13, full P7/P11/P13".into())
}

fn c4_weil() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in full_charpolys() {
        let w = weil_report(d)?;
        ensure!(w.fe_holds, "functional equation fails at p = {}", d.p);
        ensure!(w.max_modulus_error < 1e-9, "p = {}: modulus error {}", d.p, w.max_modulus_error);
        worst = worst.max(w.max_modulus_error);
    }
    let predicted = predicted_count(&full_charpolys()[0], 6)?;
    let counted = count_section_ext(&fermat(6), &c6(), 5, 6)?;
    ensure!(predicted == counted, "F_5^6: predicted {predicted}, counted {counted}");
    Ok(format!("max |β|−√p error {worst:.1e}; #V(F_5^6) = {counted}"))
}

fn c5_expsums() -> Outcome {
    let mut checks = 0u64;
    // multiplicativity, n₁n₂ ≤ 60
    let mut rng = Lcg(7);
    for _ in 0..6 {
        let f = DiagonalCubicForm::new(rng.vec(4, 1, 6))?;
        let c = CVector::new(rng.vec(4, -9, 9));
        let mut vals = vec![BigInt::zero()];
        for n in 1..=60 {
            vals.push(expsum(&f, &c, n)?.value);
        }
        for n1 in 1..=60u64 {
            for n2 in (1..=60 / n1).filter(|&n2| gcd(n1, n2) == 1) {
                ensure!(vals[(n1 * n2) as usize] == &vals[n1 as usize] * &vals[n2 as usize], "{n1}·{n2}");
                checks += 1;
            }
        }
    }
    // S_c(p) = p²E_c(p) − pE(p)
    let primes: Vec<u64> = (5..=31).filter(|&p| is_prime_u64(p)).collect();
    let mut rng = Lcg(31337);
    for m in [4usize, 6] {
        let f = fermat(m);
        let mut done = 0;
        while done < 25 {
            let c = CVector::new(rng.vec(m, -40, 40));
            if c.is_zero() {
                continue;
            }
            for &p in primes.iter().filter(|&&p| c.0.iter().any(|&x| x % p as i64 != 0)) {
                let s = expsum_prime_power(&f, &c, p, 1)?.value;
                ensure!(s == hooley_rhs(&f, &c, p)?, "m = {m} c = {c:?} p = {p}");
                checks += 1;
            }
            done += 1;
        }
    }
    // S_c(p^l) = 0 at good p
    let mut rng = Lcg(555);
    for m in [4usize, 6] {
        let f = fermat(m);
        for c in (0..).map(|_| CVector::new(rng.vec(m, -12, 12))).filter(|c| !delta_def(&f, c).is_zero()).take(3) {
            let d = delta_def(&f, &c);
            for p in [2u64, 3, 5, 7, 11, 13].into_iter().filter(|&p| !(&d % BigInt::from(p)).is_zero()) {
                for l in [2u32, 3] {
                    ensure!(expsum_prime_power_bounded(&f, &c, p, l, 2197)?.value.is_zero(), "{c:?} {p}^{l}");
                    checks += 1;
                }
            }
        }
    }
    // unit invariance, n ≤ 30
    let mut rng = Lcg(99);
    for _ in 0..4 {
        let f = DiagonalCubicForm::new(rng.vec(4, 1, 5))?;
        let c = rng.vec(4, -30, 30);
        for n in 1..=30u64 {
            let base = expsum(&f, &CVector::new(c.clone()), n)?.value;
            for l in (1..n.max(2)).filter(|&l| gcd(l, n) == 1) {
                let cl = CVector::new(c.iter().map(|&x| x * l as i64).collect());
                ensure!(expsum(&f, &cl, n)?.value == base, "n = {n} λ = {l}");
                checks += 1;
            }
        }
    }
    // definition oracle, n ≤ 13, 50 vectors at m = 4
    let mut rng = Lcg(2024);
    let forms = [vec![1i64, 1, 1, 1], vec![1, 2, -3, 5], vec![2, -1, 7, 1]];
    for trial in 0..50 {
        let f = &forms[trial % forms.len()];
        let fm = DiagonalCubicForm::new(f.clone())?;
        let c = rng.vec(4, -20, 20);
        for n in 1..=13u64 {
            ensure!(expsum(&fm, &CVector::new(c.clone()), n)?.value == expsum_direct(f, &c, n), "{f:?} {c:?} {n}");
            checks += 1;
        }
    }
    Ok(format!("{checks} exact identities"))
}

fn same(s: &CoefficientSequence, t: &CoefficientSequence) -> Result<(), String> {
    for n in 1..=s.len().min(t.len()) as u64 {
        if s.value_surd(n) != t.value_surd(n) {
            return Err(format!("differ at n = {n}"));
        }
    }
    Ok(())
}

fn c6_dirichlet() -> Outcome {
    const N: usize = 200;
    let unit = CoefficientSequence::from_fn(N, |n| (n == 1) as i64);
    let f4 = fermat(4);
    let mut runs = vec![];
    for c in nonsingular(&f4, 3, 3, 7) {
        for ch in [Choice::Full, Choice::Coprime, Choice::LocalFactors] {
            runs.push((f4.clone(), c.clone(), ch));
        }
    }
    runs.push((fermat(6), c6(), Choice::LocalFactors));
    for (f, c, ch) in &runs {
        let mut bld = SequenceBuilder::new(f);
        let (b, a, ap) = bld.triple(*ch, c, N)?;
        same(&dirichlet_convolve(&a, &b)?, &unit).map_err(|e| format!("a∗b, {c:?} choice {}: {e}", ch.index()))?;
        let s = bld.s_tilde(c, N)?;
        same(&dirichlet_convolve(&ap, &b)?, &s).map_err(|e| format!("a′∗b, {c:?} choice {}: {e}", ch.index()))?;
    }
    for c in nonsingular(&f4, 4, 3, 8) {
        let d = delta_def(&f4, &c);
        let mut bld = SequenceBuilder::new(&f4);
        let (_, _, ap2) = bld.triple(Choice::Coprime, &c, N)?;
        let s = bld.s_tilde(&c, N)?;
        for n in 1..=N as u64 {
            let inside = factor_u64(n).iter().all(|&(p, _)| (&d % BigInt::from(p)).is_zero());
            let want = if inside { s.value_surd(n) } else { Surd::zero() };
            ensure!(ap2.value_surd(n) == want, "choice 2 support, {c:?} n = {n}");
        }
        let (_, _, ap3) = bld.triple(Choice::LocalFactors, &c, 31)?;
        for p in primes_up_to(31).into_iter().filter(|&p| !(&d % BigInt::from(p)).is_zero()) {
            let e = count_hypersurface(&f4, p)?.e.ok_or("no E(p)")?;
            ensure!(ap3.value(p).to_surd() == HalfPower::new(-e, p, 3).to_surd(), "choice 3 a′({p}), {c:?}");
        }
    }
    for c in nonsingular(&f4, 5, 10, 10) {
        for d in [1u64, 4, 12] {
            let r = restriction_identity_check(&f4, &c, d, 150, Choice::Coprime)?;
            ensure!(r.holds, "restriction d = {d}, {c:?}: {r:?}");
        }
    }
    Ok(format!("{} inverse pairs to N = {N}", runs.len()))
}

fn c7_delta() -> Outcome {
    const TOLERANCE: f64 = 0.02;
    let f = DiagonalCubicForm::new(vec![1, 1, -1, -1])?;
    let w = SmoothWeight::standard(4);
    let mut parts = vec![];
    for x in [6.0, 8.0, 10.0] {
        let r = delta_identity_report(&f, &w, &DeltaParams::new(x)?, true)?;
        ensure!(r.rel_error <= TOLERANCE, "X = {x}: rel error {}", r.rel_error);
        let tail = r.c_tail.ok_or("no tail estimate")?;
        ensure!(tail < 1e-4, "X = {x}: tail {tail}");
        ensure!((r.lhs - r.lhs_mitm).abs() < 1e-12, "X = {x}: brute-force routes disagree");
        parts.push(format!("X={x}: {:.2e}", r.rel_error));
    }
    Ok(parts.join(", "))
}

fn c8_density() -> Outcome {
    let f = DiagonalCubicForm::new(vec![1, 1, -1, -1])?;
    let w = SmoothWeight::standard(4);
    let dens = real_density(&f, &w)?;
    let mut failures = vec![];
    if !(dens.agree && dens.rel_diff < 5e-3) {
        failures.push(format!("density routes differ by {:.2e}", dens.rel_diff));
    }
    let sigma = real_density_fourier(&f, &w)?;
    let mut worst: f64 = 0.0;
    for r in [0.01, 0.02, 0.05, 0.1] {
        let mut p = DeltaParams::new(100.0)?;
        p.y = 1.0 / r;
        let v = integral_ic(&f, &w, &p, &[0; 4], 1)?;
        worst = worst.max((v - sigma).abs() / sigma);
    }
    if worst > 0.01 {
        failures.push(format!("Ĩ_0 vs σ off by {:.0}% at n ≤ Y/10", 100.0 * worst));
    }
    let s = singular_series(&fermat(7), 512)?;
    let inc: Vec<f64> = s.increments.iter().filter(|x| x.0 >= 32).map(|x| x.1).collect();
    if !inc.windows(2).all(|w| w[1] < w[0]) {
        failures.push(format!("m = 7 dyadic increments not decreasing: {inc:.4?}"));
    }
    if failures.is_empty() {
        Ok(format!("density routes {:.1e}", dens.rel_diff))
    } else {
        Err(failures.join("; ").into())
    }
}

fn naive_ternary(h: [i64; 3], k: i64, x: i64) -> u64 {
    let r = -x..=x;
    let mut n = 0;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                n += (h[0] * a * a + h[1] * b * b + h[2] * c * c == k) as u64;
            }
        }
    }
    n
}

fn c9_lab() -> Outcome {
    ensure!(mahler_fuzz(1_000_000, 1000, 9) == 0, "Mahler identity failed");
    ensure!(vdc_fuzz(100_000, 100, 3) == 0, "differencing identity failed");
    ensure!(vdc_polynomial_identity(), "coefficient comparison failed");
    let mut n = 0;
    for (h, z) in square_locus(20) {
        if h[2] == 0 {
            continue;
        }
        for s in [z, -z] {
            ensure!(mordell_transform(h[0], h[1], h[2], s)?.on_curve, "Mordell {h:?} {s}");
            n += 1;
        }
    }
    for h in [[1, 2, -3], [2, 3, -5], [-4, 1, 3]] {
        let k = -9 * h[0] * h[1] * h[2];
        for x in [10u64, 25] {
            let fam = trivial_family(h, x);
            ensure!(fam.iter().all(|y| (0..3).map(|i| h[i] * y[i] * y[i]).sum::<i64>() == k), "family {h:?}");
            ensure!(ternary_count(h, k, x)? >= fam.len() as u64, "family undercounted {h:?}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let x = rng.gen_range(1..=30i64);
        let mut h = [0; 3].map(|_| rng.gen_range(-6i64..=6));
        if h == [0, 0, 0] {
            h[0] = 1;
        }
        let y = [0; 3].map(|_| rng.gen_range(-x..=x));
        let k = (0..3).map(|j| h[j] * y[j] * y[j]).sum();
        ensure!(ternary_count(h, k, x as u64)? == naive_ternary(h, k, x), "ternary {h:?} {k} {x}");
    }
    for _ in 0..60 {
        let (a, b) = (rng.gen_range(1..=9i64), rng.gen_range(-9..=9i64));
        if b == 0 {
            continue;
        }
        let t = rng.gen_range(-500..=500);
        let mut want = 0;
        for u in -100i64..=100 {
            for v in -100i64..=100 {
                want += (a * u * u + b * v * v == t) as u64;
            }
        }
        ensure!(binary_quadratic_count(a, b, t, 50)? == want, "binary {a} {b} {t}");
    }
    Ok(format!("{n} Mordell round trips"))
}

fn c10_phi() -> Outcome {
    let t = Instant::now();
    let r = phi_divisibility_search(2 * 100 * 100, 9, 10)?;
    ensure!((r.max_tested, r.max_discovered) == (19999, 330), "{r:?}");
    ensure!(t.elapsed().as_secs_f64() < 5.0, "took {:?}", t.elapsed());
    Ok("(19999, 330)".into())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn c11_stats() -> Outcome {
    let f = fermat(4);
    let mut reports = vec![];

    let r = second_moment_stat(&f, 2, 8.0, 4.0, (2, 8), Choice::Coprime, 1.0)?;
    ensure!(r.value == 474.96820909586074, "second moment {}", r.value);
    reports.push(r);

    let r = large_sieve_norm(&f, 3, 10, Gamma::B, Choice::Coprime, 1.0)?;
    let cs: Vec<CVector> = CBox::Full { m: 4, z: 3 }.vectors().into_iter().filter(|c| !delta_def(&f, c).is_zero()).collect();
    let mut bld = SequenceBuilder::new(&f);
    let mut rows = vec![];
    for c in &cs {
        let b = bld.b(Choice::Coprime, c, 10)?;
        rows.push((1..=10).map(|n| b.value_f64(n)).collect::<Vec<f64>>());
    }
    let g = gram_matrix(&rows, 10);
    let top = nalgebra::DMatrix::from_fn(10, 10, |i, j| g[i][j]).symmetric_eigen().eigenvalues.max();
    ensure!(close(r.value, top, 1e-9), "sieve norm {} vs dense {}", r.value, top);
    ensure!(close(r.value, 2824.9259585678565, 1e-9), "sieve norm {}", r.value);
    reports.push(r);

    let boxd = CBox::Deleted(DeletedBox::new(4, vec![0, 1, 2, 3], 2)?);
    let r = dyadic_moment_stat(MomentKind::AbsAPrime, &f, &boxd, (2, 4), Choice::Coprime)?;
    ensure!(r.value == 496.0, "dyadic {}", r.value);
    reports.push(r);

    let full = CBox::Full { m: 4, z: 2 };
    let r = dyadic_moment_stat(MomentKind::BadSum, &f, &full, (2, 8), Choice::Coprime)?;
    ensure!(r.value == 0.0, "bad sum {}", r.value);
    reports.push(r);

    for (y, filter, a, want) in [
        (32u64, ModulusFilter::All, 4i64, (1.0, 252.0)),
        (64, ModulusFilter::Smooth(8), 64, (5.0, 308.0)),
    ] {
        let r = jutila_covering_ratio(y, filter, Ratio::from_integer(a))?;
        ensure!((r.extras["infimum"], r.extras["L"]) == want, "covering Y = {y}: {:?}", r.extras);
        reports.push(r);
    }

    for r in &reports {
        ensure!(r.baseline.is_finite() && r.baseline > 0.0, "{}: baseline {}", r.kind, r.baseline);
        let want = r.value / r.baseline;
        ensure!(r.ratio == want || close(r.ratio, want, 1e-12), "{}: ratio {}", r.kind, r.ratio);
    }
    Ok(format!("{} reports match fixtures", reports.len()))
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "discriminant", c1_discriminant),
        (2, "e_m exponents", c2_e_exponents),
        (3, "zeta polynomials", c3_zeta),
        (4, "Weil and functional equation", c4_weil),
        (5, "exponential-sum identities", c5_expsums),
        (6, "Dirichlet framework", c6_dirichlet),
        (7, "delta identity", c7_delta),
        (8, "real density and singular series", c8_density),
        (9, "lab identities", c9_lab),
        (10, "totient search", c10_phi),
        (11, "sieve statistics", c11_stats),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut unexpected = vec![];
    for (n, name, run) in criteria {
        let tag = format!("{n} {name}");
        if !filters.is_empty() && !filters.iter().any(|f| tag.contains(f.as_str()) || "acceptance".contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| Err(panic_message(p).into()));
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&n);
        match res {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} [{secs:.1}s] {detail}"),
            Err(e) => {
                let note = if known { " (known)" } else { "" };
                println!("criterion {n:>2} FAIL{note}  {name} [{secs:.1}s] {e}");
                if !known {
                    unexpected.push(n);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
