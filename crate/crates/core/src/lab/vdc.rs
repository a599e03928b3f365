//! Differencing identities for `F₀ = y₁³ + y₂³ + y₃³`, the key-point filter,
//! the Mahler parametrisation and binary quadratic counts.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exactnum::arith::exact_sqrt_i128;

pub fn f0(y: [i128; 3]) -> i128 {
    y.iter().map(|v| v * v * v).sum()
}

pub fn q_form(h: [i128; 3], y: [i128; 3]) -> i128 {
    (0..3).map(|i| h[i] * y[i] * y[i]).sum()
}

/// `F₀(y + 6h′) − F₀(y) = 18Q_{h′}(y + 3h′) + 54F₀(h′)`.
pub fn vdc_identity_check(hp: [i64; 3], y: [i64; 3]) -> bool {
    let hp = hp.map(|v| v as i128);
    let y = y.map(|v| v as i128);
    let lhs = f0([0, 1, 2].map(|i| y[i] + 6 * hp[i])) - f0(y);
    let rhs = 18 * q_form(hp, [0, 1, 2].map(|i| y[i] + 3 * hp[i])) + 54 * f0(hp);
    lhs == rhs
}

/// Number of failures of [`vdc_identity_check`] on uniform samples from
/// `[−bound, bound]⁶`.
pub fn vdc_fuzz(samples: usize, bound: i64, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .filter(|_| {
            let h = [0; 3].map(|_| rng.gen_range(-bound..=bound));
            let y = [0; 3].map(|_| rng.gen_range(-bound..=bound));
            !vdc_identity_check(h, y)
        })
        .count()
}

type Q = Ratio<i128>;

fn inverse_vandermonde(d: usize) -> Vec<Vec<Q>> {
    let n = d + 1;
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = (0..n).map(|j| Q::from_integer((i as i128).pow(j as u32))).collect();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nodes are distinct");
        a.swap(col, piv);
        let p = a[col][col];
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..2 * n {
                    let t = a[col][j] * f;
                    a[r][j] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Monomial coefficients of a polynomial in `vars` variables with degree at
/// most `d` in each, recovered from its values on `{0, …, d}^vars`. Entry
/// `Σ_k e_k (d+1)^k` holds the coefficient of `Π x_k^{e_k}`.
pub fn poly_coefficients(vars: usize, d: usize, f: impl Fn(&[i64]) -> i128) -> Vec<Q> {
    let n = d + 1;
    let size = n.pow(vars as u32);
    let mut t: Vec<Q> = (0..size)
        .map(|mut idx| {
            let pt: Vec<i64> = (0..vars)
                .map(|_| {
                    let v = (idx % n) as i64;
                    idx /= n;
                    v
                })
                .collect();
            Q::from_integer(f(&pt))
        })
        .collect();
    let vinv = inverse_vandermonde(d);
    for axis in 0..vars {
        let stride = n.pow(axis as u32);
        let mut next = vec![Q::zero(); size];
        for (idx, out) in next.iter_mut().enumerate() {
            let e = (idx / stride) % n;
            let base = idx - e * stride;
            for (i, c) in vinv[e].iter().enumerate() {
                *out += c * t[base + i * stride];
            }
        }
        t = next;
    }
    t
}

/// Both sides of the differencing identity expand to the same polynomial in
/// `(h′, y)`.
pub fn vdc_polynomial_identity() -> bool {
    let split = |p: &[i64]| {
        let p: Vec<i128> = p.iter().map(|&v| v as i128).collect();
        ([p[0], p[1], p[2]], [p[3], p[4], p[5]])
    };
    let lhs = poly_coefficients(6, 3, |p| {
        let (h, y) = split(p);
        f0([0, 1, 2].map(|i| y[i] + 6 * h[i])) - f0(y)
    });
    let rhs = poly_coefficients(6, 3, |p| {
        let (h, y) = split(p);
        18 * q_form(h, [0, 1, 2].map(|i| y[i] + 3 * h[i])) + 54 * f0(h)
    });
    lhs == rhs
}

/// `K = cX^θ` and `ℋ = {d ∈ [0, cX] × [0, cK]² : 6 | d}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferencingConfig {
    pub x: u64,
    pub theta: f64,
    pub c: f64,
}

impl DifferencingConfig {
    pub fn new(x: u64, theta: f64, c: f64) -> Result<Self> {
        if x == 0 || !(theta > 0.0 && theta <= 1.0) || !(c > 0.0 && c.is_finite()) {
            return domain(format!("need X ≥ 1, θ ∈ (0, 1], c > 0; got {x}, {theta}, {c}"));
        }
        Ok(DifferencingConfig { x, theta, c })
    }

    pub fn k(&self) -> f64 {
        self.c * (self.x as f64).powf(self.theta)
    }

    /// Largest multiple of 6 allowed in each coordinate of `ℋ`.
    pub fn limits(&self) -> [i64; 3] {
        let six = |v: f64| (v.floor() as i64 / 6) * 6;
        let a = six(self.c * self.x as f64);
        let b = six(self.c * self.k());
        [a, b, b]
    }

    pub fn contains(&self, d: [i64; 3]) -> bool {
        let lim = self.limits();
        (0..3).all(|i| d[i] % 6 == 0 && d[i] >= 0 && d[i] <= lim[i])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeypointReport {
    pub config: DifferencingConfig,
    pub k: f64,
    pub samples: usize,
    /// Draws from `ℋ − ℋ` discarded for `|h₁| < K`.
    pub rejected: usize,
    pub violations: usize,
    /// `min |F_h(y)| / (|h₁| X²)` over tested pairs.
    pub min_ratio: f64,
}

/// Samples `h ∈ ℋ − ℋ` with `|h₁| ≥ K` and `y ∈ [X, (1+c)X]³` and checks
/// `|F₀(y + h) − F₀(y)| ≥ |h₁| X² > 0`.
pub fn vdc_keypoint_check(cfg: &DifferencingConfig, samples: usize, seed: u64) -> Result<KeypointReport> {
    let k = cfg.k();
    let lim = cfg.limits();
    if (lim[0] as f64) < k {
        return domain(format!("no h in H − H has |h1| ≥ K = {k}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng, l: i64| 6 * rng.gen_range(0..=l / 6);
    let x = cfg.x as i64;
    let ytop = ((1.0 + cfg.c) * cfg.x as f64).floor() as i64;
    let x2 = (x as f64).powi(2);
    let (mut tested, mut rejected, mut violations) = (0, 0, 0);
    let mut min_ratio = f64::INFINITY;
    while tested < samples {
        let h: [i64; 3] = [0, 1, 2].map(|i| draw(&mut rng, lim[i]) - draw(&mut rng, lim[i]));
        if ((h[0].abs()) as f64) < k {
            rejected += 1;
            continue;
        }
        let y = [0; 3].map(|_| rng.gen_range(x..=ytop) as i128);
        let hw = h.map(|v| v as i128);
        let fh = f0([0, 1, 2].map(|i| y[i] + hw[i])) - f0(y);
        let ratio = (fh as f64).abs() / (h[0].abs() as f64 * x2);
        if fh == 0 || ratio < 1.0 {
            violations += 1;
        }
        min_ratio = min_ratio.min(ratio);
        tested += 1;
    }
    Ok(KeypointReport { config: cfg.clone(), k, samples, rejected, violations, min_ratio })
}

/// `(9u⁴)³ + (3uv³ − 9u⁴)³ + (v⁴ − 9u³v)³ = v¹²`.
pub fn mahler_check(u: i64, v: i64) -> bool {
    let (u, v) = (BigInt::from(u), BigInt::from(v));
    let u4 = u.pow(4);
    let a = BigInt::from(9) * &u4;
    let b = BigInt::from(3) * &u * v.pow(3) - &a;
    let c = v.pow(4) - BigInt::from(9) * u.pow(3) * &v;
    a.pow(3) + b.pow(3) + c.pow(3) == v.pow(12)
}

/// Failures of [`mahler_check`] on uniform samples from `[−bound, bound]²`.
pub fn mahler_fuzz(samples: usize, bound: i64, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(i64, i64)> = (0..samples)
        .map(|_| (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)))
        .collect();
    crate::par::map(&pairs, |&(u, v)| !mahler_check(u, v))
        .into_iter()
        .filter(|&bad| bad)
        .count()
}

/// `#{(u, v) ∈ [−2X, 2X]² : au² + bv² = t}`.
pub fn binary_quadratic_count(a: i64, b: i64, t: i64, x: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return domain("need a·b ≠ 0");
    }
    let r = 2 * x as i64;
    let mut count = 0;
    for u in -r..=r {
        let rem = t as i128 - a as i128 * (u as i128).pow(2);
        if rem % b as i128 != 0 {
            continue;
        }
        let s = rem / b as i128;
        if s == 0 {
            count += 1;
        } else if let Some(v) = exact_sqrt_i128(s) {
            if v <= r as u128 {
                count += 2;
            }
        }
    }
    Ok(count)
}
