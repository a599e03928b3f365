//! Ternary diagonal quadrics `Q_h(y) = Σ h_i y_i²` and the square locus
//! `3h₁h₂h₃(h₁³ + h₂³ + h₃³) = z²`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dirichlet::stats::StatReport;
use crate::error::{domain, Result};
use crate::exactnum::arith::exact_sqrt_i128;

fn is_square(v: i128) -> bool {
    v >= 0 && exact_sqrt_i128(v).is_some()
}

/// `−h₁h₂h₃k ∉ {0} ∪ (Q^×)²`. For an integer, being a rational square is
/// being a perfect square.
pub fn is_admissible(h: [i64; 3], k: i64) -> bool {
    let p = -(h[0] as i128) * h[1] as i128 * h[2] as i128 * k as i128;
    p != 0 && !is_square(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryInstance {
    pub h: [i64; 3],
    pub k: i64,
    pub x: u64,
}

impl TernaryInstance {
    pub fn admissible(&self) -> bool {
        is_admissible(self.h, self.k)
    }

    pub fn count(&self) -> Result<u64> {
        ternary_count(self.h, self.k, self.x)
    }
}

/// `#{y ∈ [−X, X]³ : Q_h(y) = k}`, looping over two coordinates and solving
/// for the third.
pub fn ternary_count(h: [i64; 3], k: i64, x: u64) -> Result<u64> {
    let Some(s) = (0..3).rev().find(|&i| h[i] != 0) else {
        return domain("h must be nonzero");
    };
    let (i, j) = match s {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let xi = x as i64;
    let hs = h[s] as i128;
    let mut count = 0u64;
    for a in -xi..=xi {
        let ra = k as i128 - h[i] as i128 * (a as i128).pow(2);
        for b in -xi..=xi {
            let rem = ra - h[j] as i128 * (b as i128).pow(2);
            if rem % hs != 0 {
                continue;
            }
            let t = rem / hs;
            if t == 0 {
                count += 1;
            } else if let Some(r) = exact_sqrt_i128(t).filter(|_| t > 0) {
                if r <= x as u128 {
                    count += 2;
                }
            }
        }
    }
    Ok(count)
}

/// `X/|h₁h₂h₃|^{1/3} + (X²H)^{1/4}`.
pub fn ternary_bound(h: [i64; 3], x: u64, hh: f64) -> f64 {
    let p = (h[0] as f64 * h[1] as f64 * h[2] as f64).abs();
    x as f64 / p.cbrt() + (x as f64 * x as f64 * hh).powf(0.25)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TernaryScanRow {
    pub h: [i64; 3],
    pub k: i64,
    pub x: u64,
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let i = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[i]
}

/// Sample `h` with `‖h‖_∞ ∈ [H, 2H]` and `k = Q_h(y₀)` for uniform
/// `y₀ ∈ [−X, X]³`, keep admissible pairs, and compare counts with the
/// conjectured bound. Reports the largest ratio.
pub fn ternary_conjecture_scan(
    hh: u64,
    x: u64,
    samples: usize,
    seed: u64,
) -> Result<(Vec<TernaryScanRow>, StatReport)> {
    if hh == 0 || x == 0 {
        return domain("H and X must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = 2 * hh as i64;
    let mut picked = Vec::new();
    let mut excluded = 0u64;
    let mut attempts = 0usize;
    while picked.len() < samples && attempts < samples * 100 + 100 {
        attempts += 1;
        let h = [0; 3].map(|_| rng.gen_range(-top..=top));
        let norm = h.iter().map(|v| v.unsigned_abs()).max().unwrap();
        if norm < hh {
            continue;
        }
        let y0 = [0; 3].map(|_| rng.gen_range(-(x as i64)..=x as i64));
        let k: i64 = (0..3).map(|i| h[i] * y0[i] * y0[i]).sum();
        if is_admissible(h, k) {
            picked.push((h, k));
        } else {
            excluded += 1;
        }
    }
    let rows: Vec<TernaryScanRow> = crate::par::map(&picked, |&(h, k)| {
        let count = ternary_count(h, k, x).expect("h is nonzero");
        let bound = ternary_bound(h, x, hh as f64);
        TernaryScanRow { h, k, x, count, bound, ratio: count as f64 / bound }
    });
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let max = ratios.last().copied().unwrap_or(0.0);
    let mut rep = StatReport::new(
        "ternary-scan",
        vec![
            ("H", hh.to_string()),
            ("X", x.to_string()),
            ("samples", samples.to_string()),
            ("seed", seed.to_string()),
            ("k", "Q_h(y0), y0 uniform in [-X,X]^3".into()),
        ],
        None,
        max,
        1.0,
    );
    rep.extras = BTreeMap::from([
        ("instances".into(), rows.len() as f64),
        ("excluded".into(), excluded as f64),
        ("q50".into(), quantile(&ratios, 0.5)),
        ("q90".into(), quantile(&ratios, 0.9)),
        ("q99".into(), quantile(&ratios, 0.99)),
    ]);
    Ok((rows, rep))
}

/// `3h₁h₂h₃(h₁³ + h₂³ + h₃³)`.
pub fn locus_value(h: [i64; 3]) -> i128 {
    let h = h.map(|v| v as i128);
    3 * h[0] * h[1] * h[2] * (h[0].pow(3) + h[1].pow(3) + h[2].pow(3))
}

/// Solutions `(h, z)` with `z ≥ 0` and `0 < ‖h‖_∞ ≤ H`.
pub fn square_locus(hmax: u64) -> Vec<([i64; 3], i64)> {
    let t = hmax as i64;
    let firsts: Vec<i64> = (-t..=t).collect();
    crate::par::map(&firsts, |&a| {
        let mut out = Vec::new();
        for b in -t..=t {
            for c in -t..=t {
                let h = [a, b, c];
                if h == [0, 0, 0] {
                    continue;
                }
                let v = locus_value(h);
                if let Some(z) = exact_sqrt_i128(v).filter(|_| v >= 0) {
                    out.push((h, z as i64));
                }
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `#{(h, z) : 0 < ‖h‖_∞ ≤ H, 3h₁h₂h₃F₀(h) = z²}`, counting `±z`.
pub fn square_locus_count(hmax: u64) -> u64 {
    square_locus(hmax)
        .iter()
        .map(|&(_, z)| if z == 0 { 1 } else { 2 })
        .sum()
}

/// Counts at each `H` with the least-squares log-log slope.
pub fn square_locus_scan(hs: &[u64]) -> Result<StatReport> {
    if hs.len() < 2 || hs.contains(&0) {
        return domain("need at least two positive H");
    }
    let counts: Vec<u64> = hs.iter().map(|&h| square_locus_count(h)).collect();
    let pts: Vec<(f64, f64)> = hs.iter().zip(&counts).map(|(&h, &c)| ((h as f64).ln(), (c as f64).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let hl = *hs.last().unwrap() as f64;
    let mut rep = StatReport::new(
        "square-locus",
        vec![("H", format!("{hs:?}"))],
        None,
        *counts.last().unwrap() as f64,
        hl * hl,
    );
    rep.extras.insert("slope".into(), slope);
    rep.extras.insert("reference_slope".into(), 2.0);
    for (h, c) in hs.iter().zip(&counts) {
        rep.extras.insert(format!("count_{h}"), *c as f64);
    }
    Ok(rep)
}

/// `(x, y) = (1/h₃, z/h₃²)` on `y² = 3h₁h₂((h₁³ + h₂³)x³ + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MordellPoint {
    pub x: String,
    pub y: String,
    pub on_curve: bool,
}

pub fn mordell_transform(h1: i64, h2: i64, h3: i64, z: i64) -> Result<MordellPoint> {
    if h3 == 0 {
        return domain("h3 must be nonzero");
    }
    let r = |v: i64| BigRational::from_integer(BigInt::from(v));
    let x = BigRational::one() / r(h3);
    let y = r(z) / r(h3 * h3);
    let s = r(h1).pow(3) + r(h2).pow(3);
    let rhs = r(3) * r(h1) * r(h2) * (s * x.pow(3) + BigRational::one());
    let on_curve = (&y * &y - rhs).is_zero();
    Ok(MordellPoint { x: x.to_string(), y: y.to_string(), on_curve })
}

/// Points `(t + 3h₂, t − 3h₁, t)` in `[−X, X]³`; when `h₁ + h₂ + h₃ = 0`
/// each solves `Q_h(y) = −9h₁h₂h₃`.
pub fn trivial_family(h: [i64; 3], x: u64) -> Vec<[i64; 3]> {
    let xi = x as i64;
    (-xi..=xi)
        .map(|t| [t + 3 * h[1], t - 3 * h[0], t])
        .filter(|y| y.iter().all(|v| v.abs() <= xi))
        .collect()
}
