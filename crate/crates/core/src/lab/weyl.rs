//! The cubic Weyl sum and a totient divisibility search.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exactnum::arith::euler_phi;
use crate::exactnum::CyclotomicElement;

/// `T(θ) = Σ_{|x| ≤ X} e(θx³)` in floating point.
pub fn weyl_sum(theta: f64, x: u64) -> Complex64 {
    let xi = x as i64;
    (-xi..=xi)
        .map(|t| {
            let c = (t as f64).powi(3);
            Complex64::from_polar(1.0, TAU * (theta * c).rem_euclid(1.0))
        })
        .sum()
}

/// `T(a/n)` term by term, reducing `a x³ mod n` exactly before evaluating.
pub fn weyl_sum_direct(a: i64, n: u64, x: u64) -> Complex64 {
    let nn = n.max(1) as i128;
    let xi = x as i128;
    (-xi..=xi)
        .map(|t| {
            let r = (a as i128 * t.pow(3)).rem_euclid(nn);
            Complex64::from_polar(1.0, TAU * r as f64 / nn as f64)
        })
        .sum()
}

/// `T(a/n)` as an element of `Z[ζ_n]`, from the residues of `a x³ mod n`.
pub fn weyl_sum_exact(a: i64, n: u64, x: u64) -> Result<CyclotomicElement> {
    if n == 0 {
        return domain("n must be positive");
    }
    let nn = n as i128;
    let mut counts = vec![0i64; n as usize];
    let xi = x as i128;
    for t in -xi..=xi {
        let r = (a as i128 * t.rem_euclid(nn).pow(3)).rem_euclid(nn);
        counts[r as usize] += 1;
    }
    Ok(CyclotomicElement::from_exponent_counts(n, &counts))
}

/// `T(a/n)` via [`weyl_sum_exact`], evaluated at the end.
pub fn weyl_sum_rational(a: i64, n: u64, x: u64) -> Result<Complex64> {
    Ok(weyl_sum_exact(a, n, x)?.to_complex())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiSearch {
    pub max_tested: u64,
    pub max_discovered: u64,
}

/// Scans `1 ≤ n < limit` for `φ(n) | mult·d` with some `d ≤ d_max`.
pub fn phi_divisibility_search(limit: u64, d_max: u64, mult: u64) -> Result<PhiSearch> {
    if limit < 2 {
        return domain("limit must be at least 2");
    }
    let hit = |n: u64| {
        let p = euler_phi(n);
        (1..=d_max).any(|d| (mult * d) % p == 0)
    };
    let max_discovered = (1..limit).rev().find(|&n| hit(n)).unwrap_or(0);
    Ok(PhiSearch { max_tested: limit - 1, max_discovered })
}
