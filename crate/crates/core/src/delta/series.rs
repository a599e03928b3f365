//! Partial sums of the singular series `𝔖 = Σ_n n^{−m} S_0(n)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactnum::arith::factor_u64;
use crate::expsums::expsum_zero_ramanujan;
use crate::forms::DiagonalCubicForm;

/// Largest `N` accepted by [`singular_series`].
pub const SERIES_BOUND: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSeriesReport {
    pub form: Vec<i64>,
    pub n_max: u64,
    /// `(N, 𝔖_N)` at `N = 1, 2, 4, …` and at `n_max`.
    pub partial_sums: Vec<(u64, f64)>,
    /// `𝔖_{n_max}` as an exact rational `p/q`.
    pub exact: String,
    /// `(N, |𝔖_{2N} − 𝔖_N|)` for `2N ≤ n_max`.
    pub increments: Vec<(u64, f64)>,
    /// Least-squares slope of `log max_{n ∈ (2^k, 2^{k+1}]} |n^{−m} S_0(n)|`
    /// against `k log 2`.
    pub tail_slope: Option<f64>,
    /// `−(m−3)/3`, the exponent of the pointwise bound on the terms.
    pub reference_slope: f64,
}

fn slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Exact partial sums `𝔖_N = Σ_{n ≤ N} n^{−m} S_0(n)` for `N ≤ n_max`, with
/// `S_0` assembled multiplicatively from prime powers.
pub fn singular_series(f: &DiagonalCubicForm, n_max: u64) -> Result<SingularSeriesReport> {
    let m = f.m();
    if m < 4 {
        return domain(format!("singular series needs m ≥ 4, got {m}"));
    }
    if n_max == 0 {
        return domain("n_max must be positive");
    }
    if n_max > SERIES_BOUND {
        return Err(Error::ResourceLimit(format!("n_max = {n_max} exceeds {SERIES_BOUND}")));
    }
    let mut local: HashMap<u64, BigInt> = HashMap::new();
    let mut sum = BigRational::zero();
    let mut partial = vec![BigRational::zero()];
    let mut block_max: Vec<f64> = Vec::new();
    for n in 1..=n_max {
        let mut s = BigInt::from(1);
        for (p, l) in factor_u64(n) {
            let q = p.pow(l);
            s *= local
                .entry(q)
                .or_insert_with(|| expsum_zero_ramanujan(f.coeffs(), q))
                .clone();
        }
        let term = BigRational::new(s, BigInt::from(n).pow(m as u32));
        let k = 63 - n.leading_zeros() as usize;
        if block_max.len() <= k {
            block_max.push(0.0);
        }
        block_max[k] = block_max[k].max(term.abs().to_f64().unwrap_or(f64::NAN));
        sum += term;
        partial.push(sum.clone());
    }
    let at = |n: u64| partial[n as usize].to_f64().unwrap_or(f64::NAN);
    let mut partial_sums = Vec::new();
    let mut n = 1;
    while n <= n_max {
        partial_sums.push((n, at(n)));
        n *= 2;
    }
    if partial_sums.last().map(|p| p.0) != Some(n_max) {
        partial_sums.push((n_max, at(n_max)));
    }
    let mut increments = Vec::new();
    let mut n = 1;
    while 2 * n <= n_max {
        let d = &partial[2 * n as usize] - &partial[n as usize];
        increments.push((n, d.abs().to_f64().unwrap_or(f64::NAN)));
        n *= 2;
    }
    // skip the first blocks, they are not tail
    let pts: Vec<(f64, f64)> = block_max
        .iter()
        .enumerate()
        .skip(2)
        .filter(|(_, &v)| v > 0.0)
        .map(|(k, &v)| (k as f64 * std::f64::consts::LN_2, v.ln()))
        .collect();
    Ok(SingularSeriesReport {
        form: f.coeffs().to_vec(),
        n_max,
        partial_sums,
        exact: partial[n_max as usize].to_string(),
        increments,
        tail_slope: slope(&pts),
        reference_slope: -((m as f64) - 3.0) / 3.0,
    })
}
