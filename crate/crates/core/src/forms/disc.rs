use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{check_pair, CVector, DiagonalCubicForm};
use crate::error::{domain, Error, Result};

/// Prefactor convention for `Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscNormalization {
    /// `3^{e_m} (F_1⋯F_m)^{2^{m−2}} ∏_ε [Σ ε_i (c_i³/F_i)^{1/2}]`.
    Definition,
    /// `3 ∏_ε [Σ ε_i (c_i³/F_i)^{1/2}]`.
    AppendixCode,
}

impl std::str::FromStr for DiscNormalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition" => Ok(DiscNormalization::Definition),
            "appendix-code" => Ok(DiscNormalization::AppendixCode),
            _ => domain(format!("unknown normalization {s:?}")),
        }
    }
}

/// `e_m = ((−1)^{m−1} − 2^{m−1})/3 + (m−1)·2^{m−2}`.
pub fn e_exponent(m: usize) -> Result<u64> {
    if m < 3 {
        return domain("e_m is defined for m >= 3");
    }
    if m > 60 {
        return Err(Error::ResourceLimit("m too large".into()));
    }
    let sign: i128 = if (m - 1) % 2 == 0 { 1 } else { -1 };
    let v = (sign - (1i128 << (m - 1))) / 3 + (m as i128 - 1) * (1i128 << (m - 2));
    Ok(v as u64)
}

/// Multiply `acc` (dense, indexed by subsets) by the linear element
/// `Σ_i lin[i] u_i`, where `u_i² = b_i`.
fn mul_linear(acc: &[BigInt], lin: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); acc.len()];
    for (s, a) in acc.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (i, l) in lin.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let bit = 1usize << i;
            let t = a * l;
            if s & bit != 0 {
                out[s ^ bit] += t * &b[i];
            } else {
                out[s ^ bit] += t;
            }
        }
    }
    out
}

/// `∏_ε Σ_i ε_i (P/F_i) u_i` over `ε ∈ {1}×{±1}^{m−1}` in the algebra
/// `Z[u]/(u_i² − c_i³F_i)`, where `P = ∏F_i`. The result is rational.
fn integral_sign_product(f: &DiagonalCubicForm, c: &CVector) -> Result<BigInt> {
    let m = f.m();
    let p: BigInt = f.coeffs().iter().map(|&x| BigInt::from(x)).product();
    let b: Vec<BigInt> = (0..m)
        .map(|i| BigInt::from(c.0[i]).pow(3) * f.coeffs()[i])
        .collect();
    let scaled: Vec<BigInt> = (0..m).map(|i| &p / f.coeffs()[i]).collect();
    let mut acc = vec![BigInt::zero(); 1 << m];
    acc[0] = BigInt::one();
    for signs in 0u64..(1 << (m - 1)) {
        let lin: Vec<BigInt> = (0..m)
            .map(|i| {
                let neg = i > 0 && (signs >> (i - 1)) & 1 == 1;
                if neg {
                    -scaled[i].clone() * c.0[i].signum().abs()
                } else {
                    scaled[i].clone() * c.0[i].signum().abs()
                }
            })
            .collect();
        acc = mul_linear(&acc, &lin, &b);
    }
    if acc.iter().skip(1).any(|x| !x.is_zero()) {
        return Err(Error::Invariant("radical part of the sign product".into()));
    }
    Ok(acc[0].clone())
}

/// Exact discriminant `Δ(F, c)` under the given normalization.
pub fn disc_delta(f: &DiagonalCubicForm, c: &CVector, norm: DiscNormalization) -> Result<BigInt> {
    check_pair(f, c)?;
    let m = f.m();
    if m > 12 {
        return Err(Error::ResourceLimit(format!("m = {m} has 2^{} brackets", m - 1)));
    }
    let prod = integral_sign_product(f, c)?;
    let p: BigInt = f.coeffs().iter().map(|&x| BigInt::from(x)).product();
    let half = 1usize << (m - 2);
    let (num, den) = match norm {
        DiscNormalization::Definition => {
            let three = BigInt::from(3).pow(e_exponent(m)? as u32);
            (three * prod, p.pow(half as u32))
        }
        DiscNormalization::AppendixCode => (BigInt::from(3) * prod, p.pow(2 * half as u32)),
    };
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::Domain(format!(
            "discriminant is not integral under {norm:?} normalization"
        )));
    }
    Ok(q)
}

/// True iff `p ∤ Δ(F, c)` (definition normalization).
pub fn is_smooth_section(f: &DiagonalCubicForm, c: &CVector, p: u64) -> Result<bool> {
    let d = disc_delta(f, c, DiscNormalization::Definition)?;
    if d.is_zero() {
        return Err(Error::SingularSection);
    }
    Ok(!(d % BigInt::from(p)).is_zero())
}
