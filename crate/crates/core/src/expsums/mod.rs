//! Complete exponential sums `S_c(n) = Σ_{a unit} Σ_x e_n(aF(x) + c·x)` and
//! the point-count errors `E`, `E_c`.

pub mod counts;
mod engine;
mod gtable;

pub use counts::CountMethod;
pub use engine::PrimePowerBatch;
pub use gtable::{expsum_cyclotomic, expsum_zero_ramanujan, ramanujan_sum, GTable};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactnum::arith::{factor_u64, is_prime_u64};
use crate::exactnum::HalfPower;
use crate::forms::{check_pair, CVector, DiagonalCubicForm};

/// Default largest prime power evaluated by [`expsum_prime_power`].
pub const DEFAULT_PRIME_POWER_BOUND: u64 = 2048;

/// `S_c(n)` with its normalization `S̃_c(n) = n^{−(m+1)/2} S_c(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpSumValue {
    pub n: u64,
    pub value: BigInt,
    pub normalized: HalfPower,
}

impl ExpSumValue {
    fn new(n: u64, m: usize, value: BigInt) -> Self {
        ExpSumValue {
            n,
            normalized: HalfPower::new(value.clone(), n, (m + 1) as u32),
            value,
        }
    }
}

/// `S_c(p^l)` for `p^l ≤ bound`.
pub fn expsum_prime_power_bounded(
    f: &DiagonalCubicForm,
    c: &CVector,
    p: u64,
    l: u32,
    bound: u64,
) -> Result<ExpSumValue> {
    check_pair(f, c)?;
    if !is_prime_u64(p) {
        return domain(format!("{p} is not prime"));
    }
    let q = p
        .checked_pow(l)
        .filter(|&q| q <= bound)
        .ok_or_else(|| Error::ResourceLimit(format!("{p}^{l} exceeds the bound {bound}")))?;
    let v = if l == 0 {
        BigInt::one()
    } else {
        engine::certified_prime_power(q, f.coeffs(), &c.0)?
    };
    Ok(ExpSumValue::new(q, f.m(), v))
}

pub fn expsum_prime_power(f: &DiagonalCubicForm, c: &CVector, p: u64, l: u32) -> Result<ExpSumValue> {
    expsum_prime_power_bounded(f, c, p, l, DEFAULT_PRIME_POWER_BOUND)
}

/// `S_c(n)` assembled from prime powers by multiplicativity.
pub fn expsum_bounded(f: &DiagonalCubicForm, c: &CVector, n: u64, bound: u64) -> Result<ExpSumValue> {
    check_pair(f, c)?;
    if n == 0 {
        return domain("n must be positive");
    }
    let mut v = BigInt::one();
    for (p, l) in factor_u64(n) {
        v *= expsum_prime_power_bounded(f, c, p, l, bound)?.value;
        if v.is_zero() {
            break;
        }
    }
    Ok(ExpSumValue::new(n, f.m(), v))
}

pub fn expsum(f: &DiagonalCubicForm, c: &CVector, n: u64) -> Result<ExpSumValue> {
    expsum_bounded(f, c, n, DEFAULT_PRIME_POWER_BOUND)
}

/// Memoized `S_c(q)` over many `(c, q)`: each prime power gets one
/// [`PrimePowerBatch`], and values are keyed by `c mod q`.
pub struct ExpSumTable {
    f: DiagonalCubicForm,
    bound: u64,
    batches: HashMap<u64, PrimePowerBatch>,
    values: HashMap<(u64, Vec<i64>), BigInt>,
}

impl ExpSumTable {
    pub fn new(f: &DiagonalCubicForm) -> Self {
        ExpSumTable {
            f: f.clone(),
            bound: DEFAULT_PRIME_POWER_BOUND,
            batches: HashMap::new(),
            values: HashMap::new(),
        }
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    /// Make sure `S_c(q)` is known for every `c` in `cs` and every prime
    /// power `q ∥ n` of every `n` in `ns`.
    pub fn prefetch(&mut self, cs: &[CVector], ns: &[u64]) -> Result<()> {
        let mut qs: Vec<u64> = ns
            .iter()
            .flat_map(|&n| factor_u64(n).into_iter().map(|(p, l)| p.pow(l)))
            .collect();
        qs.sort_unstable();
        qs.dedup();
        for q in qs {
            if q > self.bound {
                return Err(Error::ResourceLimit(format!("{q} exceeds the bound {}", self.bound)));
            }
            let mut todo: Vec<Vec<i64>> = cs
                .iter()
                .map(|c| c.0.iter().map(|&x| x.rem_euclid(q as i64)).collect())
                .filter(|k: &Vec<i64>| !self.values.contains_key(&(q, k.clone())))
                .collect();
            todo.sort();
            todo.dedup();
            if todo.is_empty() {
                continue;
            }
            let f = self.f.coeffs().to_vec();
            let batch = self.batches.entry(q).or_insert_with(|| PrimePowerBatch::new(q, &f));
            let vals = batch.eval_many(&todo);
            for (k, v) in todo.into_iter().zip(vals) {
                self.values.insert((q, k), v);
            }
        }
        Ok(())
    }

    /// `S_c(n)` if every prime-power factor is already known.
    pub fn peek(&self, c: &CVector, n: u64) -> Option<BigInt> {
        let mut v = BigInt::one();
        for (p, l) in factor_u64(n) {
            let q = p.pow(l);
            let key: Vec<i64> = c.0.iter().map(|&x| x.rem_euclid(q as i64)).collect();
            v *= self.values.get(&(q, key))?;
        }
        Some(v)
    }

    pub fn form(&self) -> &DiagonalCubicForm {
        &self.f
    }

    pub fn get(&mut self, c: &CVector, n: u64) -> Result<BigInt> {
        let mut v = BigInt::one();
        for (p, l) in factor_u64(n) {
            let q = p.pow(l);
            let key: Vec<i64> = c.0.iter().map(|&x| x.rem_euclid(q as i64)).collect();
            if !self.values.contains_key(&(q, key.clone())) {
                self.prefetch(std::slice::from_ref(c), &[q])?;
            }
            v *= &self.values[&(q, key)];
            if v.is_zero() {
                break;
            }
        }
        Ok(v)
    }
}

/// Point counts and their normalized errors. Hypersurface fields are filled
/// by [`count_hypersurface`], section fields by [`count_section`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountErrors {
    pub q: u64,
    pub rho: Option<BigInt>,
    pub rho_c: Option<BigInt>,
    pub e: Option<BigInt>,
    pub e_c: Option<BigInt>,
    /// `Ẽ = q^{−(m−2)/2} E`.
    pub e_tilde: Option<HalfPower>,
    /// `Ẽ_c = q^{−(m−3)/2} E_c`.
    pub e_c_tilde: Option<HalfPower>,
}

impl CountErrors {
    /// Fill in whichever half is missing from `other`.
    pub fn merge(mut self, other: CountErrors) -> Self {
        self.rho = self.rho.or(other.rho);
        self.rho_c = self.rho_c.or(other.rho_c);
        self.e = self.e.or(other.e);
        self.e_c = self.e_c.or(other.e_c);
        self.e_tilde = self.e_tilde.or(other.e_tilde);
        self.e_c_tilde = self.e_c_tilde.or(other.e_c_tilde);
        self
    }
}

/// `(q^k − 1)/(q − 1)`, the count of `P^{k−1}(F_q)`.
pub fn projective_space_count(q: u64, k: u32) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    (BigInt::from(q).pow(k) - 1u32) / BigInt::from(q - 1)
}

/// Projective count of `{Σ F_i x_i³ = 0} ⊂ P^{m−1}(F_q)` for any number of
/// variables `m ≥ 1`.
pub fn count_hypersurface_coeffs(f: &[i64], q: u64, method: CountMethod) -> Result<CountErrors> {
    if f.is_empty() {
        return domain("need at least one variable");
    }
    let k = counts::field_for(q)?;
    let m = f.len() as u32;
    let rho = counts::projectivize(&counts::affine_hypersurface(&k, f, method)?, q)?;
    let e = &rho - projective_space_count(q, m - 1);
    let e_tilde = (m >= 2).then(|| HalfPower::new(e.clone(), q, m - 2));
    Ok(CountErrors {
        q,
        rho: Some(rho),
        e: Some(e),
        e_tilde,
        ..Default::default()
    })
}

pub fn count_hypersurface(f: &DiagonalCubicForm, q: u64) -> Result<CountErrors> {
    count_hypersurface_coeffs(f.coeffs(), q, CountMethod::Auto)
}

/// Projective count of the section `{F = 0, c·x = 0}` over `F_q`.
pub fn count_section_with(
    f: &DiagonalCubicForm,
    c: &CVector,
    q: u64,
    method: CountMethod,
) -> Result<CountErrors> {
    check_pair(f, c)?;
    let k = counts::field_for(q)?;
    if c.0.iter().all(|&x| k.from_int(x) == 0) {
        return Err(Error::SectionDegenerates(k.p));
    }
    let m = f.m() as u32;
    let rho_c = counts::projectivize(&counts::affine_section(&k, f.coeffs(), &c.0, method)?, q)?;
    let e_c = &rho_c - projective_space_count(q, m - 2);
    Ok(CountErrors {
        q,
        e_c_tilde: Some(HalfPower::new(e_c.clone(), q, m - 3)),
        rho_c: Some(rho_c),
        e_c: Some(e_c),
        ..Default::default()
    })
}

pub fn count_section(f: &DiagonalCubicForm, c: &CVector, q: u64) -> Result<CountErrors> {
    count_section_with(f, c, q, CountMethod::Auto)
}

/// `p² E_c(p) − p E(p)` for `p ∤ c`, or `p² E(p) − p E(p)` when `p | c`.
pub fn hooley_rhs(f: &DiagonalCubicForm, c: &CVector, p: u64) -> Result<BigInt> {
    let h = count_hypersurface(f, p)?;
    let e = h.e.unwrap();
    let pb = BigInt::from(p);
    let lead = if c.0.iter().all(|x| x.mod_floor(&(p as i64)) == 0) {
        e.clone()
    } else {
        count_section(f, c, p)?.e_c.unwrap()
    };
    Ok(&pb * &pb * lead - pb * e)
}
