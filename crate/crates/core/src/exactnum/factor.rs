//! Factorization of arbitrary-precision integers.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::arith::{factor_u64, primes_up_to};
use crate::error::{domain, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| primes_up_to(TRIAL_LIMIT))
}

/// An integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInt {
    pub value: BigInt,
    /// Sorted by prime; exponents are positive.
    pub factors: Vec<(BigInt, u32)>,
}

impl FactoredInt {
    pub fn from_u64(n: u64) -> Self {
        FactoredInt {
            value: BigInt::from(n),
            factors: factor_u64(n)
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect(),
        }
    }

    /// Product of the prime powers, times the sign of `value`.
    pub fn product(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.value.sign() == Sign::Minus {
            -acc
        } else {
            acc
        }
    }

    /// Human-readable form such as `3^13 * 996001`.
    pub fn display(&self) -> String {
        if self.factors.is_empty() {
            return self.value.to_string();
        }
        let body = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join(" * ");
        if self.value.sign() == Sign::Minus {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Miller-Rabin with the first twenty prime bases. This is a proof of
/// primality below 3.3e24 and a very strong probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return super::arith::is_prime_u64(v);
    }
    let bases = [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for &p in &bases {
        if (n % p).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in &bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if let Some(v) = n.to_u64() {
        for (p, e) in factor_u64(v) {
            for _ in 0..e {
                out.push(BigUint::from(p));
            }
        }
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = rho_big(&n);
    let q = &n / &d;
    split_big(d, out);
    split_big(q, out);
}

/// Prime factorization of a nonzero integer: trial division up to 10^6, then
/// Miller-Rabin and Pollard rho on the cofactor.
pub fn factorize(n: &BigInt) -> Result<FactoredInt> {
    if n.is_zero() {
        return domain("cannot factor 0");
    }
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    if let Some(v) = m.to_u64() {
        return Ok(FactoredInt {
            value: n.clone(),
            factors: factor_u64(v)
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect(),
        });
    }
    for &p in small_primes() {
        if m.to_u64().is_some() {
            break;
        }
        let pb = BigUint::from(p);
        if (&m % &pb).is_zero() {
            let mut e = 0;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            factors.push((BigInt::from(p), e));
        }
    }
    let mut rest = vec![];
    split_big(m, &mut rest);
    rest.sort();
    for p in rest {
        let p = BigInt::from(p);
        match factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, e)) => *e += 1,
            None => factors.push((p, 1)),
        }
    }
    factors.sort();
    Ok(FactoredInt {
        value: n.clone(),
        factors,
    })
}

/// `(rad(n), sq(n), cub(n))`: the radical, the square-full part and the
/// cube-full part of `n`.
pub fn mult_parts(n: u64) -> (u64, u64, u64) {
    assert!(n >= 1, "mult_parts needs n >= 1");
    let mut rad = 1;
    let mut sq = 1;
    let mut cub = 1;
    for (p, e) in factor_u64(n) {
        rad *= p;
        if e >= 2 {
            sq *= p.pow(e);
        }
        if e >= 3 {
            cub *= p.pow(e);
        }
    }
    (rad, sq, cub)
}
