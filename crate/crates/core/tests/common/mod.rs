#![allow(dead_code)]
//! Independent brute-force oracles shared by the integration tests.

use cubicdelta::exactnum::{cyclotomic_is_rational, CyclotomicElement, FiniteField};
use num_bigint::BigInt;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `S_c(n)` straight from the definition: a double loop over units `a` and
/// `x ∈ (Z/n)^m`, accumulated as exponent counts in `Z[ζ_n]`.
pub fn expsum_direct(f: &[i64], c: &[i64], n: u64) -> BigInt {
    let m = f.len();
    let nn = n as i64;
    let mut counts = vec![0i64; n as usize];
    let total = (n as usize).pow(m as u32);
    for a in 0..nn {
        if gcd(a as u64, n) != 1 {
            continue;
        }
        for mut k in 0..total {
            let mut e: i64 = 0;
            for i in 0..m {
                let x = (k % n as usize) as i64;
                k /= n as usize;
                e += a * f[i] % nn * (x * x % nn * x % nn) % nn + c[i] % nn * x % nn;
                e %= nn;
            }
            counts[e.rem_euclid(nn) as usize] += 1;
        }
    }
    let z = CyclotomicElement::from_exponent_counts(n, &counts);
    cyclotomic_is_rational(&z).expect("S_c(n) is an integer")
}

/// Affine count of `{Σ F_i x_i³ = 0, Σ c_i x_i = 0}` by enumerating `F_q^m`
/// (pass `c = None` for the hypersurface).
pub fn affine_count_direct(k: &FiniteField, f: &[i64], c: Option<&[i64]>) -> u64 {
    let m = f.len();
    let q = k.q as usize;
    let fk: Vec<u64> = f.iter().map(|&x| k.from_int(x)).collect();
    let ck: Vec<u64> = c.map(|c| c.iter().map(|&x| k.from_int(x)).collect()).unwrap_or_default();
    let cubes: Vec<u64> = (0..k.q).map(|x| k.pow(x, 3)).collect();
    let mut count = 0;
    for mut idx in 0..q.pow(m as u32) {
        let (mut s, mut l) = (0u64, 0u64);
        for i in 0..m {
            let x = (idx % q) as u64;
            idx /= q;
            s = k.add(s, k.mul(fk[i], cubes[x as usize]));
            if !ck.is_empty() {
                l = k.add(l, k.mul(ck[i], x));
            }
        }
        if s == 0 && l == 0 {
            count += 1;
        }
    }
    count
}

/// Tiny deterministic generator for sampled inputs.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 17
    }
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }
    pub fn vec(&mut self, m: usize, lo: i64, hi: i64) -> Vec<i64> {
        (0..m).map(|_| self.range(lo, hi)).collect()
    }
}
