//! Arithmetic modulo word-sized primes `P ≡ 1 (mod M)`, used to evaluate
//! sums in `Z[ζ_M]` through the embeddings `ζ_M ↦ ω ∈ F_P`, and Chinese
//! remaindering back to exact integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::arith::{add_mod, factor_u64, is_prime_u64, mul_mod, pow_mod, sub_mod};

/// A prime `P` with a fixed element `omega` of exact order `order`.
#[derive(Clone, Copy, Debug)]
pub struct RootPrime {
    pub p: u64,
    pub order: u64,
    pub omega: u64,
}

impl RootPrime {
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }
    pub fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }
    /// Reduce a signed integer.
    pub fn from_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.p as i128) as u64
    }
    /// `omega^k` for every `k` in `0..order`.
    pub fn power_table(&self) -> Vec<u64> {
        let mut t = Vec::with_capacity(self.order as usize);
        let mut x = 1u64;
        for _ in 0..self.order {
            t.push(x);
            x = self.mul(x, self.omega);
        }
        t
    }
}

/// The `count` largest primes below 2^62 that are `≡ 1 (mod order)`, each
/// with a deterministic element of exact order `order`.
pub fn root_primes(order: u64, count: usize) -> Vec<RootPrime> {
    assert!(order >= 1);
    let top: u64 = 1 << 62;
    let mut k = (top - 1) / order;
    let ell: Vec<u64> = factor_u64(order).into_iter().map(|(l, _)| l).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = k * order + 1;
        k -= 1;
        if !is_prime_u64(p) {
            continue;
        }
        let cof = (p - 1) / order;
        let mut g = 2u64;
        let omega = loop {
            let w = pow_mod(g, cof, p);
            if ell.iter().all(|&l| pow_mod(w, order / l, p) != 1) {
                break w;
            }
            g += 1;
        };
        out.push(RootPrime { p, order, omega });
    }
    out
}

/// Number of 62-bit primes needed so that their product exceeds `bound`.
pub fn primes_needed(bound: &BigInt) -> usize {
    let bits = bound.bits() as usize;
    bits / 61 + 1
}

/// Combine residues into the unique integer in the symmetric range
/// `(-M/2, M/2]`, `M = ∏ moduli`.
pub fn crt_symmetric(residues: &[u64], moduli: &[u64]) -> BigInt {
    assert_eq!(residues.len(), moduli.len());
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(moduli) {
        // x' = x + m * t with t ≡ (r - x) / m (mod p)
        let pb = BigInt::from(p);
        let xm = ((&x % &pb) + &pb) % &pb;
        let xm: u64 = xm.try_into().unwrap();
        let mm = ((&m % &pb) + &pb) % &pb;
        let mm: u64 = mm.try_into().unwrap();
        let inv = pow_mod(mm, p - 2, p);
        let t = mul_mod(sub_mod(r % p, xm, p), inv, p);
        x += &m * BigInt::from(t);
        m *= &pb;
    }
    let half = &m >> 1;
    if x > half {
        x -= &m;
    }
    x
}

/// In-place cyclic DFT `A[k] = Σ_j a[j] ω^{jk}` of length `N = ℓ^e`
/// (`ω` of order `N`), by radix-ℓ decimation in time.
pub fn dft_prime_power(a: &mut [u64], ell: u64, rp: &RootPrime, omega: u64) {
    let n = a.len();
    if n <= 1 {
        return;
    }
    let ell = ell as usize;
    assert!(n % ell == 0);
    if n == ell {
        let src = a.to_vec();
        let w_pows: Vec<u64> = {
            let mut v = Vec::with_capacity(n);
            let mut x = 1;
            for _ in 0..n {
                v.push(x);
                x = rp.mul(x, omega);
            }
            v
        };
        for (k, out) in a.iter_mut().enumerate() {
            let mut s = 0u64;
            for (j, &v) in src.iter().enumerate() {
                s = rp.add(s, rp.mul(v, w_pows[(j * k) % n]));
            }
            *out = s;
        }
        return;
    }
    let m = n / ell;
    // Split into ell interleaved subsequences, transform each with ω^ell.
    let mut subs: Vec<Vec<u64>> = (0..ell)
        .map(|r| (0..m).map(|j| a[j * ell + r]).collect())
        .collect();
    let w_ell = rp.pow(omega, ell as u64);
    for s in subs.iter_mut() {
        dft_prime_power(s, ell as u64, rp, w_ell);
    }
    // A[k] = Σ_r ω^{rk} S_r[k mod m]
    let mut wk = 1u64;
    for k in 0..n {
        let mut acc = 0u64;
        let mut wrk = 1u64;
        for s in subs.iter() {
            acc = rp.add(acc, rp.mul(wrk, s[k % m]));
            wrk = rp.mul(wrk, wk);
        }
        a[k] = acc;
        wk = rp.mul(wk, omega);
    }
}

/// In-place DFT over `(Z/p)^r` for an array in mixed-radix order (the digit
/// for axis 0 is least significant): `A[b] = Σ_x a[x] ω^{b·x}` with `ω` of
/// order `p`.
pub fn dft_elementary(a: &mut [u64], p: u64, r: u32, rp: &RootPrime, omega: u64) {
    let p = p as usize;
    let n = a.len();
    assert_eq!(n, p.pow(r));
    let w: Vec<u64> = {
        let mut v = Vec::with_capacity(p);
        let mut x = 1;
        for _ in 0..p {
            v.push(x);
            x = rp.mul(x, omega);
        }
        v
    };
    let mut line = vec![0u64; p];
    let mut stride = 1usize;
    for _axis in 0..r {
        let block = stride * p;
        for base in (0..n).step_by(block) {
            for off in 0..stride {
                for j in 0..p {
                    line[j] = a[base + off + j * stride];
                }
                for k in 0..p {
                    let mut s = 0u64;
                    for j in 0..p {
                        if line[j] != 0 {
                            s = rp.add(s, rp.mul(line[j], w[(j * k) % p]));
                        }
                    }
                    a[base + off + k * stride] = s;
                }
            }
        }
        stride = block;
    }
}
