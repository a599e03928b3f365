//! The rings `Z[ζ_n]` in the power basis `1, ζ, …, ζ^{φ(n)-1}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::arith::{divisors, euler_phi, mobius};

/// `Φ_n` as integer coefficients, lowest degree first. Cached per conductor.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let phi = Arc::new(compute_cyclotomic(n));
    cache.lock().unwrap().entry(n).or_insert(phi).clone()
}

fn compute_cyclotomic(n: u64) -> Vec<i64> {
    // Φ_n = ∏_{d|n} (x^d - 1)^{μ(n/d)}: multiply the numerator factors, then
    // divide out the denominator ones (all monic, so division is exact).
    let mut num = vec![1i128];
    let mut den: Vec<u64> = vec![];
    for d in divisors(n) {
        match mobius(n / d) {
            1 => {
                let mut next = vec![0i128; num.len() + d as usize];
                for (i, &a) in num.iter().enumerate() {
                    next[i] -= a;
                    next[i + d as usize] += a;
                }
                num = next;
            }
            -1 => den.push(d),
            _ => {}
        }
    }
    for d in den {
        // divide by x^d - 1
        let d = d as usize;
        let deg = num.len() - 1;
        let mut q = vec![0i128; deg + 1 - d];
        let mut rem = num.clone();
        for i in (d..=deg).rev() {
            let c = rem[i];
            q[i - d] = c;
            rem[i] -= c;
            rem[i - d] += c;
        }
        debug_assert!(rem.iter().all(|&x| x == 0));
        num = q;
    }
    num.into_iter().map(|c| c as i64).collect()
}

/// An element of `Z[ζ_n]`, canonically reduced modulo `Φ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElement {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicElement {
    pub fn zero(n: u64) -> Self {
        CyclotomicElement {
            n,
            coeffs: vec![BigInt::zero(); euler_phi(n) as usize],
        }
    }

    pub fn from_int(n: u64, v: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v.into();
        z
    }

    /// `ζ_n^k`.
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        let mut counts = vec![0i64; n as usize];
        counts[k.rem_euclid(n as i64) as usize] = 1;
        Self::from_exponent_counts(n, &counts)
    }

    /// `Σ_k counts[k] ζ^k` for `counts` of length `n`.
    pub fn from_exponent_counts(n: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), n as usize);
        let wide: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        Self::reduce(n, wide)
    }

    /// Reduce a coefficient vector of any length (interpreted as a polynomial
    /// in ζ) modulo `Φ_n`.
    pub fn reduce(n: u64, mut v: Vec<BigInt>) -> Self {
        let phi = cyclotomic_poly(n);
        let d = phi.len() - 1;
        // first fold modulo x^n - 1 to keep the division short
        let nn = n as usize;
        if v.len() > nn {
            let tail = v.split_off(nn);
            for (i, c) in tail.into_iter().enumerate() {
                v[i % nn] += c;
            }
        }
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for (j, &pc) in phi.iter().enumerate().take(d) {
                if pc != 0 {
                    v[i - d + j] -= &c * pc;
                }
            }
        }
        v.resize(d, BigInt::zero());
        CyclotomicElement { n, coeffs: v }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicElement { n: self.n, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicElement { n: self.n, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CyclotomicElement {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let d = self.coeffs.len();
        if d == 0 {
            return self.clone();
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::reduce(self.n, prod)
    }

    /// The Galois conjugate `ζ ↦ ζ^k` for `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.n as i64;
        let mut v = vec![BigInt::zero(); self.n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = ((i as i64) * k).rem_euclid(n) as usize;
            v[e] += c;
        }
        Self::reduce(self.n, v)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Value under the embedding `ζ ↦ e^{2πi/n}`.
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = std::f64::consts::TAU * i as f64 / self.n as f64;
            acc += Complex64::from_polar(1.0, t) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

/// The integer value of `x` if it lies in `Z`.
pub fn cyclotomic_is_rational(x: &CyclotomicElement) -> Option<BigInt> {
    if x.coeffs.iter().skip(1).all(|c| c.is_zero()) {
        Some(x.coeffs.first().cloned().unwrap_or_default())
    } else {
        None
    }
}
