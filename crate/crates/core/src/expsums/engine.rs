//! Evaluation of `S_c(q)`, `q = p^l`, through the embeddings
//! `Z[ζ_q] → F_P` (`P ≡ 1 mod q`), followed by Chinese remaindering.
//!
//! Write `g(b, v) = Σ_x ζ^{b x³ + v x}`. For fixed `v` the map `b ↦ g(b, v)`
//! is the length-`q` DFT of `w_v[t] = Σ_{x³ ≡ t} ζ^{v x}`, so one column costs
//! a single transform.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::arith::{euler_phi, gcd, prime_power};
use crate::exactnum::modp::{crt_symmetric, dft_prime_power, primes_needed, root_primes, RootPrime};

pub(crate) fn cached_root_primes(order: u64, count: usize) -> Vec<RootPrime> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<RootPrime>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&order) {
        if v.len() >= count {
            return v[..count].to_vec();
        }
    }
    let v = Arc::new(root_primes(order, count.max(4)));
    cache.lock().unwrap().insert(order, v.clone());
    v[..count].to_vec()
}

/// Columns `b ↦ g(b, v)` modulo one prime.
pub(crate) struct Columns {
    pub q: u64,
    pub ell: u64,
    pub rp: RootPrime,
    pow: Vec<u64>,
    cubes: Vec<usize>,
    cols: HashMap<u64, Vec<u64>>,
}

impl Columns {
    pub fn new(q: u64, rp: RootPrime) -> Self {
        let (ell, _) = prime_power(q).expect("prime power");
        let pow = rp.power_table();
        let cubes = (0..q).map(|x| ((x as u128).pow(3) % q as u128) as usize).collect();
        Columns { q, ell, rp, pow, cubes, cols: HashMap::new() }
    }

    pub fn compute(&self, v: u64) -> Vec<u64> {
        let q = self.q as usize;
        let mut w = vec![0u64; q];
        for x in 0..q {
            let e = (v as u128 * x as u128 % q as u128) as usize;
            let t = self.cubes[x];
            w[t] = self.rp.add(w[t], self.pow[e]);
        }
        dft_prime_power(&mut w, self.ell, &self.rp, self.rp.omega);
        w
    }

    pub fn ensure_many(&mut self, vs: &[u64]) {
        let missing: Vec<u64> = {
            let mut m: Vec<u64> = vs.iter().copied().filter(|v| !self.cols.contains_key(v)).collect();
            m.sort_unstable();
            m.dedup();
            m
        };
        let made = crate::par::map(&missing, |&v| self.compute(v));
        for (v, col) in missing.into_iter().zip(made) {
            self.cols.insert(v, col);
        }
    }

    /// `Σ_{u unit} ∏_i g(u F_i, v_i)` modulo the prime.
    pub fn unit_sum(&self, units: &[u64], f: &[u64], v: &[u64]) -> u64 {
        let cols: Vec<&Vec<u64>> = v.iter().map(|x| &self.cols[x]).collect();
        let q = self.q as u128;
        let mut acc = 0u64;
        for &u in units {
            let mut prod = 1u64;
            for (fi, col) in f.iter().zip(&cols) {
                let b = (u as u128 * *fi as u128 % q) as usize;
                prod = self.rp.mul(prod, col[b]);
                if prod == 0 {
                    break;
                }
            }
            acc = self.rp.add(acc, prod);
        }
        acc
    }
}

pub(crate) fn units(q: u64) -> Vec<u64> {
    (1..q).filter(|&u| gcd(u, q) == 1).collect()
}

/// `φ(q) q^m`, a bound for `|S_c(q)|` and for every power-basis coefficient of
/// the defining sum.
pub(crate) fn coefficient_bound(q: u64, m: usize) -> BigInt {
    BigInt::from(euler_phi(q)) * BigInt::from(q).pow(m as u32)
}

/// Certified `S_c(q)`: every Galois conjugate `σ_k` is evaluated, and agreement
/// of all of them under every embedding proves the value is a rational integer.
pub(crate) fn certified_prime_power(q: u64, f: &[i64], c: &[i64]) -> Result<BigInt> {
    let fm: Vec<u64> = f.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect();
    let cm: Vec<u64> = c.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect();
    let us = units(q);
    let bound = coefficient_bound(q, f.len()) * 4;
    let primes = cached_root_primes(q, primes_needed(&bound));
    let mut residues = vec![];
    for rp in &primes {
        let mut cols = Columns::new(q, *rp);
        let needed: Vec<u64> = us
            .iter()
            .flat_map(|&k| cm.iter().map(move |&ci| (k as u128 * ci as u128 % q as u128) as u64))
            .collect();
        cols.ensure_many(&needed);
        let sig: Vec<u64> = crate::par::map(&us, |&k| {
            let v: Vec<u64> = cm.iter().map(|&ci| (k as u128 * ci as u128 % q as u128) as u64).collect();
            cols.unit_sum(&us, &fm, &v)
        });
        if sig.iter().any(|&s| s != sig[0]) {
            return Err(Error::Invariant(format!("S_c({q}) failed the rationality certificate")));
        }
        residues.push(sig[0]);
    }
    let moduli: Vec<u64> = primes.iter().map(|r| r.p).collect();
    Ok(crt_symmetric(&residues, &moduli))
}

/// `S_c(q)` for many `c` at a fixed prime power, one embedding per prime.
/// The values are integers by the unit-scaling symmetry, so no per-`c`
/// certificate is needed.
pub struct PrimePowerBatch {
    q: u64,
    f: Vec<u64>,
    units: Vec<u64>,
    cols: Vec<Columns>,
}

impl PrimePowerBatch {
    pub fn new(q: u64, f: &[i64]) -> Self {
        let bound = coefficient_bound(q, f.len()) * 4;
        let primes = cached_root_primes(q, primes_needed(&bound));
        PrimePowerBatch {
            q,
            f: f.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect(),
            units: units(q),
            cols: primes.into_iter().map(|rp| Columns::new(q, rp)).collect(),
        }
    }

    pub fn eval_many(&mut self, cs: &[Vec<i64>]) -> Vec<BigInt> {
        let q = self.q as i64;
        let reduced: Vec<Vec<u64>> = cs
            .iter()
            .map(|c| c.iter().map(|&x| x.rem_euclid(q) as u64).collect())
            .collect();
        let all: Vec<u64> = reduced.iter().flatten().copied().collect();
        for col in self.cols.iter_mut() {
            col.ensure_many(&all);
        }
        let moduli: Vec<u64> = self.cols.iter().map(|c| c.rp.p).collect();
        let cols = &self.cols;
        let units = &self.units;
        let f = &self.f;
        crate::par::map(&reduced, |v| {
            let res: Vec<u64> = cols.iter().map(|col| col.unit_sum(units, f, v)).collect();
            crt_symmetric(&res, &moduli)
        })
    }
}
