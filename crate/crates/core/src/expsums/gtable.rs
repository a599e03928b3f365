//! Exact one-variable sums `g(a, c; n) = Σ_x ζ_n^{a x³ + c x}` in `Z[ζ_n]`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cache::DiskCache;
use crate::error::{Error, Result};
use crate::exactnum::arith::{euler_phi, gcd};
use crate::exactnum::{cyclotomic_is_rational, CyclotomicElement};

const GTABLE_VERSION: u32 = 1;
const GTABLE_MAGIC: &[u8; 4] = b"GTAB";

/// All `g(a, c; n)` for `a, c mod n`, stored row-major by `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct GTable {
    n: u64,
    entries: Vec<CyclotomicElement>,
}

impl GTable {
    pub fn build(n: u64) -> Self {
        let nn = n as usize;
        let rows: Vec<Vec<CyclotomicElement>> = crate::par::map_range(nn, |a| {
            (0..nn)
                .map(|c| {
                    let mut counts = vec![0i64; nn];
                    for x in 0..nn as u128 {
                        let e = (a as u128 * x * x * x + c as u128 * x) % n as u128;
                        counts[e as usize] += 1;
                    }
                    CyclotomicElement::from_exponent_counts(n, &counts)
                })
                .collect()
        });
        GTable { n, entries: rows.into_iter().flatten().collect() }
    }

    /// Load from the cache when present, otherwise build and store.
    pub fn load_or_build(n: u64, cache: Option<&DiskCache>) -> Result<Self> {
        let key = format!("gtable:n={n}");
        if let Some(c) = cache {
            if let Some(bytes) = c.get("gtable", &key, GTABLE_VERSION) {
                if let Some(t) = Self::from_bytes(&bytes) {
                    if t.n == n {
                        return Ok(t);
                    }
                }
            }
        }
        let t = Self::build(n);
        if let Some(c) = cache {
            c.put("gtable", &key, GTABLE_VERSION, &t.to_bytes())?;
        }
        Ok(t)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn get(&self, a: i64, c: i64) -> &CyclotomicElement {
        let n = self.n as i64;
        let (a, c) = (a.rem_euclid(n) as usize, c.rem_euclid(n) as usize);
        &self.entries[a * self.n as usize + c]
    }

    /// Header (magic, version, n, φ(n)) then the row-major coefficient array
    /// as little-endian `i64`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let phi = euler_phi(self.n);
        let mut out = Vec::with_capacity(24 + self.entries.len() * phi as usize * 8);
        out.extend_from_slice(GTABLE_MAGIC);
        out.extend_from_slice(&GTABLE_VERSION.to_le_bytes());
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&phi.to_le_bytes());
        for e in &self.entries {
            for c in e.coeffs() {
                let v: i64 = c.try_into().expect("g(a,c;n) coefficients fit in i64");
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(b: &[u8]) -> Option<Self> {
        if b.len() < 24 || &b[..4] != GTABLE_MAGIC {
            return None;
        }
        if u32::from_le_bytes(b[4..8].try_into().ok()?) != GTABLE_VERSION {
            return None;
        }
        let n = u64::from_le_bytes(b[8..16].try_into().ok()?);
        let phi = u64::from_le_bytes(b[16..24].try_into().ok()?) as usize;
        if phi as u64 != euler_phi(n) || b.len() != 24 + (n * n) as usize * phi * 8 {
            return None;
        }
        let mut entries = Vec::with_capacity((n * n) as usize);
        for chunk in b[24..].chunks_exact(phi * 8) {
            let coeffs: Vec<BigInt> = chunk
                .chunks_exact(8)
                .map(|x| BigInt::from(i64::from_le_bytes(x.try_into().unwrap())))
                .collect();
            entries.push(CyclotomicElement::reduce(n, coeffs));
        }
        Some(GTable { n, entries })
    }
}

/// `S_c(n) = Σ_{a unit} ∏_i g(a F_i, c_i; n)` multiplied out in `Z[ζ_n]`.
pub fn expsum_cyclotomic(table: &GTable, f: &[i64], c: &[i64]) -> Result<BigInt> {
    let n = table.modulus();
    let units: Vec<u64> = (0..n).filter(|&a| gcd(a, n) == 1).collect();
    let terms: Vec<CyclotomicElement> = crate::par::map(&units, |&a| {
        f.iter().zip(c).fold(CyclotomicElement::from_int(n, 1), |acc, (&fi, &ci)| {
            acc.mul(table.get((a as i64 * fi).rem_euclid(n as i64), ci))
        })
    });
    let total = terms
        .iter()
        .fold(CyclotomicElement::zero(n), |acc, t| acc.add(t));
    cyclotomic_is_rational(&total)
        .ok_or_else(|| Error::Invariant(format!("S_c({n}) is not a rational integer")))
}

/// Ramanujan sum `c_n(t) = Σ_{d | gcd(n, t)} μ(n/d) d`.
pub fn ramanujan_sum(n: u64, t: u64) -> i64 {
    let g = gcd(n, t % n);
    let g = if g == 0 { n } else { g };
    crate::exactnum::arith::divisors(g)
        .into_iter()
        .map(|d| crate::exactnum::arith::mobius(n / d) * d as i64)
        .sum()
}

/// `S_0(n) = Σ_t #{x : F(x) ≡ t} · c_n(t)`, from the value distribution of
/// `F` modulo `n`.
pub fn expsum_zero_ramanujan(f: &[i64], n: u64) -> BigInt {
    let nn = n as usize;
    let mut dist = vec![BigInt::zero(); nn];
    dist[0] = BigInt::from(1);
    for &fi in f {
        let mut single = vec![0u64; nn];
        for x in 0..n as u128 {
            let v = ((fi as i128).rem_euclid(n as i128) as u128 * x * x * x) % n as u128;
            single[v as usize] += 1;
        }
        let mut next = vec![BigInt::zero(); nn];
        for (s, d) in dist.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (t, &k) in single.iter().enumerate() {
                if k != 0 {
                    next[(s + t) % nn] += d * k;
                }
            }
        }
        dist = next;
    }
    dist.iter()
        .enumerate()
        .map(|(t, d)| d * ramanujan_sum(n, t as u64))
        .sum()
}
