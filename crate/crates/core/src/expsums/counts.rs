//! Affine and projective point counts over `F_q` for `F = 0` and for the
//! section `F = c·x = 0`.
//!
//! Two independent methods are provided: direct convolution of value
//! histograms, and additive characters, where every one-variable sum
//! `g(a, b) = Σ_x ψ(Tr(a x³ + b x))` is read off an `r`-dimensional DFT over
//! `(Z/p)^r`, evaluated modulo word primes `P ≡ 1 (mod p)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::engine::cached_root_primes;
use crate::error::{domain, Error, Result};
use crate::exactnum::arith::prime_power;
use crate::exactnum::modp::{crt_symmetric, dft_elementary, primes_needed, RootPrime};
use crate::exactnum::FiniteField;

/// How to count points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Histogram convolution for small fields, characters otherwise.
    Auto,
    /// Additive convolution of one-variable value histograms.
    Convolution,
    /// Eliminate the pivot variable `i0`, tabulate `(Σ F_j x_j³, Σ c_j x_j)`
    /// over the remaining variables except `i1`, and count roots of the
    /// induced cubic in `x_{i1}` (sections only).
    Pivot { i0: usize, i1: usize },
    /// Additive characters.
    Character,
}

/// Histogram methods are used up to this field size.
const CONVOLUTION_LIMIT: u64 = 1024;
const PIVOT_LIMIT: u64 = 343;
/// Default bound on the number of histogram cells `q²`.
pub const DEFAULT_CELL_LIMIT: u64 = 1 << 32;

pub fn field_for(q: u64) -> Result<FiniteField> {
    let (p, r) = prime_power(q).ok_or_else(|| Error::Domain(format!("{q} is not a prime power")))?;
    FiniteField::new(p, r)
}

fn to_field(k: &FiniteField, v: &[i64]) -> Vec<u64> {
    v.iter().map(|&x| k.from_int(x)).collect()
}

/// `#{x ∈ F_q^m : Σ F_i x_i³ = 0}` by convolving value histograms.
pub fn affine_hypersurface_convolution(k: &FiniteField, f: &[i64]) -> BigInt {
    let q = k.q as usize;
    let mut dist = vec![BigInt::zero(); q];
    dist[0] = BigInt::one();
    for fi in to_field(k, f) {
        let mut single = vec![0u64; q];
        for x in 0..k.q {
            single[k.mul(fi, k.pow(x, 3)) as usize] += 1;
        }
        let mut next = vec![BigInt::zero(); q];
        for (s, d) in dist.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (t, &n) in single.iter().enumerate() {
                if n != 0 {
                    next[k.add(s as u64, t as u64) as usize] += d * n;
                }
            }
        }
        dist = next;
    }
    dist.swap_remove(0)
}

/// Additive-character machinery for one field and one auxiliary prime.
struct CharCtx<'a> {
    k: &'a FiniteField,
    rp: RootPrime,
    /// `ω^j`, `j ∈ Z/p`.
    wp: Vec<u64>,
    /// Coordinates of `x³` for every `x`.
    cube_coords: Vec<Vec<u64>>,
    /// Trace matrix.
    t: Vec<Vec<u64>>,
    /// `code(T · coords(b))` for every `b`.
    tb: Vec<u32>,
}

impl<'a> CharCtx<'a> {
    fn new(k: &'a FiniteField, rp: RootPrime) -> Self {
        let r = k.r as usize;
        let t = k.trace_matrix();
        let tb = (0..k.q)
            .map(|b| {
                let cb = k.coeffs(b);
                let v: Vec<u64> =
                    (0..r).map(|i| (0..r).map(|j| t[i][j] * cb[j]).sum::<u64>() % k.p).collect();
                k.from_coeffs(&v) as u32
            })
            .collect();
        CharCtx {
            k,
            rp,
            wp: (0..k.p).map(|j| rp.pow(rp.omega, j)).collect(),
            cube_coords: (0..k.q).map(|x| k.coeffs(k.pow(x, 3))).collect(),
            t,
            tb,
        }
    }

    /// `x ↦ ψ(Tr(a x³))` mod P.
    fn phase(&self, a: u64) -> Vec<u64> {
        let r = self.k.r as usize;
        let ca = self.k.coeffs(a);
        let l: Vec<u64> =
            (0..r).map(|i| (0..r).map(|j| self.t[i][j] * ca[j]).sum::<u64>() % self.k.p).collect();
        self.cube_coords
            .iter()
            .map(|y| {
                let tr = y.iter().zip(&l).map(|(a, b)| a * b).sum::<u64>() % self.k.p;
                self.wp[tr as usize]
            })
            .collect()
    }

    /// `b ↦ g(a, b)` indexed through `tb`: `g(a, b) = D[tb[b]]`.
    fn dual_table(&self, a: u64) -> Vec<u64> {
        let mut d = self.phase(a);
        dft_elementary(&mut d, self.k.p, self.k.r, &self.rp, self.rp.omega);
        d
    }

    /// `g(a, 0) = Σ_x ψ(Tr(a x³))`.
    fn g0(&self, a: u64) -> u64 {
        self.phase(a).into_iter().fold(0, |s, v| self.rp.add(s, v))
    }
}

fn combine(residues: Vec<u64>, primes: &[RootPrime]) -> BigInt {
    let moduli: Vec<u64> = primes.iter().map(|r| r.p).collect();
    crt_symmetric(&residues, &moduli)
}

/// `#{F = 0}` in `F_q^m` via `N = q^{m−1} + q^{−1} Σ_κ #κ ∏_i g(s_κ F_i, 0)`.
pub fn affine_hypersurface_character(k: &FiniteField, f: &[i64]) -> BigInt {
    let m = f.len() as u32;
    let bound = BigInt::from(k.q).pow(m) * 4;
    let primes = cached_root_primes(k.p, primes_needed(&bound));
    let fk = to_field(k, f);
    let (reps, size) = k.cube_classes();
    let residues = primes
        .iter()
        .map(|&rp| {
            let ctx = CharCtx::new(k, rp);
            let mut cache: HashMap<u64, u64> = HashMap::new();
            let mut total = 0u64;
            for &s in &reps {
                let mut prod = 1u64;
                for &fi in &fk {
                    let a = k.mul(s, fi);
                    let g = *cache.entry(a).or_insert_with(|| ctx.g0(a));
                    prod = rp.mul(prod, g);
                }
                total = rp.add(total, rp.mul(prod, size % rp.p));
            }
            let main = rp.pow(k.q % rp.p, (m - 1) as u64);
            rp.add(main, rp.mul(total, rp.inv(k.q % rp.p)))
        })
        .collect();
    combine(residues, &primes)
}

/// `#{F = 0, c·x = 0}` in `F_q^m` via
/// `N = q^{m−2} + q^{−2} Σ_κ #κ Σ_t ∏_j g(s_κ F_j, t c_j)`.
pub fn affine_section_character(k: &FiniteField, f: &[i64], c: &[i64]) -> BigInt {
    let m = f.len() as u32;
    let bound = BigInt::from(k.q).pow(m) * 4;
    let primes = cached_root_primes(k.p, primes_needed(&bound));
    let fk = to_field(k, f);
    let ck = to_field(k, c);
    let (reps, size) = k.cube_classes();
    let residues = primes
        .iter()
        .map(|&rp| {
            let ctx = CharCtx::new(k, rp);
            let mut total = 0u64;
            for &s in &reps {
                // one transform per distinct coefficient s·F_j
                let mut tables: HashMap<u64, Vec<u64>> = HashMap::new();
                let keys: Vec<u64> = fk.iter().map(|&fj| k.mul(s, fj)).collect();
                let mut uniq = keys.clone();
                uniq.sort_unstable();
                uniq.dedup();
                let made = crate::par::map(&uniq, |&a| ctx.dual_table(a));
                for (a, d) in uniq.into_iter().zip(made) {
                    tables.insert(a, d);
                }
                let cols: Vec<&Vec<u64>> = keys.iter().map(|a| &tables[a]).collect();
                let partial: Vec<u64> = crate::par::map_range(k.q as usize, |t| {
                    let mut prod = 1u64;
                    for (col, &cj) in cols.iter().zip(&ck) {
                        let b = k.mul(t as u64, cj);
                        prod = rp.mul(prod, col[ctx.tb[b as usize] as usize]);
                        if prod == 0 {
                            break;
                        }
                    }
                    prod
                });
                let inner = partial.into_iter().fold(0, |a, v| rp.add(a, v));
                total = rp.add(total, rp.mul(inner, size % rp.p));
            }
            let qp = k.q % rp.p;
            let main = rp.pow(qp, (m - 2) as u64);
            rp.add(main, rp.mul(total, rp.inv(rp.mul(qp, qp))))
        })
        .collect();
    combine(residues, &primes)
}

/// Section count by elimination of `x_{i0}` and root counting in `x_{i1}`.
pub fn affine_section_pivot(
    k: &FiniteField,
    f: &[i64],
    c: &[i64],
    i0: usize,
    i1: usize,
) -> Result<BigInt> {
    let m = f.len();
    if i0 == i1 || i0 >= m || i1 >= m {
        return domain("pivot indices must be distinct and in range");
    }
    let fk = to_field(k, f);
    let ck = to_field(k, c);
    if ck[i0] == 0 {
        return domain(format!("c_{i0} vanishes modulo {}", k.p));
    }
    let q = k.q as usize;
    if (q as u64).saturating_mul(q as u64) > DEFAULT_CELL_LIMIT {
        return Err(Error::ResourceLimit(format!("{q}² histogram cells")));
    }
    let add: Vec<u32> = (0..q * q)
        .map(|i| k.add((i / q) as u64, (i % q) as u64) as u32)
        .collect();
    let mut hist = vec![0u128; q * q];
    hist[0] = 1;
    for j in (0..m).filter(|&j| j != i0 && j != i1) {
        let pairs: Vec<(usize, usize)> = (0..k.q)
            .map(|x| (k.mul(fk[j], k.pow(x, 3)) as usize, k.mul(ck[j], x) as usize))
            .collect();
        let mut next = vec![0u128; q * q];
        for a in 0..q {
            for b in 0..q {
                let h = hist[a * q + b];
                if h == 0 {
                    continue;
                }
                for &(da, db) in &pairs {
                    let na = add[a * q + da] as usize;
                    let nb = add[b * q + db] as usize;
                    next[na * q + nb] += h;
                }
            }
        }
        hist = next;
    }
    // κ = −F_{i0}/c_{i0}³; the cubic in y = x_{i1} is
    // y³(F_{i1} + κc³) + y²(3κBc²) + y(3κB²c) + (κB³ + A), c = c_{i1}
    let kappa = k.neg(k.mul(fk[i0], k.inv(k.pow(ck[i0], 3))));
    let c1 = ck[i1];
    let three = k.from_int(3);
    let a3 = k.add(fk[i1], k.mul(kappa, k.pow(c1, 3)));
    let mut total = BigInt::zero();
    for b in 0..k.q {
        let a2 = k.mul(three, k.mul(kappa, k.mul(b, k.mul(c1, c1))));
        let a1 = k.mul(three, k.mul(kappa, k.mul(k.mul(b, b), c1)));
        let kb3 = k.mul(kappa, k.pow(b, 3));
        for a in 0..k.q {
            let h = hist[a as usize * q + b as usize];
            if h == 0 {
                continue;
            }
            let roots = k.cubic_root_count(a3, a2, a1, k.add(kb3, a));
            total += BigInt::from(h) * roots;
        }
    }
    Ok(total)
}

/// `(N_aff − 1)/(q − 1)` with exact divisibility asserted.
pub fn projectivize(affine: &BigInt, q: u64) -> Result<BigInt> {
    let (d, r) = (affine - 1u32).div_rem(&BigInt::from(q - 1));
    if !r.is_zero() {
        return Err(Error::Invariant(format!(
            "affine count {affine} is not 1 mod {}",
            q - 1
        )));
    }
    Ok(d)
}

/// Affine hypersurface count with the chosen method.
pub fn affine_hypersurface(k: &FiniteField, f: &[i64], method: CountMethod) -> Result<BigInt> {
    Ok(match method {
        CountMethod::Convolution => affine_hypersurface_convolution(k, f),
        CountMethod::Character => affine_hypersurface_character(k, f),
        CountMethod::Auto if k.q <= CONVOLUTION_LIMIT => affine_hypersurface_convolution(k, f),
        CountMethod::Auto => affine_hypersurface_character(k, f),
        CountMethod::Pivot { .. } => return domain("pivot elimination needs a linear form"),
    })
}

/// Affine section count with the chosen method. The caller guarantees that
/// `c` does not vanish modulo `p`.
pub fn affine_section(k: &FiniteField, f: &[i64], c: &[i64], method: CountMethod) -> Result<BigInt> {
    let pivot = || (0..c.len()).find(|&i| k.from_int(c[i]) != 0);
    match method {
        CountMethod::Pivot { i0, i1 } => affine_section_pivot(k, f, c, i0, i1),
        CountMethod::Character => Ok(affine_section_character(k, f, c)),
        CountMethod::Auto if k.q <= PIVOT_LIMIT && f.len() >= 2 => {
            let i0 = pivot().expect("checked by caller");
            let i1 = if i0 == 0 { 1 } else { 0 };
            affine_section_pivot(k, f, c, i0, i1)
        }
        CountMethod::Auto => Ok(affine_section_character(k, f, c)),
        CountMethod::Convolution => {
            // histogram over (F value, linear value) pairs in all variables
            let q = k.q as usize;
            let fk = to_field(k, f);
            let ck = to_field(k, c);
            let mut hist = vec![BigInt::zero(); q * q];
            hist[0] = BigInt::one();
            for j in 0..f.len() {
                let mut next = vec![BigInt::zero(); q * q];
                for (i, h) in hist.iter().enumerate() {
                    if h.is_zero() {
                        continue;
                    }
                    let (a, b) = ((i / q) as u64, (i % q) as u64);
                    for x in 0..k.q {
                        let na = k.add(a, k.mul(fk[j], k.pow(x, 3))) as usize;
                        let nb = k.add(b, k.mul(ck[j], x)) as usize;
                        next[na * q + nb] += h;
                    }
                }
                hist = next;
            }
            Ok(hist.swap_remove(0))
        }
    }
}
