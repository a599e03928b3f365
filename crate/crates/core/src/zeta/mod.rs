//! Point counts of hyperplane sections `V_c` over extension fields and the
//! Frobenius polynomials assembled from them.
//!
//! For `m = 6` the section is a smooth cubic threefold whose middle
//! cohomology has Frobenius eigenvalues `p·β_j` with `|β_j| = √p`; for `m = 4`
//! it is a plane cubic curve with eigenvalues `β_j` directly. In both cases
//! [`SectionZetaData::charpoly`] is `∏(1 − β_j t)`, of degree `dim` and with
//! `coeff(t^{dim/2 + i}) = p^i coeff(t^{dim/2 − i})`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cache::DiskCache;
use crate::error::{domain, Error, Result};
use crate::exactnum::{HalfPower, IntPolynomial};
use crate::expsums::counts::{affine_section, field_for, projectivize, CountMethod};
use crate::forms::{disc_delta, CVector, DiagonalCubicForm, DiscNormalization};

/// Largest field size accepted by [`count_section_ext`] by default.
pub const DEFAULT_MAX_FIELD: u64 = 1 << 22;

const COUNT_CACHE_KIND: &str = "section-count";
const COUNT_CACHE_VERSION: u32 = 1;

/// `(2^{m−1} + 2(−1)^{m−3})/3`, the number of Frobenius eigenvalues on the
/// middle cohomology of a smooth section.
pub fn middle_dimension(m: usize) -> u64 {
    let sign: i64 = if (m - 3) % 2 == 0 { 1 } else { -1 };
    ((1i64 << (m - 1)) + 2 * sign) as u64 / 3
}

#[derive(Clone, Debug)]
pub struct ZetaOptions<'a> {
    pub cache: Option<&'a DiskCache>,
    pub max_field: u64,
}

impl Default for ZetaOptions<'_> {
    fn default() -> Self {
        ZetaOptions { cache: None, max_field: DEFAULT_MAX_FIELD }
    }
}

fn ambient_bad(f: &DiagonalCubicForm, p: u64) -> bool {
    p == 3 || f.coeffs().iter().any(|&x| x.rem_euclid(p as i64) == 0)
}

/// Projective count `#V_c(F_{p^r})`.
pub fn count_section_ext(f: &DiagonalCubicForm, c: &CVector, p: u64, r: u32) -> Result<BigInt> {
    count_section_ext_with(f, c, p, r, &ZetaOptions::default())
}

pub fn count_section_ext_with(
    f: &DiagonalCubicForm,
    c: &CVector,
    p: u64,
    r: u32,
    opts: &ZetaOptions,
) -> Result<BigInt> {
    crate::forms::check_pair(f, c)?;
    if !crate::exactnum::arith::is_prime_u64(p) {
        return domain(format!("{p} is not prime"));
    }
    if c.0.iter().all(|&x| x.rem_euclid(p as i64) == 0) {
        return Err(Error::BadPrime(p, "c vanishes modulo p".into()));
    }
    if ambient_bad(f, p) {
        return Err(Error::BadPrime(p, "p divides 3·F_1⋯F_m".into()));
    }
    let q = (p as u128).pow(r);
    if r == 0 || q > opts.max_field as u128 {
        return Err(Error::ResourceLimit(format!("{p}^{r} exceeds the field bound {}", opts.max_field)));
    }
    let key = format!("F={:?};c={:?};p={p};r={r}", f.coeffs(), c.0);
    if let Some(bytes) = opts.cache.and_then(|d| d.get(COUNT_CACHE_KIND, &key, COUNT_CACHE_VERSION)) {
        if let Ok(s) = std::str::from_utf8(&bytes) {
            if let Ok(v) = s.parse::<BigInt>() {
                return Ok(v);
            }
        }
    }
    let k = field_for(q as u64)?;
    let aff = affine_section(&k, f.coeffs(), &c.0, CountMethod::Auto)?;
    let n = projectivize(&aff, q as u64)?;
    if let Some(d) = opts.cache {
        d.put(COUNT_CACHE_KIND, &key, COUNT_CACHE_VERSION, n.to_string().as_bytes())?;
    }
    Ok(n)
}

/// Zeta data of one section at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionZetaData {
    pub f: Vec<i64>,
    pub c: Vec<i64>,
    pub p: u64,
    /// `#V_c(F_{p^r})` for `r = 1..=counts.len()`.
    pub counts: Vec<BigInt>,
    /// `∏(1 − β_j t)`; truncated to degree `counts.len()` when incomplete.
    pub charpoly: IntPolynomial,
    pub complete: bool,
}

impl SectionZetaData {
    pub fn m(&self) -> usize {
        self.f.len()
    }

    pub fn dim(&self) -> u64 {
        middle_dimension(self.m())
    }

    fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            domain("the characteristic polynomial is incomplete")
        }
    }
}

/// Tate twist of the middle cohomology: `α = p^{twist}·β`.
fn twist(m: usize) -> u32 {
    ((m - 3) as u32).saturating_sub(1) / 2
}

/// `Σ_j β_j^r` from the projective count over `F_{p^r}`.
fn power_sum(m: usize, p: u64, r: u32, count: &BigInt) -> Result<BigInt> {
    let q = BigInt::from(p).pow(r);
    let fixed: BigInt = (q.pow((m - 2) as u32) - 1u32) / (&q - 1u32);
    let e = count - fixed;
    // (−1)^{m−3} E_c = Σ α^r, α = p^{twist} β
    let alpha_sum = if (m - 3) % 2 == 0 { e } else { -e };
    let d = BigInt::from(p).pow(twist(m) * r);
    let (s, rem) = alpha_sum.div_rem(&d);
    if !rem.is_zero() {
        return Err(Error::DataInconsistent(format!(
            "trace over F_{p}^{r} is not divisible by {d}"
        )));
    }
    Ok(s)
}

/// Coefficients `c_0..c_n` of `exp(−Σ s_r t^r / r)` by Newton's identities.
fn newton(sums: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut c = vec![BigInt::one()];
    for k in 1..=sums.len() {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc += &sums[i - 1] * &c[k - i];
        }
        let (q, r) = (-acc).div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::DataInconsistent(format!("Newton step {k} is not integral")));
        }
        c.push(q);
    }
    Ok(c)
}

/// Power sums `Σ β^r`, `r = 1..=n`, of the reciprocal roots of `poly`
/// (constant term 1).
fn power_sums(poly: &[BigInt], n: usize) -> Vec<BigInt> {
    let coeff = |i: usize| poly.get(i).cloned().unwrap_or_default();
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = coeff(k) * BigInt::from(k);
        for i in 1..k {
            acc += coeff(i) * &s[k - i - 1];
        }
        s.push(-acc);
    }
    s
}

fn check_good(f: &DiagonalCubicForm, c: &CVector, p: u64) -> Result<()> {
    if ambient_bad(f, p) {
        return Err(Error::BadPrime(p, "p divides 3·F_1⋯F_m".into()));
    }
    let d = disc_delta(f, c, DiscNormalization::Definition)?;
    if d.is_zero() {
        return Err(Error::SingularSection);
    }
    if (d % BigInt::from(p)).is_zero() {
        return Err(Error::BadPrime(p, "p divides Δ(F,c)".into()));
    }
    Ok(())
}

/// Frobenius polynomial of `V_c` at `p` from counts over `F_{p^r}`,
/// `r = 1..=depth`. Counts beyond `dim/2` are checked against the completed
/// polynomial.
pub fn frobenius_charpoly(f: &DiagonalCubicForm, c: &CVector, p: u64, depth: u32) -> Result<SectionZetaData> {
    frobenius_charpoly_with(f, c, p, depth, &ZetaOptions::default())
}

pub fn frobenius_charpoly_with(
    f: &DiagonalCubicForm,
    c: &CVector,
    p: u64,
    depth: u32,
    opts: &ZetaOptions,
) -> Result<SectionZetaData> {
    let m = f.m();
    if m != 4 && m != 6 {
        return domain("Frobenius polynomials are assembled for m = 4 and m = 6 only");
    }
    if depth == 0 {
        return domain("depth must be positive");
    }
    check_good(f, c, p)?;
    let dim = middle_dimension(m) as usize;
    let half = dim / 2;
    let counts: Vec<BigInt> = crate::par::map_range(depth as usize, |i| {
        count_section_ext_with(f, c, p, i as u32 + 1, opts)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let sums: Vec<BigInt> = counts
        .iter()
        .enumerate()
        .map(|(i, n)| power_sum(m, p, i as u32 + 1, n))
        .collect::<Result<_>>()?;
    let known = sums.len().min(half);
    let low = newton(&sums[..known])?;
    let complete = known == half;
    let charpoly = if complete {
        let pb = BigInt::from(p);
        let mut cf = low.clone();
        for i in 1..=half {
            cf.push(pb.pow(i as u32) * &low[half - i]);
        }
        let poly = IntPolynomial::new(cf);
        // extra counts overdetermine the polynomial
        let predicted = power_sums(poly.coeffs(), sums.len());
        if let Some(r) = (half..sums.len()).find(|&r| predicted[r] != sums[r]) {
            return Err(Error::DataInconsistent(format!(
                "count over F_{p}^{} contradicts the functional equation",
                r + 1
            )));
        }
        poly
    } else {
        IntPolynomial::new(low)
    };
    Ok(SectionZetaData {
        f: f.coeffs().to_vec(),
        c: c.0.clone(),
        p,
        counts,
        charpoly,
        complete,
    })
}

/// `#V_c(F_{p^r})` predicted from a complete polynomial.
pub fn predicted_count(data: &SectionZetaData, r: u32) -> Result<BigInt> {
    data.require_complete()?;
    let m = data.m();
    let s = power_sums(data.charpoly.coeffs(), r as usize).pop().unwrap_or_default();
    let q = BigInt::from(data.p).pow(r);
    let alpha_sum = s * BigInt::from(data.p).pow(twist(m) * r);
    let e = if (m - 3) % 2 == 0 { alpha_sum } else { -alpha_sum };
    let fixed: BigInt = (q.pow((m - 2) as u32) - 1u32) / (&q - 1u32);
    Ok(fixed + e)
}

/// Factorization of a complete polynomial over `Z`.
pub fn charpoly_factor(data: &SectionZetaData) -> Result<Vec<(IntPolynomial, u32)>> {
    data.require_complete()?;
    data.charpoly.factor()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactorCoeffs {
    pub p: u64,
    /// `λ̃_c(p^l) = values[l].value · p^{−l/2}`.
    pub values: Vec<HalfPower>,
}

/// Coefficients of `1/P(p^{−1/2} t) = Σ λ̃_c(p^l) t^l` for `l ≤ len`.
pub fn local_factor_coeffs(data: &SectionZetaData, len: usize) -> Result<LocalFactorCoeffs> {
    data.require_complete()?;
    let inv = series_inverse(data.charpoly.coeffs(), len);
    Ok(LocalFactorCoeffs {
        p: data.p,
        values: inv
            .into_iter()
            .enumerate()
            .map(|(l, h)| HalfPower::new(h, data.p, l as u32))
            .collect(),
    })
}

/// Coefficients of `P(p^{−1/2} t)` itself (the inverse local factor).
pub fn inverse_factor_coeffs(data: &SectionZetaData) -> Result<Vec<HalfPower>> {
    data.require_complete()?;
    Ok(data
        .charpoly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(l, c)| HalfPower::new(c.clone(), data.p, l as u32))
        .collect())
}

fn series_inverse(a: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut h = vec![BigInt::one()];
    for l in 1..=len {
        let mut acc = BigInt::zero();
        for i in 1..=l.min(a.len() - 1) {
            acc += &a[i] * &h[l - i];
        }
        h.push(-acc);
    }
    h
}

/// `coeff(t^{d−i}) − p^{d/2−i}·coeff(t^i)` for `i < d/2`.
pub fn functional_equation_residual(poly: &IntPolynomial, p: u64) -> Vec<BigInt> {
    let d = poly.degree().unwrap_or(0);
    let pb = BigInt::from(p);
    (0..d / 2)
        .map(|i| poly.coeff(d - i) - pb.pow((d / 2 - i) as u32) * poly.coeff(i))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeilReport {
    /// `|β_j|`, sorted.
    pub moduli: Vec<f64>,
    pub max_modulus_error: f64,
    pub fe_residual: Vec<BigInt>,
    pub fe_holds: bool,
}

pub fn weil_report(data: &SectionZetaData) -> Result<WeilReport> {
    data.require_complete()?;
    Ok(weil_report_poly(&data.charpoly, data.p))
}

/// Reciprocal-root moduli and functional-equation residual of any
/// polynomial with constant term 1.
pub fn weil_report_poly(poly: &IntPolynomial, p: u64) -> WeilReport {
    let sq = (p as f64).sqrt();
    // roots of each squarefree part separately: repeated factors are common
    let mut moduli: Vec<f64> = vec![];
    for (g, e) in poly.squarefree_decomposition() {
        for z in g.complex_roots() {
            moduli.extend(std::iter::repeat(1.0 / z.norm()).take(e as usize));
        }
    }
    moduli.sort_by(f64::total_cmp);
    let max_modulus_error = moduli.iter().map(|b| (b - sq).abs()).fold(0.0, f64::max);
    let fe_residual = functional_equation_residual(poly, p);
    let fe_holds = fe_residual.iter().all(Zero::is_zero);
    WeilReport { moduli, max_modulus_error, fe_residual, fe_holds }
}

/// `Ẽ_c(p) = E_c(p)/p^{(m−3)/2}` read off the polynomial:
/// `(−1)^{m−3} Ẽ_c(p) = λ̃_c(p) = −c_1 p^{−1/2}`.
pub fn normalized_trace(data: &SectionZetaData) -> HalfPower {
    let c1 = data.charpoly.coeff(1);
    let v = if (data.m() - 3) % 2 == 0 { -c1 } else { c1 };
    HalfPower::new(v, data.p, 1)
}
