//! Univariate integer polynomials: arithmetic, square-free decomposition,
//! numerical roots and factorization over `Z`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomial, lowest degree first, no trailing zeros (the zero
/// polynomial is the empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self` in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let ds = self.degree()?;
        if ds < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); ds - dd + 1];
        let lead = d.lead();
        for i in (0..=ds - dd).rev() {
            let (qi, r) = rem[i + dd].div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &qi * c;
            }
            q[i] = qi;
        }
        rem.iter().all(|c| c.is_zero()).then(|| Self::new(q))
    }

    /// Pseudo-remainder of `self` by `d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("nonzero divisor");
        let mut r = self.clone();
        let lead = d.lead();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let c = r.lead();
            let shift: Vec<BigInt> = std::iter::repeat_n(BigInt::zero(), dr - dd)
                .chain(d.coeffs.iter().map(|x| x * &c))
                .collect();
            r = r.scale(&lead).sub(&Self::new(shift));
        }
        r
    }

    /// Gcd in `Z[x]`, primitive with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = o.primitive();
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        if a.degree() == Some(0) {
            return Self::one();
        }
        a
    }

    pub fn eval_i(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap())
    }

    /// Square-free decomposition of the primitive part:
    /// `f = ∏ f_i^i` with `f_i` square-free and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPolynomial, u32)> {
        let a = self.primitive();
        if a.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        // Musser's iteration; all divisors are primitive so quotients stay in Z[x]
        let mut b = a.gcd(&a.derivative());
        let mut c = a.div_exact(&b).expect("gcd divides").primitive();
        let mut out = vec![];
        let mut i = 1u32;
        while c.degree().unwrap_or(0) > 0 {
            let y = b.gcd(&c);
            let fi = c.div_exact(&y).expect("gcd divides").primitive();
            if fi.degree().unwrap_or(0) > 0 {
                out.push((fi, i));
            }
            b = b.div_exact(&y).expect("gcd divides");
            c = y;
            i += 1;
        }
        out
    }

    /// Complex roots (with multiplicity), via companion-matrix eigenvalues
    /// polished by Newton's method on the polynomial itself.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            Some(0) | None => return vec![],
            Some(n) => n,
        };
        let lead = self.lead().to_f64().unwrap();
        let mut comp = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            comp[(i, n - 1)] = -self.coeffs[i].to_f64().unwrap() / lead;
        }
        let eig: Vec<Complex64> = match nalgebra::linalg::Schur::try_new(comp, f64::EPSILON, 10_000) {
            Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
            None => self.aberth_roots(),
        };
        let d = self.derivative();
        eig.iter()
            .map(|&z0| {
                let mut z = z0;
                for _ in 0..50 {
                    let fz = self.eval_c(z);
                    let dz = d.eval_c(z);
                    if dz.norm() == 0.0 {
                        break;
                    }
                    let step = fz / dz;
                    z -= step;
                    if step.norm() <= 1e-15 * z.norm().max(1.0) {
                        break;
                    }
                }
                z
            })
            .collect()
    }

    /// Simultaneous Aberth–Ehrlich iteration, used when the Schur iteration
    /// does not converge.
    fn aberth_roots(&self) -> Vec<Complex64> {
        let n = self.degree().unwrap_or(0);
        let d = self.derivative();
        let lead = self.lead().to_f64().unwrap().abs();
        let radius = 1.0
            + self.coeffs[..n]
                .iter()
                .map(|c| c.to_f64().unwrap().abs() / lead)
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let ratio = self.eval_c(z[i]) / d.eval_c(z[i]);
                let repel: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
                let w = ratio / (1.0 - ratio * repel);
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }

    /// Bound on the coefficients of any factor (Mignotte).
    fn factor_coeff_bound(&self) -> f64 {
        let n = self.degree().unwrap_or(0) as i32;
        let norm: f64 = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap().powi(2))
            .sum::<f64>()
            .sqrt();
        2f64.powi(n) * norm
    }

    /// Factorization into irreducibles over `Z` (content and sign dropped).
    ///
    /// Each square-free part is split by searching subsets of its complex
    /// roots (closed under conjugation) whose scaled product rounds to an
    /// integer polynomial dividing it exactly.
    pub fn factor(&self) -> Result<Vec<(IntPolynomial, u32)>> {
        let mut out = vec![];
        for (part, mult) in self.squarefree_decomposition() {
            for f in split_squarefree(&part)? {
                out.push((f, mult));
            }
        }
        out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs).cmp(&(b.0.degree(), &b.0.coeffs)));
        Ok(out)
    }
}

fn split_squarefree(f: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let f = f.primitive();
    let deg = f.degree().unwrap_or(0);
    if deg <= 1 {
        return Ok(vec![f]);
    }
    if f.factor_coeff_bound() > 2f64.powi(40) {
        return Err(Error::ResourceLimit(
            "polynomial coefficients too large for floating root search".into(),
        ));
    }
    let roots = f.complex_roots();
    // group into real roots and conjugate pairs (upper half-plane representative)
    let mut groups: Vec<Vec<Complex64>> = vec![];
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = roots[i];
        if z.im.abs() < 1e-7 * z.norm().max(1.0) {
            groups.push(vec![Complex64::new(z.re, 0.0)]);
            continue;
        }
        let j = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (roots[a] - z.conj())
                    .norm()
                    .partial_cmp(&(roots[b] - z.conj()).norm())
                    .unwrap()
            })
            .ok_or_else(|| Error::NumericalFailure("unpaired complex root".into()))?;
        used[j] = true;
        groups.push(vec![z, z.conj()]);
    }
    let lead = f.lead();
    let lead_divs: Vec<BigInt> = {
        let l = lead.abs().to_u64().unwrap_or(0);
        if l == 0 {
            vec![BigInt::one()]
        } else {
            super::arith::divisors(l).into_iter().map(BigInt::from).collect()
        }
    };
    let g = groups.len();
    // try subsets in order of size; the first exact divisor found is irreducible
    let mut masks: Vec<u64> = (1..(1u64 << g) - 1).collect();
    masks.sort_by_key(|m| {
        let d: usize = (0..g).filter(|i| m >> i & 1 == 1).map(|i| groups[i].len()).sum();
        (d, *m)
    });
    for mask in masks {
        let d: usize = (0..g).filter(|i| mask >> i & 1 == 1).map(|i| groups[i].len()).sum();
        if d * 2 > deg {
            break;
        }
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for i in (0..g).filter(|i| mask >> i & 1 == 1) {
            for &z in &groups[i] {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (k, &c) in prod.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * z;
                }
                prod = next;
            }
        }
        for l in &lead_divs {
            let lf = l.to_f64().unwrap();
            let rounded: Option<Vec<BigInt>> = prod
                .iter()
                .map(|c| {
                    let v = c.re * lf;
                    let r = v.round();
                    ((v - r).abs() < 1e-3).then(|| BigInt::from(r as i64))
                })
                .collect();
            let Some(rc) = rounded else { continue };
            let cand = IntPolynomial::new(rc);
            if cand.degree() != Some(d) {
                continue;
            }
            if let Some(q) = f.div_exact(&cand) {
                let mut rest = split_squarefree(&q)?;
                rest.push(cand.primitive());
                return Ok(rest);
            }
        }
    }
    Ok(vec![f])
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.fmt_var(fm, "t")
    }
}

impl IntPolynomial {
    fn fmt_var(&self, fm: &mut std::fmt::Formatter<'_>, var: &str) -> std::fmt::Result {
        if self.is_zero() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(fm, "-")?;
                }
            } else {
                write!(fm, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(fm, "{a}")?,
                (1, true) => write!(fm, "{var}")?,
                (1, false) => write!(fm, "{a}*{var}")?,
                (_, true) => write!(fm, "{var}^{i}")?,
                (_, false) => write!(fm, "{a}*{var}^{i}")?,
            }
        }
        Ok(())
    }
}
