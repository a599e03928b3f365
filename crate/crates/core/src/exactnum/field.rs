//! Finite fields `F_{p^r}` with elements encoded as integers `0..q`: the
//! base-`p` digits of the code are the coefficients of the polynomial
//! representative, constant term first.

use super::arith::{factor_u64, is_prime_u64, mul_mod, pow_mod};
use crate::error::{domain, Error, Result};

/// Fields up to this size get log/exp tables.
const TABLE_LIMIT: u64 = 1 << 24;
/// Above this size `cubic_root_count` switches to the gcd method.
const DIRECT_ROOT_LIMIT: u64 = 4096;

// ---- polynomials over F_p (coefficient vectors, lowest first) ----

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], inv_lead, p);
        if c != 0 {
            for j in 0..=dm {
                let t = mul_mod(c, m[j], p);
                r[dr - dm + j] = (r[dr - dm + j] + p - t) % p;
            }
        }
        r.pop();
        if r.len() <= dm {
            break;
        }
        trim(&mut r);
    }
    trim(&mut r);
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    fp_rem(&out, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test for a monic `f` of degree `r` over `F_p`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone(); // x^{p^i} mod f
    for _ in 1..=r / 2 {
        // raise to the p-th power
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = fp_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The finite field `F_{p^r}`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: u64,
    pub r: u32,
    pub q: u64,
    /// Monic modulus, lowest coefficient first, length `r + 1`.
    pub modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u64,
}

impl FiniteField {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime_u64(p) || r == 0 {
            return domain(format!("F_{{{p}^{r}}} is not a field size"));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q < (1 << 40))
            .ok_or_else(|| Error::ResourceLimit(format!("field {p}^{r} too large")))?;
        // first monic irreducible in order of the code of its lower coefficients
        let modulus = (0..q)
            .map(|code| {
                let mut f = digits(code, p, r as usize);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree");
        let mut k = FiniteField {
            p,
            r,
            q,
            modulus,
            exp: vec![],
            log: vec![],
            generator: 0,
        };
        k.generator = k.find_generator();
        if q <= TABLE_LIMIT {
            let n = (q - 1) as usize;
            let mut exp = vec![0u32; 2 * n];
            let mut log = vec![0u32; q as usize];
            let mut x = 1u64;
            for i in 0..n {
                exp[i] = x as u32;
                exp[i + n] = x as u32;
                log[x as usize] = i as u32;
                x = k.mul_slow(x, k.generator);
            }
            if x != 1 {
                return Err(Error::Invariant("generator order".into()));
            }
            k.exp = exp;
            k.log = log;
        }
        Ok(k)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    fn find_generator(&self) -> u64 {
        let n = self.q - 1;
        let ls: Vec<u64> = factor_u64(n).into_iter().map(|(l, _)| l).collect();
        (1..self.q)
            .find(|&g| ls.iter().all(|&l| self.pow_slow(g, n / l) != 1))
            .expect("multiplicative group is cyclic")
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn coeffs(&self, a: u64) -> Vec<u64> {
        digits(a, self.p, self.r as usize)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0u64, |acc, &d| acc * self.p + d % self.p)
    }

    /// Image of an integer under `Z → F_p ⊂ F_q`.
    pub fn from_int(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.r {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.r == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.r {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// Scalar multiple by `k ∈ F_p`.
    pub fn scale(&self, k: u64, a: u64) -> u64 {
        let c: Vec<u64> = self.coeffs(a).iter().map(|&x| mul_mod(x, k, self.p)).collect();
        self.from_coeffs(&c)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let r = fp_mulmod(&self.coeffs(a), &self.coeffs(b), &self.modulus, self.p);
        self.from_coeffs(&r)
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            return self.mul_slow(a, b);
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize] as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            return self.pow_slow(a, e);
        }
        let n = self.q - 1;
        let l = (self.log[a as usize] as u128 * (e % n) as u128 % n as u128) as usize;
        self.exp[l] as u64
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.q - 2)
    }

    /// Discrete logarithm to the base [`generator`](Self::generator).
    pub fn log(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if !self.log.is_empty() {
            return Some(self.log[a as usize] as u64);
        }
        let mut x = 1u64;
        for i in 0..self.q - 1 {
            if x == a {
                return Some(i);
            }
            x = self.mul_slow(x, self.generator);
        }
        None
    }

    /// `g^k` for the fixed generator.
    pub fn exp(&self, k: u64) -> u64 {
        self.pow(self.generator, k)
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, a: u64) -> u64 {
        let mut acc = 0u64;
        let mut x = a;
        for _ in 0..self.r {
            acc = self.add(acc, x);
            x = self.pow(x, self.p);
        }
        debug_assert!(acc < self.p);
        acc
    }

    /// The matrix `T[k][l] = Tr(α^{k+l})` for the basis `α^i`, so that
    /// `Tr(a·b) = Σ a_k T[k][l] b_l` in coordinates.
    pub fn trace_matrix(&self) -> Vec<Vec<u64>> {
        let r = self.r as usize;
        let alpha = if r == 1 { 0 } else { self.p };
        let tr: Vec<u64> = (0..2 * r - 1).map(|i| self.trace(self.pow(alpha, i as u64))).collect();
        // for r = 1 the basis is {1}
        if r == 1 {
            return vec![vec![1]];
        }
        (0..r).map(|k| (0..r).map(|l| tr[k + l]).collect()).collect()
    }

    /// Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.p)
    }

    /// Number of distinct roots in this field of `a3 x³ + a2 x² + a1 x + a0`,
    /// or `q` for the zero polynomial.
    pub fn cubic_root_count(&self, a3: u64, a2: u64, a1: u64, a0: u64) -> u64 {
        let mut poly = vec![a0, a1, a2, a3];
        while poly.len() > 1 && *poly.last().unwrap() == 0 {
            poly.pop();
        }
        if poly.len() == 1 {
            return if poly[0] == 0 { self.q } else { 0 };
        }
        if poly.len() == 2 {
            return 1;
        }
        if self.q <= DIRECT_ROOT_LIMIT {
            self.roots_direct(&poly)
        } else {
            self.roots_gcd(&poly)
        }
    }

    fn eval(&self, poly: &[u64], x: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    fn roots_direct(&self, poly: &[u64]) -> u64 {
        (0..self.q).filter(|&x| self.eval(poly, x) == 0).count() as u64
    }

    /// `deg gcd(x^q − x, f)`.
    fn roots_gcd(&self, f: &[u64]) -> u64 {
        let f = self.poly_monic(f);
        let mut acc = vec![1u64];
        let mut base = vec![0u64, 1u64];
        let mut e = self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod(&acc, &base, &f);
            }
            base = self.poly_mulmod(&base, &base, &f);
            e >>= 1;
        }
        acc.resize(acc.len().max(2), 0);
        acc[1] = self.sub(acc[1], 1);
        self.poly_trim(&mut acc);
        let g = self.poly_gcd(&f, &acc);
        (g.len() - 1) as u64
    }

    fn poly_trim(&self, v: &mut Vec<u64>) {
        trim(v)
    }

    fn poly_monic(&self, f: &[u64]) -> Vec<u64> {
        let inv = self.inv(*f.last().unwrap());
        f.iter().map(|&c| self.mul(c, inv)).collect()
    }

    fn poly_rem(&self, a: &[u64], m: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = self.inv(m[dm]);
        while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
            let dr = r.len() - 1;
            let c = self.mul(r[dr], inv_lead);
            if c != 0 {
                for j in 0..=dm {
                    let t = self.mul(c, m[j]);
                    r[dr - dm + j] = self.sub(r[dr - dm + j], t);
                }
            }
            r.pop();
            if r.len() <= dm {
                break;
            }
            trim(&mut r);
        }
        trim(&mut r);
        r
    }

    fn poly_mulmod(&self, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        self.poly_rem(&out, m)
    }

    fn poly_gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !(b.len() == 1 && b[0] == 0) {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// Cube classes of `F_q^×`: returns `(representatives, class size)`.
    /// There are `gcd(3, q−1)` classes, each of size `(q−1)/gcd(3, q−1)`.
    pub fn cube_classes(&self) -> (Vec<u64>, u64) {
        let k = if (self.q - 1) % 3 == 0 { 3 } else { 1 };
        ((0..k).map(|i| self.exp(i)).collect(), (self.q - 1) / k)
    }
}

fn digits(mut code: u64, p: u64, r: usize) -> Vec<u64> {
    let mut v = Vec::with_capacity(r);
    for _ in 0..r {
        v.push(code % p);
        code /= p;
    }
    v
}
