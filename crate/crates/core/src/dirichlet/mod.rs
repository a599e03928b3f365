//! Dirichlet coefficient sequences attached to a section `V_c`: the
//! normalized sums `S̃_c`, the three choices of first-order approximation
//! `b_c`, its inverse `a_c`, and the error coefficients `a′_c = S̃_c ∗ a_c`.
//!
//! A sequence of weight `w` stores integer numerators `r(n)` and represents
//! the values `r(n)·n^{−w/2}`. Convolution preserves the weight, so the
//! algebra is exact integer arithmetic.

pub mod stats;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactnum::arith::{factor_u64, gcd, is_squarefree, mobius, primes_up_to};
use crate::exactnum::{HalfPower, Surd};
use crate::expsums::ExpSumTable;
use crate::forms::{disc_delta, CVector, DiagonalCubicForm, DiscNormalization};
use crate::zeta::{frobenius_charpoly_with, middle_dimension, ZetaOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    STilde,
    B1,
    B2,
    B3,
    A,
    APrime,
    Custom,
}

/// Which first-order approximation `b_c` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Choice {
    /// `b = S̃_c`.
    Full,
    /// `b = S̃_c · 1_{n ⊥ Δ(F,c)}`.
    Coprime,
    /// Euler product of inverse local factors at good primes.
    LocalFactors,
}

impl Choice {
    pub fn from_index(i: u8) -> Result<Choice> {
        match i {
            1 => Ok(Choice::Full),
            2 => Ok(Choice::Coprime),
            3 => Ok(Choice::LocalFactors),
            _ => domain(format!("choice must be 1, 2 or 3, not {i}")),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Choice::Full => 1,
            Choice::Coprime => 2,
            Choice::LocalFactors => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    pub kind: SequenceKind,
    pub weight: u32,
    /// `r(1), …, r(N)`.
    numerators: Vec<BigInt>,
}

impl CoefficientSequence {
    pub fn new(kind: SequenceKind, weight: u32, numerators: Vec<BigInt>) -> Self {
        CoefficientSequence { kind, weight, numerators }
    }

    /// A weight-0 sequence from a function of `n`.
    pub fn from_fn(len: usize, f: impl Fn(u64) -> i64) -> Self {
        let v = (1..=len as u64).map(|n| BigInt::from(f(n))).collect();
        CoefficientSequence::new(SequenceKind::Custom, 0, v)
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerator(&self, n: u64) -> &BigInt {
        &self.numerators[n as usize - 1]
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.numerators
    }

    pub fn value(&self, n: u64) -> HalfPower {
        HalfPower::new(self.numerator(n).clone(), n, self.weight)
    }

    pub fn value_surd(&self, n: u64) -> Surd {
        self.value(n).to_surd()
    }

    pub fn value_f64(&self, n: u64) -> f64 {
        self.value(n).to_f64()
    }

    pub fn truncate(mut self, len: usize) -> Self {
        self.numerators.truncate(len);
        self
    }

    /// The same values at a larger weight of equal parity.
    pub fn with_weight(&self, w: u32) -> Result<Self> {
        if w < self.weight || (w - self.weight) % 2 != 0 {
            return domain(format!("cannot rescale weight {} to {w}", self.weight));
        }
        let k = (w - self.weight) / 2;
        let numerators = self
            .numerators
            .iter()
            .enumerate()
            .map(|(i, r)| r * BigInt::from(i as u64 + 1).pow(k))
            .collect();
        Ok(CoefficientSequence { kind: self.kind, weight: w, numerators })
    }

    /// Pointwise product with an indicator.
    pub fn restrict(&self, keep: impl Fn(u64) -> bool) -> Self {
        let mut out = self.clone();
        for (i, r) in out.numerators.iter_mut().enumerate() {
            if !keep(i as u64 + 1) {
                *r = BigInt::zero();
            }
        }
        out
    }

    fn relabel(mut self, kind: SequenceKind) -> Self {
        self.kind = kind;
        self
    }
}

fn common_weight(s: &CoefficientSequence, t: &CoefficientSequence) -> Result<(CoefficientSequence, CoefficientSequence)> {
    let w = s.weight.max(t.weight);
    Ok((s.with_weight(w)?, t.with_weight(w)?))
}

/// `s ∗ t` up to the shorter length.
pub fn dirichlet_convolve(s: &CoefficientSequence, t: &CoefficientSequence) -> Result<CoefficientSequence> {
    let (s, t) = common_weight(s, t)?;
    let n = s.len().min(t.len());
    let mut out = vec![BigInt::zero(); n];
    for d in 1..=n {
        let a = &s.numerators[d - 1];
        if a.is_zero() {
            continue;
        }
        for k in 1..=n / d {
            let b = &t.numerators[k - 1];
            if !b.is_zero() {
                out[d * k - 1] += a * b;
            }
        }
    }
    Ok(CoefficientSequence::new(SequenceKind::Custom, s.weight, out))
}

/// Dirichlet inverse; requires value 1 at `n = 1`.
pub fn dirichlet_inverse(s: &CoefficientSequence) -> Result<CoefficientSequence> {
    if s.is_empty() || !s.numerators[0].is_one() {
        return domain("the sequence must take the value 1 at n = 1");
    }
    let n = s.len();
    let mut out = vec![BigInt::zero(); n];
    out[0] = BigInt::one();
    for k in 2..=n {
        let mut acc = BigInt::zero();
        for d in divisors_below(k as u64) {
            let e = k as u64 / d;
            let v = &s.numerators[e as usize - 1];
            if !v.is_zero() {
                acc += v * &out[d as usize - 1];
            }
        }
        out[k - 1] = -acc;
    }
    Ok(CoefficientSequence::new(SequenceKind::Custom, s.weight, out))
}

fn divisors_below(n: u64) -> Vec<u64> {
    let mut v = crate::exactnum::arith::divisors(n);
    v.pop();
    v
}

/// Builds sequences for one form, sharing exponential-sum and zeta work
/// across `c`.
pub struct SequenceBuilder<'a> {
    table: ExpSumTable,
    zeta: ZetaOptions<'a>,
}

impl<'a> SequenceBuilder<'a> {
    pub fn new(f: &DiagonalCubicForm) -> Self {
        SequenceBuilder { table: ExpSumTable::new(f), zeta: ZetaOptions::default() }
    }

    pub fn with_zeta(mut self, zeta: ZetaOptions<'a>) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn form(&self) -> &DiagonalCubicForm {
        self.table.form()
    }

    /// Batch the exponential sums for `cs` at every `n ≤ len`.
    pub fn prefetch(&mut self, cs: &[CVector], len: usize) -> Result<()> {
        let ns: Vec<u64> = (1..=len as u64).collect();
        self.table.prefetch(cs, &ns)
    }

    pub fn s_tilde(&mut self, c: &CVector, len: usize) -> Result<CoefficientSequence> {
        crate::forms::check_pair(self.form(), c)?;
        let ns: Vec<u64> = (1..=len as u64).collect();
        self.table.prefetch(std::slice::from_ref(c), &ns)?;
        let w = self.form().m() as u32 + 1;
        let v = ns
            .iter()
            .map(|&n| self.table.peek(c, n).expect("prefetched"))
            .collect();
        Ok(CoefficientSequence::new(SequenceKind::STilde, w, v))
    }

    fn delta(&self, c: &CVector) -> Result<BigInt> {
        let d = disc_delta(self.form(), c, DiscNormalization::Definition)?;
        if d.is_zero() {
            return Err(Error::SingularSection);
        }
        Ok(d)
    }

    pub fn b(&mut self, choice: Choice, c: &CVector, len: usize) -> Result<CoefficientSequence> {
        let delta = self.delta(c)?;
        match choice {
            Choice::Full => Ok(self.s_tilde(c, len)?.relabel(SequenceKind::B1)),
            Choice::Coprime => {
                let s = self.s_tilde(c, len)?;
                Ok(s.restrict(|n| coprime_big(n, &delta)).relabel(SequenceKind::B2))
            }
            Choice::LocalFactors => self.b_local(c, &delta, len),
        }
    }

    fn b_local(&mut self, c: &CVector, delta: &BigInt, len: usize) -> Result<CoefficientSequence> {
        let f = self.form().clone();
        let m = f.m();
        if m != 4 && m != 6 {
            return domain("local-factor approximations need m = 4 or m = 6");
        }
        let half = middle_dimension(m) as u32 / 2;
        let n = len as u64;
        // Euler factor coefficients c_l at each prime, l ≤ log_p(len)
        let mut local: Vec<(u64, Vec<BigInt>)> = vec![];
        for p in primes_up_to(n) {
            let bad = p == 3 || !coprime_big(p, delta) || f.coeffs().iter().any(|&x| x % p as i64 == 0);
            if bad {
                local.push((p, vec![BigInt::one()]));
                continue;
            }
            let mut top = 0u32;
            let mut q = p;
            while q <= n {
                top += 1;
                q = q.saturating_mul(p);
            }
            let data = frobenius_charpoly_with(&f, c, p, top.min(half), &self.zeta).map_err(|e| match e {
                Error::ResourceLimit(msg) => Error::DataUnavailable(format!("zeta data at {p}: {msg}")),
                e => e,
            })?;
            local.push((p, data.charpoly.coeffs().to_vec()));
        }
        let mut v = vec![BigInt::zero(); len];
        for k in 1..=n {
            let mut r = BigInt::one();
            for (p, l) in factor_u64(k) {
                let cs = &local.iter().find(|x| x.0 == p).expect("prime ≤ len").1;
                r *= cs.get(l as usize).cloned().unwrap_or_default();
                if r.is_zero() {
                    break;
                }
            }
            v[k as usize - 1] = r;
        }
        Ok(CoefficientSequence::new(SequenceKind::B3, 1, v))
    }

    pub fn a(&mut self, choice: Choice, c: &CVector, len: usize) -> Result<CoefficientSequence> {
        Ok(dirichlet_inverse(&self.b(choice, c, len)?)?.relabel(SequenceKind::A))
    }

    /// `(b, a, a′)` with `a′ = S̃ ∗ a`.
    pub fn triple(
        &mut self,
        choice: Choice,
        c: &CVector,
        len: usize,
    ) -> Result<(CoefficientSequence, CoefficientSequence, CoefficientSequence)> {
        let b = self.b(choice, c, len)?;
        let a = dirichlet_inverse(&b)?.relabel(SequenceKind::A);
        let s = self.s_tilde(c, len)?;
        let ap = dirichlet_convolve(&s, &a)?.relabel(SequenceKind::APrime);
        Ok((b, a, ap))
    }
}

/// `b_c` for one `c`.
pub fn sequence_b(choice: Choice, f: &DiagonalCubicForm, c: &CVector, len: usize) -> Result<CoefficientSequence> {
    SequenceBuilder::new(f).b(choice, c, len)
}

pub(crate) fn coprime_big(n: u64, d: &BigInt) -> bool {
    let r = (d % BigInt::from(n)).magnitude().clone();
    let r: u64 = r.try_into().unwrap_or(0);
    gcd(n, r) == 1 || n == 1
}

/// `Σ_{n ∈ [lo, hi]} s(n)` exactly.
pub fn partial_sum(s: &CoefficientSequence, lo: u64, hi: u64) -> Surd {
    let mut acc = Surd::zero();
    for n in lo.max(1)..=hi.min(s.len() as u64) {
        if !s.numerator(n).is_zero() {
            acc.add_assign(&s.value_surd(n));
        }
    }
    acc
}

/// Outcome of [`restriction_identity_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionCheck {
    pub holds: bool,
    /// First `n` at which an identity fails, with the identity's index.
    pub first_failure: Option<(u64, u8)>,
}

/// Checks, for `n ≤ len`,
/// 1. `b(n) = Σ_{n₁e=n} 1_{e square-full} 1_{e ⊥ n₁} μ(n₁) a(n₁) b(e)`;
/// 2. `1_{d⊥n} μ(n) a(n) = 1_{d⊥n} μ(n)² b(n) = (b ∗ a ∗ g)(n)` with
///    `g = 1_{d⊥·} μ² b`.
pub fn restriction_identities(b: &CoefficientSequence, d: u64) -> Result<RestrictionCheck> {
    let a = dirichlet_inverse(b)?;
    let len = b.len() as u64;
    let mu_a = CoefficientSequence::new(
        SequenceKind::Custom,
        a.weight,
        a.numerators.iter().enumerate().map(|(i, r)| r * mobius(i as u64 + 1)).collect(),
    );
    let g = b.restrict(|n| gcd(n, d) == 1 && is_squarefree(n));
    let bag = dirichlet_convolve(b, &dirichlet_convolve(&a, &g)?)?;
    for n in 1..=len {
        let mut rhs = BigInt::zero();
        for e in crate::exactnum::arith::divisors(n) {
            let n1 = n / e;
            if is_squarefull(e) && gcd(e, n1) == 1 {
                rhs += mu_a.numerator(n1) * b.numerator(e);
            }
        }
        if &rhs != b.numerator(n) {
            return Ok(RestrictionCheck { holds: false, first_failure: Some((n, 1)) });
        }
        let (lhs, mid) = if gcd(n, d) == 1 {
            let mid = if is_squarefree(n) { b.numerator(n).clone() } else { BigInt::zero() };
            (mu_a.numerator(n).clone(), mid)
        } else {
            (BigInt::zero(), BigInt::zero())
        };
        if lhs != mid || &mid != bag.numerator(n) {
            return Ok(RestrictionCheck { holds: false, first_failure: Some((n, 2)) });
        }
    }
    Ok(RestrictionCheck { holds: true, first_failure: None })
}

pub fn restriction_identity_check(
    f: &DiagonalCubicForm,
    c: &CVector,
    d: u64,
    len: usize,
    choice: Choice,
) -> Result<RestrictionCheck> {
    let b = sequence_b(choice, f, c, len)?;
    restriction_identities(&b, d)
}

/// `n` is square-full: every prime divides it at least twice.
pub fn is_squarefull(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e >= 2)
}

/// `n` is cube-full.
pub fn is_cubefull(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e >= 3)
}
