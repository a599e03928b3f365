//! Exact real numbers of the form `Σ_s r_s √s` (rational `r_s`, square-free
//! `s ≥ 1`). Normalized sums like `n^{-(m+1)/2} S` live here.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::arith::factor_u64;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

/// Split `n = s·e²` with `s` square-free.
fn split_square(n: u64) -> (u64, u64) {
    let (mut s, mut e) = (1u64, 1u64);
    for (p, k) in factor_u64(n) {
        e *= p.pow(k / 2);
        if k % 2 == 1 {
            s *= p;
        }
    }
    (s, e)
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn rational(r: BigRational) -> Self {
        let mut t = BTreeMap::new();
        if !r.is_zero() {
            t.insert(1, r);
        }
        Surd { terms: t }
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        Self::rational(BigRational::from_integer(v.into()))
    }

    /// `r · √n`.
    pub fn sqrt_times(r: BigRational, n: u64) -> Self {
        assert!(n > 0);
        let (s, e) = split_square(n);
        let mut t = BTreeMap::new();
        let v = r * BigRational::from_integer(BigInt::from(e));
        if !v.is_zero() {
            t.insert(s, v);
        }
        Surd { terms: t }
    }

    /// `r · n^{k/2}` for any integer `k`.
    pub fn half_power(r: BigRational, n: u64, k: i32) -> Self {
        assert!(n > 0);
        let nb = BigRational::from_integer(BigInt::from(n));
        let whole = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let scale = if whole >= 0 {
            num_traits::pow(nb, whole as usize)
        } else {
            num_traits::pow(nb, (-whole) as usize).recip()
        };
        if odd {
            Self::sqrt_times(r * scale, n)
        } else {
            Self::rational(r * scale)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    /// The rational value if there is no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    fn insert_add(&mut self, s: u64, r: BigRational) {
        let e = self.terms.entry(s).or_insert_with(BigRational::zero);
        *e += r;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, o: &Surd) -> Surd {
        let mut out = self.clone();
        for (&s, r) in &o.terms {
            out.insert_add(s, r.clone());
        }
        out
    }

    pub fn add_assign(&mut self, o: &Surd) {
        for (&s, r) in &o.terms {
            self.insert_add(s, r.clone());
        }
    }

    pub fn neg(&self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(&s, r)| (s, -r)).collect(),
        }
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Surd {
        if k.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(&s, r)| (s, r * k)).collect(),
        }
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (&s, a) in &self.terms {
            for (&t, b) in &o.terms {
                let g = super::arith::gcd(s, t);
                // √s·√t = g·√(st/g²)
                let v = a * b * BigRational::from_integer(BigInt::from(g));
                out.insert_add(s / g * (t / g), v);
            }
        }
        out
    }

    pub fn square(&self) -> Surd {
        self.mul(self)
    }

    pub fn to_f64(&self) -> f64 {
        // fixed order of summation, Neumaier compensation
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (&s, r) in &self.terms {
            let v = r.to_f64().unwrap_or(f64::NAN) * (s as f64).sqrt();
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    /// Sign of the value, decided exactly for rational values and by a
    /// floating evaluation otherwise.
    pub fn signum(&self) -> i32 {
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else if r.is_negative() { -1 } else { 0 };
        }
        let v = self.to_f64();
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Surd {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&s, r)| {
                if s == 1 {
                    format!("{r}")
                } else if r.is_one() {
                    format!("sqrt({s})")
                } else {
                    format!("{r}*sqrt({s})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct SurdRepr {
    /// (square-free radicand, rational coefficient as "p/q")
    terms: Vec<(u64, String)>,
    approx: f64,
}

impl Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        SurdRepr {
            terms: self.terms.iter().map(|(&s, r)| (s, r.to_string())).collect(),
            approx: self.to_f64(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = SurdRepr::deserialize(de)?;
        let mut out = Surd::zero();
        for (s, txt) in r.terms {
            let v: BigRational = txt.parse().map_err(serde::de::Error::custom)?;
            out.insert_add(s, v);
        }
        Ok(out)
    }
}

/// `value · base^{-half_exp/2}`: the exact form of a normalized sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfPower {
    pub value: BigInt,
    pub base: u64,
    pub half_exp: u32,
}

impl HalfPower {
    pub fn new(value: BigInt, base: u64, half_exp: u32) -> Self {
        HalfPower { value, base, half_exp }
    }

    pub fn to_surd(&self) -> Surd {
        Surd::half_power(
            BigRational::from_integer(self.value.clone()),
            self.base,
            -(self.half_exp as i32),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN) / (self.base as f64).powf(self.half_exp as f64 / 2.0)
    }
}
