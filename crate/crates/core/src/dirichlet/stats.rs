//! Empirical second-moment and large-sieve statistics over boxes of `c`.
//! Every sum runs over `c` with `Δ(F,c) ≠ 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{partial_sum, Choice, CoefficientSequence, SequenceBuilder};
use crate::error::{domain, Result};
use crate::exactnum::Surd;
use crate::forms::{disc_delta, CVector, DiagonalCubicForm, DiscNormalization};

/// `c_j ∈ [−Z, Z] ∖ {0}` for `j` in `indices`, `c_j = 0` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletedBox {
    pub m: usize,
    /// Zero-based coordinates.
    pub indices: Vec<usize>,
    pub z: i64,
}

impl DeletedBox {
    pub fn new(m: usize, mut indices: Vec<usize>, z: i64) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if z < 1 || indices.iter().any(|&i| i >= m) {
            return domain("deleted box needs Z ≥ 1 and indices below m");
        }
        Ok(DeletedBox { m, indices, z })
    }

    pub fn vectors(&self) -> Vec<CVector> {
        let vals: Vec<i64> = (-self.z..=self.z).filter(|&x| x != 0).collect();
        let mut out = vec![vec![0i64; self.m]];
        for &i in &self.indices {
            out = out
                .into_iter()
                .flat_map(|c| {
                    vals.iter().map(move |&x| {
                        let mut c = c.clone();
                        c[i] = x;
                        c
                    })
                })
                .collect();
        }
        out.into_iter().map(CVector::new).collect()
    }
}

/// A set of `c` to sum over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CBox {
    /// `[−Z, Z]^m`.
    Full { m: usize, z: i64 },
    Deleted(DeletedBox),
}

impl CBox {
    pub fn vectors(&self) -> Vec<CVector> {
        match self {
            CBox::Full { m, z } => full_box(*m, *z),
            CBox::Deleted(b) => b.vectors(),
        }
    }

    /// Number of free coordinates and their common size.
    fn shape(&self) -> (usize, i64) {
        match self {
            CBox::Full { m, z } => (*m, *z),
            CBox::Deleted(b) => (b.indices.len(), b.z),
        }
    }
}

fn full_box(m: usize, z: i64) -> Vec<CVector> {
    let side = (2 * z + 1) as usize;
    (0..side.pow(m as u32))
        .map(|mut k| {
            let mut c = vec![0i64; m];
            for x in c.iter_mut() {
                *x = (k % side) as i64 - z;
                k /= side;
            }
            CVector::new(c)
        })
        .collect()
}

/// Vectors of a box with nonvanishing discriminant, in box order.
pub fn nonsingular(f: &DiagonalCubicForm, cs: Vec<CVector>) -> Result<Vec<CVector>> {
    let keep = crate::par::map(&cs, |c| disc_delta(f, c, DiscNormalization::Definition).map(|d| !d.is_zero()));
    let mut out = vec![];
    for (c, k) in cs.into_iter().zip(keep) {
        if k? {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StatReport {
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub value: f64,
    /// Exact value when the statistic is exact.
    pub exact: Option<Surd>,
    pub baseline: f64,
    pub ratio: f64,
    pub extras: BTreeMap<String, f64>,
}

impl StatReport {
    pub(crate) fn new(kind: &str, params: Vec<(&str, String)>, exact: Option<Surd>, value: f64, baseline: f64) -> Self {
        StatReport {
            kind: kind.to_string(),
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            value,
            exact,
            baseline,
            ratio: if baseline > 0.0 { value / baseline } else { f64::NAN },
            extras: BTreeMap::new(),
        }
    }
}

fn sum_surds(v: Vec<Surd>) -> Surd {
    let mut acc = Surd::zero();
    for s in &v {
        acc.add_assign(s);
    }
    acc
}

/// `Σ′_{c ∈ [−Z,Z]^m} |Σ_{n ∈ I} b_c(n)|²` with baseline `max(Z^m, Y)·N`.
#[allow(clippy::too_many_arguments)]
pub fn second_moment_stat(
    f: &DiagonalCubicForm,
    z: i64,
    y: f64,
    n: f64,
    interval: (u64, u64),
    choice: Choice,
    beta: f64,
) -> Result<StatReport> {
    let (lo, hi) = interval;
    let m = f.m();
    let params = vec![
        ("Z", z.to_string()),
        ("Y", y.to_string()),
        ("N", n.to_string()),
        ("I", format!("[{lo},{hi}]")),
        ("choice", choice.index().to_string()),
        ("beta", beta.to_string()),
    ];
    let baseline = (z as f64).powi(m as i32).max(y) * n;
    if lo > hi {
        return Ok(StatReport::new("second-moment", params, Some(Surd::zero()), 0.0, baseline));
    }
    if (lo as f64) < n / 2.0 || (hi as f64) > 2.0 * n || n > beta * y {
        return domain("need I ⊆ [N/2, 2N] and N ≤ βY");
    }
    let cs = nonsingular(f, CBox::Full { m, z }.vectors())?;
    let seqs = build(f, &cs, hi as usize, |bld, c, len| bld.b(choice, c, len))?;
    let parts = crate::par::map(&seqs, |s| partial_sum(s, lo, hi).square());
    let exact = sum_surds(parts);
    let value = exact.to_f64();
    Ok(StatReport::new("second-moment", params, Some(exact), value, baseline))
}

fn build(
    f: &DiagonalCubicForm,
    cs: &[CVector],
    len: usize,
    make: impl Fn(&mut SequenceBuilder, &CVector, usize) -> Result<CoefficientSequence>,
) -> Result<Vec<CoefficientSequence>> {
    let mut bld = SequenceBuilder::new(f);
    bld.prefetch(cs, len)?;
    cs.iter().map(|c| make(&mut bld, c, len)).collect()
}

/// Coefficients fed to the large sieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gamma {
    /// `1_{n = rad n} · a_c(n)`.
    SqfreeA,
    /// `b_c(n)`.
    B,
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration from the normalized all-ones vector.
pub fn power_iteration(g: &[Vec<f64>], max_iter: usize, tol: f64) -> (f64, usize) {
    let q = g.len();
    if q == 0 {
        return (0.0, 0);
    }
    let mut v = vec![1.0 / (q as f64).sqrt(); q];
    let mut lambda = 0.0;
    for it in 1..=max_iter {
        let w: Vec<f64> = g.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return (0.0, it);
        }
        let next = w.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - lambda).abs() <= tol * next.abs() {
            return (next, it);
        }
        lambda = next;
    }
    (lambda, max_iter)
}

/// Operator norm² of `(γ_c(n))_{c, n ≤ Q}`, baseline `max(Z^m, Y)` with
/// `Y = Q/(2β)`.
pub fn large_sieve_norm(
    f: &DiagonalCubicForm,
    z: i64,
    q: usize,
    gamma: Gamma,
    choice: Choice,
    beta: f64,
) -> Result<StatReport> {
    let m = f.m();
    let cs = nonsingular(f, CBox::Full { m, z }.vectors())?;
    let seqs = build(f, &cs, q, |bld, c, len| match gamma {
        Gamma::B => bld.b(choice, c, len),
        Gamma::SqfreeA => Ok(bld.a(choice, c, len)?.restrict(crate::exactnum::arith::is_squarefree)),
    })?;
    let rows: Vec<Vec<f64>> = seqs.iter().map(|s| (1..=q as u64).map(|n| s.value_f64(n)).collect()).collect();
    let gram = gram_matrix(&rows, q);
    let (norm2, iters) = power_iteration(&gram, 500, 1e-10);
    let frob: f64 = rows.iter().flatten().map(|x| x * x).sum();
    let max_col = (0..q).map(|j| gram[j][j]).fold(0.0, f64::max);
    if norm2 < max_col * (1.0 - 1e-9) || norm2 > frob * (1.0 + 1e-9) {
        return Err(crate::Error::NumericalFailure(format!(
            "power iteration {norm2} outside [{max_col}, {frob}]"
        )));
    }
    let y = q as f64 / (2.0 * beta);
    let baseline = (z as f64).powi(m as i32).max(y);
    let mut r = StatReport::new(
        "large-sieve",
        vec![
            ("Z", z.to_string()),
            ("Q", q.to_string()),
            ("gamma", format!("{gamma:?}")),
            ("choice", choice.index().to_string()),
            ("beta", beta.to_string()),
        ],
        None,
        norm2,
        baseline,
    );
    r.extras.insert("frobenius2".into(), frob);
    r.extras.insert("max_column2".into(), max_col);
    r.extras.insert("iterations".into(), iters as f64);
    r.extras.insert("rows".into(), rows.len() as f64);
    Ok(r)
}

/// `MᵀM` for the row-major matrix `rows` with `q` columns.
pub fn gram_matrix(rows: &[Vec<f64>], q: usize) -> Vec<Vec<f64>> {
    crate::par::map_range(q, |i| {
        (0..q)
            .map(|j| {
                let mut acc = 0.0;
                for r in rows {
                    acc += r[i] * r[j];
                }
                acc
            })
            .collect()
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    /// `Σ′_c (Σ_{n₀ ∈ range} |a′_c(n₀)|)²`.
    AbsAPrime,
    /// `Σ′_c (Σ_{n₁ ∈ range} |b_c(n₁)|)²`.
    AbsB,
    /// `Σ′_c Σ_{n ∈ range, n cube-full} n^{−1} |S̃_c(n)|²`.
    BadSum,
}

fn abs_sum(s: &CoefficientSequence, lo: u64, hi: u64) -> Surd {
    let mut acc = Surd::zero();
    for n in lo.max(1)..hi.min(s.len() as u64 + 1) {
        let r = s.numerator(n);
        if !r.is_zero() {
            acc.add_assign(&Surd::half_power(BigRational::from_integer(r.abs()), n, -(s.weight as i32)));
        }
    }
    acc
}

/// Dyadic moment over `n ∈ [lo, hi)`.
pub fn dyadic_moment_stat(
    kind: MomentKind,
    f: &DiagonalCubicForm,
    cbox: &CBox,
    range: (u64, u64),
    choice: Choice,
) -> Result<StatReport> {
    let (lo, hi) = range;
    let m = f.m();
    let (r, zc) = cbox.shape();
    let prod_c = (zc as f64).powi(r as i32);
    let e = 1.0 + (m - r) as f64 / 3.0;
    let baseline = match kind {
        MomentKind::AbsAPrime => (lo as f64).powf(e) * prod_c,
        MomentKind::AbsB => (lo as f64).powf(e.max(2.0)) * prod_c,
        MomentKind::BadSum => (zc as f64).powi(m as i32) + (hi as f64).powf(m as f64 / 3.0),
    };
    let params = vec![
        ("box", serde_json::to_string(cbox).unwrap_or_default()),
        ("range", format!("[{lo},{hi})")),
        ("choice", choice.index().to_string()),
    ];
    let name = match kind {
        MomentKind::AbsAPrime => "abs-a-prime",
        MomentKind::AbsB => "abs-b",
        MomentKind::BadSum => "bad-sum",
    };
    if lo >= hi {
        return Ok(StatReport::new(name, params, Some(Surd::zero()), 0.0, baseline));
    }
    let cs = nonsingular(f, cbox.vectors())?;
    let len = (hi - 1) as usize;
    let parts: Vec<Surd> = match kind {
        MomentKind::AbsAPrime => {
            let seqs = build(f, &cs, len, |bld, c, len| Ok(bld.triple(choice, c, len)?.2))?;
            crate::par::map(&seqs, |s| abs_sum(s, lo, hi).square())
        }
        MomentKind::AbsB => {
            let seqs = build(f, &cs, len, |bld, c, len| bld.b(choice, c, len))?;
            crate::par::map(&seqs, |s| abs_sum(s, lo, hi).square())
        }
        MomentKind::BadSum => {
            let seqs = build(f, &cs, len, |bld, c, len| bld.s_tilde(c, len))?;
            crate::par::map(&seqs, |s| {
                let mut acc = BigRational::zero();
                for n in (lo.max(1)..hi).filter(|&n| super::is_cubefull(n)) {
                    let v = s.numerator(n);
                    if !v.is_zero() {
                        // n^{−1} · r² · n^{−w}
                        let den = BigInt::from(n).pow(s.weight + 1);
                        acc += BigRational::new(v * v, den);
                    }
                }
                Surd::rational(acc)
            })
        }
    };
    let exact = sum_surds(parts);
    let value = exact.to_f64();
    Ok(StatReport::new(name, params, Some(exact), value, baseline))
}
