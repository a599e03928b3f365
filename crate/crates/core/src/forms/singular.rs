use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{check_pair, disc_delta, CVector, DiagonalCubicForm, DiscNormalization};
use crate::error::{domain, Result};
use crate::exactnum::arith::{isqrt, squarefree_decompose};

/// Indices whose `F_i c_i` share the square class `g` (square-free), with
/// `c_i = g e_i² / F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClass {
    pub g: i64,
    /// 0-based indices.
    pub indices: Vec<usize>,
    /// Signed `e_i`, aligned with `indices`.
    pub e: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareClassDecomposition {
    pub classes: Vec<SquareClass>,
    /// Whether every class admits signs with `Σ e_i³/F_i² = 0`.
    pub vanishing: bool,
}

/// Signs `s_i = ±1` with `Σ s_i e_i³/F_i² = 0`, first in sign-pattern order
/// with `s_0 = +1`. Values are scaled to a common denominator first.
fn vanishing_signs(e: &[i64], f: &[i64]) -> Option<Vec<i64>> {
    if e.len() < 2 {
        return None;
    }
    let l = f.iter().fold(1i128, |acc, &x| acc.lcm(&((x as i128) * (x as i128))));
    let vals: Vec<i128> = e
        .iter()
        .zip(f)
        .map(|(&ei, &fi)| (ei as i128).pow(3) * (l / ((fi as i128) * (fi as i128))))
        .collect();
    let k = vals.len();
    (0u32..1 << (k - 1)).find_map(|mask| {
        let signs: Vec<i64> = (0..k)
            .map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -1 } else { 1 })
            .collect();
        let s: i128 = vals.iter().zip(&signs).map(|(v, &s)| v * s as i128).sum();
        (s == 0).then_some(signs)
    })
}

/// Partition the indices by the square class of `F_i c_i`.
pub fn square_class_decompose(
    f: &DiagonalCubicForm,
    c: &CVector,
) -> Result<SquareClassDecomposition> {
    check_pair(f, c)?;
    if c.0.contains(&0) {
        return domain("square-class decomposition needs every c_i nonzero");
    }
    let mut by_g: BTreeMap<i64, Vec<(usize, i64)>> = BTreeMap::new();
    for (i, (&ci, &fi)) in c.0.iter().zip(f.coeffs()).enumerate() {
        let prod = ci.checked_mul(fi).expect("F_i c_i overflow");
        let (g, e) = squarefree_decompose(prod);
        debug_assert_eq!(g as i128 * (e as i128).pow(2), ci as i128 * fi as i128);
        by_g.entry(g).or_default().push((i, e as i64));
    }
    let mut vanishing = true;
    let classes = by_g
        .into_iter()
        .map(|(g, members)| {
            let indices: Vec<usize> = members.iter().map(|m| m.0).collect();
            let mut e: Vec<i64> = members.iter().map(|m| m.1).collect();
            let fs: Vec<i64> = indices.iter().map(|&i| f.coeffs()[i]).collect();
            match vanishing_signs(&e, &fs) {
                Some(s) => e.iter_mut().zip(s).for_each(|(x, s)| *x *= s),
                None => vanishing = false,
            }
            SquareClass { g, indices, e }
        })
        .collect();
    Ok(SquareClassDecomposition { classes, vanishing })
}

/// `Δ(F, c) = 0`, decided from the square classes of the nonzero support.
pub fn is_singular_c(f: &DiagonalCubicForm, c: &CVector) -> Result<bool> {
    check_pair(f, c)?;
    let support: Vec<usize> = (0..c.len()).filter(|&i| c.0[i] != 0).collect();
    if support.is_empty() {
        return Ok(true);
    }
    let fs = DiagonalCubicForm {
        coeffs: support.iter().map(|&i| f.coeffs()[i]).collect(),
    };
    let cs = CVector(support.iter().map(|&i| c.0[i]).collect());
    Ok(square_class_decompose(&fs, &cs)?.vanishing)
}

/// All `c` with `0 < ‖c‖_∞ ≤ z` and `Δ(F, c) = 0`, sorted.
///
/// For each square-free `g`, collect the `(support, e)` patterns whose class
/// sum can vanish; a singular `c` is a union of such patterns with distinct
/// `g` on disjoint supports.
pub fn enumerate_singular_c(f: &DiagonalCubicForm, z: u64) -> Vec<CVector> {
    let m = f.m();
    let fmax = f.coeffs().iter().map(|x| x.unsigned_abs()).max().unwrap();
    let gmax = (fmax * z) as i64;
    // cand[i] = list of (e, c_i) for this g
    let gs: Vec<i64> = (-gmax..=gmax)
        .filter(|&g| g != 0 && squarefree_decompose(g).1 == 1)
        .collect();
    let sols: Vec<(i64, Vec<(u32, Vec<i64>)>)> = crate::par::map(&gs, |&g| {
        let cand: Vec<Vec<(i64, i64)>> = (0..m)
            .map(|i| {
                let fi = f.coeffs()[i];
                let emax = isqrt(fi.unsigned_abs() * z / g.unsigned_abs()) as i64;
                (1..=emax)
                    .filter_map(|e| {
                        let num = g * e * e;
                        (num % fi == 0 && (num / fi).unsigned_abs() <= z).then(|| (e, num / fi))
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![];
        for mask in 1u32..(1 << m) {
            if mask.count_ones() < 2 {
                continue;
            }
            let idx: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            if idx.iter().any(|&i| cand[i].is_empty()) {
                continue;
            }
            let fs: Vec<i64> = idx.iter().map(|&i| f.coeffs()[i]).collect();
            // odometer over the candidate lists
            let mut pos = vec![0usize; idx.len()];
            loop {
                let e: Vec<i64> = idx.iter().zip(&pos).map(|(&i, &p)| cand[i][p].0).collect();
                if vanishing_signs(&e, &fs).is_some() {
                    out.push((mask, idx.iter().zip(&pos).map(|(&i, &p)| cand[i][p].1).collect()));
                }
                let mut k = 0;
                while k < idx.len() {
                    pos[k] += 1;
                    if pos[k] < cand[idx[k]].len() {
                        break;
                    }
                    pos[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
        (g, out)
    });
    let sols: Vec<(i64, Vec<(u32, Vec<i64>)>)> =
        sols.into_iter().filter(|(_, s)| !s.is_empty()).collect();
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    fn dfs(
        k: usize,
        used: u32,
        cur: &mut Vec<i64>,
        sols: &[(i64, Vec<(u32, Vec<i64>)>)],
        found: &mut BTreeSet<Vec<i64>>,
    ) {
        if k == sols.len() {
            if used != 0 {
                found.insert(cur.clone());
            }
            return;
        }
        dfs(k + 1, used, cur, sols, found);
        for (mask, vals) in &sols[k].1 {
            if used & mask != 0 {
                continue;
            }
            let idx: Vec<usize> = (0..cur.len()).filter(|&i| mask >> i & 1 == 1).collect();
            for (&i, &v) in idx.iter().zip(vals) {
                cur[i] = v;
            }
            dfs(k + 1, used | mask, cur, sols, found);
            for &i in &idx {
                cur[i] = 0;
            }
        }
    }
    let mut cur = vec![0i64; m];
    dfs(0, 0, &mut cur, &sols, &mut found);
    found.into_iter().map(CVector).collect()
}

/// Reference enumeration: test `Δ(F, c) = 0` on every nonzero `c` in the box.
pub fn enumerate_singular_c_brute(f: &DiagonalCubicForm, z: u64) -> Vec<CVector> {
    let m = f.m();
    let z = z as i64;
    let side = (2 * z + 1) as usize;
    let total = side.pow(m as u32);
    let hits: Vec<Option<CVector>> = crate::par::map_range(total, |mut k| {
        let mut c = vec![0i64; m];
        for slot in c.iter_mut().rev() {
            *slot = (k % side) as i64 - z;
            k /= side;
        }
        let c = CVector(c);
        if c.is_zero() {
            return None;
        }
        let d = disc_delta(f, &c, DiscNormalization::Definition).ok()?;
        (d == num_bigint::BigInt::from(0)).then_some(c)
    });
    hits.into_iter().flatten().collect()
}
