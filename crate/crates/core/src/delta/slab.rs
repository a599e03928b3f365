//! The singular integral as a limit of slab volumes
//! `(2ε)^{−1} ∫_{|F(x)| ≤ ε} w(x) dx`, independent of the Fourier route.

use serde::{Deserialize, Serialize};

use super::{real_density_fourier, Neumaier, SmoothWeight};
use crate::error::{domain, Error, Result};
use crate::forms::DiagonalCubicForm;

const TABLE: usize = 1 << 15;

/// `E(x) = ∫_{−∞}^x η(t) dt` tabulated, interpolated by cubic Hermite with
/// the exact derivative `η`.
struct Antiderivative<'a> {
    w: &'a SmoothWeight,
    i: usize,
    lo: f64,
    h: f64,
    vals: Vec<f64>,
}

impl<'a> Antiderivative<'a> {
    fn new(w: &'a SmoothWeight, i: usize) -> Self {
        let b = w.radii[i].1;
        let lo = if w.positive { 0.0 } else { -b };
        let h = (b - lo) / TABLE as f64;
        let mut vals = Vec::with_capacity(TABLE + 1);
        let mut acc = Neumaier::default();
        vals.push(0.0);
        for k in 0..TABLE {
            let x0 = lo + k as f64 * h;
            // Simpson on each cell
            acc.add(h / 6.0 * (w.eta(i, x0) + 4.0 * w.eta(i, x0 + h / 2.0) + w.eta(i, x0 + h)));
            vals.push(acc.total());
        }
        Antiderivative { w, i, lo, h, vals }
    }

    fn eval(&self, x: f64) -> f64 {
        let t = (x - self.lo) / self.h;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= TABLE as f64 {
            return self.vals[TABLE];
        }
        let k = (t.floor() as usize).min(TABLE - 1);
        let s = t - k as f64;
        let x0 = self.lo + k as f64 * self.h;
        let (y0, y1) = (self.vals[k], self.vals[k + 1]);
        let (d0, d1) = (self.w.eta(self.i, x0) * self.h, self.w.eta(self.i, x0 + self.h) * self.h);
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1
    }
}

/// Trapezoid nodes and weights for `η_i`; every derivative of `η_i` vanishes
/// at the ends, so the rule converges faster than any power.
fn nodes_for(w: &SmoothWeight, i: usize, nodes: usize) -> Vec<(f64, f64)> {
    let (a, b) = w.radii[i];
    let h = (b - a) / nodes as f64;
    let mut out = Vec::new();
    for k in 1..nodes {
        let x = a + k as f64 * h;
        let e = w.eta(i, x) * h;
        out.push((x, e));
        if !w.positive {
            out.push((-x, e));
        }
    }
    out
}

/// `(2ε)^{−1} ∫_{|F(x)| ≤ ε} w(x) dx`: trapezoid in the first `m − 1`
/// coordinates and the exact slab length in the last.
pub fn real_density_slab(f: &DiagonalCubicForm, w: &SmoothWeight, eps: f64, nodes: usize) -> Result<f64> {
    w.check(f)?;
    let m = f.m();
    if m < 2 || !(eps > 0.0) || nodes < 2 {
        return domain("slab integral needs m ≥ 2, ε > 0 and at least 2 nodes");
    }
    let fc = f.coeffs();
    if fc.contains(&0) {
        return domain("every coefficient of F must be nonzero");
    }
    let grids: Vec<Vec<(f64, f64)>> = (0..m - 1).map(|i| nodes_for(w, i, nodes)).collect();
    let total: f64 = grids.iter().map(|g| g.len() as f64).product();
    if total > 5e7 {
        return Err(Error::ResourceLimit(format!("slab quadrature needs {total} points")));
    }
    let anti = Antiderivative::new(w, m - 1);
    let fl = fc[m - 1] as f64;
    let mut acc = Neumaier::default();
    // odometer over the first m − 1 coordinates
    let mut idx = vec![0usize; m - 1];
    loop {
        let mut s = 0.0;
        let mut wt = 1.0;
        for (i, &k) in idx.iter().enumerate() {
            let (x, e) = grids[i][k];
            s += fc[i] as f64 * x * x * x;
            wt *= e;
        }
        if wt != 0.0 {
            let (p, q) = (((-s - eps) / fl).cbrt(), ((-s + eps) / fl).cbrt());
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            acc.add(wt * (anti.eval(hi) - anti.eval(lo)));
        }
        let mut d = 0;
        loop {
            if d == m - 1 {
                return Ok(acc.total() / (2.0 * eps));
            }
            idx[d] += 1;
            if idx[d] < grids[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Both routes to `σ_∞`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub fourier: f64,
    /// Slab values at `ε = 10^{−2}` and `10^{−3}`.
    pub slab: [f64; 2],
    /// `(100·S(10^{−3}) − S(10^{−2}))/99`.
    pub slab_extrapolated: f64,
    pub rel_diff: f64,
    pub agree: bool,
}

fn default_nodes(m: usize) -> usize {
    match m {
        0..=3 => 256,
        4 => 64,
        5 => 24,
        _ => 12,
    }
}

/// `σ_∞` by the Fourier route, cross-checked against the slab route.
pub fn real_density(f: &DiagonalCubicForm, w: &SmoothWeight) -> Result<DensityReport> {
    let fourier = real_density_fourier(f, w)?;
    let nodes = default_nodes(f.m());
    let s1 = real_density_slab(f, w, 1e-2, nodes)?;
    let s2 = real_density_slab(f, w, 1e-3, nodes)?;
    let rich = (100.0 * s2 - s1) / 99.0;
    let floor = 1e-9 * w.integral() / w.f_max(f);
    let rel_diff = if fourier.abs() < floor && rich.abs() < floor {
        0.0
    } else {
        (rich - fourier).abs() / fourier.abs().max(floor)
    };
    Ok(DensityReport {
        fourier,
        slab: [s1, s2],
        slab_extrapolated: rich,
        rel_diff,
        agree: rel_diff <= 5e-3,
    })
}
