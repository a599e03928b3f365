//! The delta-method identity for diagonal cubics: the weight `h(x, y)`,
//! oscillatory integrals `Ĩ_c(n)`, the singular integral and series, and a
//! numerical check of
//! `N_{F,w}(X) ≈ Y^{−2} Σ_n Σ_c n^{−m} S_c(n) I_c(n)` at small `X`.

mod fourier;
mod identity;
mod series;
mod slab;

pub use fourier::{integral_ic, integral_ic_complex, real_density_fourier};
pub use identity::{
    brute_force_count, brute_force_count_mitm, delta_identity_report, dual_term, dual_term_boxed,
    primal_rhs, IdentityReport,
};
pub use series::{singular_series, SingularSeriesReport};
pub use slab::{real_density, real_density_slab, DensityReport};

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::forms::DiagonalCubicForm;

/// `exp(−1/(1−s²))` on `(−1, 1)`, zero outside.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// `∫_{−1}^{1} bump`.
pub(crate) fn bump_mass() -> f64 {
    static M: OnceLock<f64> = OnceLock::new();
    *M.get_or_init(|| {
        // trapezoid is spectrally accurate here: every derivative vanishes at ±1
        let n = 40_000;
        let h = 2.0 / n as f64;
        let mut s = Neumaier::default();
        for i in 1..n {
            s.add(bump(-1.0 + i as f64 * h));
        }
        s.total() * h
    })
}

/// `ω(u) = K·exp(−1/(1−(4u−3)²))` on `(1/2, 1)` with `∫ω = 1`.
pub fn omega(u: f64) -> f64 {
    if u <= 0.5 || u >= 1.0 {
        return 0.0;
    }
    // u ↦ 4u − 3 maps (1/2, 1) onto (−1, 1) with Jacobian 4
    4.0 / bump_mass() * bump(4.0 * u - 3.0)
}

/// `h(x, y) = Σ_{j≥1} (xj)^{−1} [ω(xj) − ω(|y|/(xj))]`.
pub fn h_weight(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite() && y.is_finite()) {
        return domain(format!("h needs x > 0, got x = {x}"));
    }
    Ok(h_unchecked(x, y))
}

pub(crate) fn h_unchecked(x: f64, y: f64) -> f64 {
    let y = y.abs();
    let mut acc = Neumaier::default();
    // ω(xj) ≠ 0 only for 1/(2x) < j < 1/x
    let (lo, hi) = (((0.5 / x).floor() as u64).max(1), (1.0 / x).ceil() as u64);
    for j in lo..=hi {
        let t = x * j as f64;
        acc.add(omega(t) / t);
    }
    // ω(y/(xj)) ≠ 0 only for y/x < j < 2y/x
    if y > 0.0 {
        let (lo, hi) = (((y / x).floor() as u64).max(1), (2.0 * y / x).ceil() as u64);
        for j in lo..=hi {
            let t = x * j as f64;
            acc.add(-omega(y / t) / t);
        }
    }
    acc.total()
}

/// `c_Y = Y / Σ_{d≥1} ω(d/Y)`, the constant making the delta identity exact.
pub fn c_y(y: f64) -> f64 {
    let mut s = Neumaier::default();
    let lo = (y / 2.0).floor() as u64;
    for d in lo.max(1)..=y.ceil() as u64 {
        s.add(omega(d as f64 / y));
    }
    y / s.total()
}

/// Product weight `w(x) = Π η_i(x_i)`, each `η_i` a bump in `|x_i|` on
/// `(a_i, b_i)`. With `positive` set the weight is restricted to `x_i > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothWeight {
    pub radii: Vec<(f64, f64)>,
    #[serde(default)]
    pub positive: bool,
}

impl SmoothWeight {
    pub fn new(radii: Vec<(f64, f64)>) -> Result<Self> {
        if radii.is_empty() {
            return domain("weight needs at least one coordinate");
        }
        for &(a, b) in &radii {
            if !(a > 0.0 && b > a && b.is_finite()) {
                return domain(format!("need 0 < a < b, got ({a}, {b})"));
            }
        }
        Ok(SmoothWeight { radii, positive: false })
    }

    pub fn uniform(m: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b); m])
    }

    /// Bumps on `1/2 < |x_i| < 1`.
    pub fn standard(m: usize) -> Self {
        Self::uniform(m, 0.5, 1.0).expect("valid radii")
    }

    pub fn positive_only(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn m(&self) -> usize {
        self.radii.len()
    }

    pub fn eta(&self, i: usize, x: f64) -> f64 {
        if self.positive && x <= 0.0 {
            return 0.0;
        }
        let (a, b) = self.radii[i];
        let t = x.abs();
        if t <= a || t >= b {
            0.0
        } else {
            bump((2.0 * t - a - b) / (b - a))
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(i, &t)| self.eta(i, t)).product()
    }

    /// `∫ η_i`.
    pub fn eta_mass(&self, i: usize) -> f64 {
        let (a, b) = self.radii[i];
        let one_side = (b - a) / 2.0 * bump_mass();
        if self.positive {
            one_side
        } else {
            2.0 * one_side
        }
    }

    pub fn integral(&self) -> f64 {
        (0..self.m()).map(|i| self.eta_mass(i)).product()
    }

    /// The interval swept by `F(x)` for `x ∈ Supp w`.
    pub fn value_range(&self, f: &DiagonalCubicForm) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0, 0.0);
        for (&fi, &(a, b)) in f.coeffs().iter().zip(&self.radii) {
            let fi = fi as f64;
            let (p, q) = (fi * a * a * a, fi * b * b * b);
            let (l, h) = if self.positive {
                (p.min(q), p.max(q))
            } else {
                (-q.abs(), q.abs())
            };
            lo += l;
            hi += h;
        }
        (lo, hi)
    }

    pub fn f_max(&self, f: &DiagonalCubicForm) -> f64 {
        let (lo, hi) = self.value_range(f);
        lo.abs().max(hi.abs())
    }

    pub(crate) fn check(&self, f: &DiagonalCubicForm) -> Result<()> {
        if self.m() != f.m() {
            return domain(format!("weight has {} coordinates, form has {}", self.m(), f.m()));
        }
        Ok(())
    }
}

/// Scales and numerical knobs. `Y = X^{3/2}` and `Z = X^{1/2+ε₀}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaParams {
    pub x: f64,
    pub y: f64,
    pub eps0: f64,
    pub z: f64,
    /// Keep `n ≤ n_mult·Y`; `None` uses the exact support of `h`.
    pub n_mult: Option<f64>,
    /// Multiplier on the `c`-box radius.
    pub c_mult: f64,
    /// Resolved Fourier cycles per unit of a bump's natural variable.
    pub cycles: f64,
    /// Relative tolerance for grid refinement.
    pub tol: f64,
    /// Largest FFT length before giving up.
    pub max_grid: usize,
}

impl DeltaParams {
    pub fn new(x: f64) -> Result<Self> {
        if !(x >= 1.0 && x.is_finite()) {
            return domain(format!("X must be at least 1, got {x}"));
        }
        let eps0 = 0.1;
        Ok(DeltaParams {
            x,
            y: x.powf(1.5),
            eps0,
            z: x.powf(0.5 + eps0),
            n_mult: None,
            c_mult: 1.0,
            cycles: 16.0,
            tol: 1e-7,
            max_grid: 1 << 21,
        })
    }

    pub fn with_eps0(mut self, eps0: f64) -> Self {
        self.eps0 = eps0;
        self.z = self.x.powf(0.5 + eps0);
        self
    }

    /// Largest `n` kept in the dual sum. Beyond `Y·max(1, 2F_max)` the
    /// weight `h(n/Y, ·)` vanishes on the whole range of `F`.
    pub fn n_cutoff(&self, f: &DiagonalCubicForm, w: &SmoothWeight) -> u64 {
        let support = self.y * 1f64.max(2.0 * w.f_max(f));
        let lim = match self.n_mult {
            Some(b) => (b * self.y).min(support),
            None => support,
        };
        // h(r, ·) = 0 identically once r ≥ max(1, 2F_max)
        let mut n = lim.floor() as u64;
        if n as f64 >= support {
            n = n.saturating_sub(1);
        }
        n
    }
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
