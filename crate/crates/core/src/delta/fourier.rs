//! Integrals over the weight support done one coordinate at a time: each
//! factor `η_i(x) K_i(x) dx` is pushed forward to `u = F_i x³`, sampled on a
//! periodic `u`-grid and transformed. Products of transforms give the density
//! of `F(x)`, and Parseval pairs it with `h(r, ·)`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{h_unchecked, DeltaParams, Neumaier, SmoothWeight};
use crate::error::{domain, Error, Result};
use crate::forms::DiagonalCubicForm;

pub(crate) struct Grid {
    pub n: usize,
    pub du: f64,
}

impl Grid {
    /// A grid of period `> 2·half_width` fine enough for `bandwidth` cycles per
    /// unit `u`.
    pub fn new(half_width: f64, bandwidth: f64, max: usize) -> Result<Grid> {
        let period = 2.1 * half_width + 0.25;
        let need = (period * 2.0 * bandwidth).ceil();
        if !need.is_finite() || need > max as f64 {
            return Err(Error::ResourceLimit(format!(
                "u-grid needs {need} points, limit {max}"
            )));
        }
        let n = (need as usize).max(256).next_power_of_two();
        if n > max {
            return Err(Error::ResourceLimit(format!("u-grid needs {n} points, limit {max}")));
        }
        Ok(Grid { n, du: period / n as f64 })
    }

    pub fn u(&self, j: usize) -> f64 {
        let j = if j < self.n / 2 { j as f64 } else { j as f64 - self.n as f64 };
        j * self.du
    }
}

/// Bandwidth of `η_i` in `x`.
pub(crate) fn eta_band(w: &SmoothWeight, i: usize, cycles: f64) -> f64 {
    let (a, b) = w.radii[i];
    cycles * 2.0 / (b - a)
}

/// Bandwidth of `u ↦ h(r, u)`: the narrowest bump in it has width `r/2`.
pub(crate) fn h_band(r: f64, cycles: f64) -> f64 {
    cycles * 4.0 / r
}

/// Converts an `x`-bandwidth on coordinate `i` into a `u`-bandwidth.
pub(crate) fn to_u_band(w: &SmoothWeight, i: usize, fi: i64, x_band: f64) -> f64 {
    let a = w.radii[i].0;
    x_band / (3.0 * fi.unsigned_abs() as f64 * a * a)
}

/// Grid points carrying the pushforward of `η_i` under `x ↦ F_i x³`, with
/// `base = η_i(x)·du/(3|F_i|x²)`.
pub(crate) struct Support {
    pub idx: Vec<usize>,
    pub x: Vec<f64>,
    pub base: Vec<f64>,
}

pub(crate) fn support(grid: &Grid, w: &SmoothWeight, i: usize, fi: i64) -> Support {
    let mut s = Support { idx: vec![], x: vec![], base: vec![] };
    let f = fi as f64;
    for j in 0..grid.n {
        let x = (grid.u(j) / f).cbrt();
        let e = w.eta(i, x);
        if e > 0.0 {
            s.idx.push(j);
            s.x.push(x);
            s.base.push(e * grid.du / (3.0 * f.abs() * x * x));
        }
    }
    s
}

/// Transform of `η_i K du` on the grid, `K` given at the support points.
pub(crate) fn transform(
    sup: &Support,
    n: usize,
    mut k: impl FnMut(usize, f64) -> Complex64,
    fft: &Arc<dyn Fft<f64>>,
) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (t, (&j, &x)) in sup.idx.iter().zip(&sup.x).enumerate() {
        buf[j] = k(t, x) * sup.base[t];
    }
    fft.process(&mut buf);
    buf
}

/// Transform of `u ↦ h(r, u)` on the grid.
pub(crate) fn h_hat(grid: &Grid, r: f64, fft: &Arc<dyn Fft<f64>>) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..grid.n)
        .map(|j| Complex64::new(h_unchecked(r, grid.u(j)), 0.0))
        .collect();
    fft.process(&mut buf);
    buf
}

/// `du Σ_j h_j ρ_j` from the transforms of both.
pub(crate) fn parseval(rho_hat: &[Complex64], h_hat: &[Complex64]) -> Complex64 {
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for (p, h) in rho_hat.iter().zip(h_hat) {
        let z = p * h.conj();
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.total(), im.total()) / rho_hat.len() as f64
}

pub(crate) fn plan(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_forward(n)
}

/// Largest `|h(r, u)|` over `|u| ≤ u_max`, sampled.
pub(crate) fn h_scale(r: f64, u_max: f64) -> f64 {
    (0..=256)
        .map(|k| h_unchecked(r, u_max * k as f64 / 256.0).abs())
        .fold(0.0, f64::max)
}

fn check_form(f: &DiagonalCubicForm, w: &SmoothWeight) -> Result<()> {
    w.check(f)?;
    if f.coeffs().contains(&0) {
        return domain("every coefficient of F must be nonzero");
    }
    Ok(())
}

fn ic_at(
    f: &DiagonalCubicForm,
    w: &SmoothWeight,
    r: f64,
    v: &[f64],
    cycles: f64,
    max_grid: usize,
) -> Result<Complex64> {
    let mut band = h_band(r, cycles);
    for (i, (&fi, &vi)) in f.coeffs().iter().zip(v).enumerate() {
        band = band.max(to_u_band(w, i, fi, eta_band(w, i, cycles) + vi.abs()));
    }
    let grid = Grid::new(w.f_max(f), band, max_grid)?;
    let fft = plan(grid.n);
    let mut prod = vec![Complex64::new(1.0, 0.0); grid.n];
    for (i, (&fi, &vi)) in f.coeffs().iter().zip(v).enumerate() {
        let sup = support(&grid, w, i, fi);
        let mu = transform(&sup, grid.n, |_, x| Complex64::from_polar(1.0, -TAU * vi * x), &fft);
        for (p, q) in prod.iter_mut().zip(&mu) {
            *p *= q;
        }
    }
    Ok(parseval(&prod, &h_hat(&grid, r, &fft)))
}

/// `Ĩ_c(n) = ∫ w(x) h(n/Y, F(x)) e(−(X/n) c·x) dx`, so that `I_c(n) = X^m Ĩ_c(n)`.
/// Real for even weights; see [`integral_ic_complex`] otherwise.
pub fn integral_ic(
    f: &DiagonalCubicForm,
    w: &SmoothWeight,
    params: &DeltaParams,
    c: &[i64],
    n: u64,
) -> Result<f64> {
    integral_ic_complex(f, w, params, c, n).map(|z| z.re)
}

/// `Ĩ_c(n)` with its imaginary part. The grid is refined until two successive
/// resolutions agree to `params.tol` relative to `∫w · max|h|`.
pub fn integral_ic_complex(
    f: &DiagonalCubicForm,
    w: &SmoothWeight,
    params: &DeltaParams,
    c: &[i64],
    n: u64,
) -> Result<Complex64> {
    check_form(f, w)?;
    if c.len() != f.m() {
        return domain(format!("c has {} entries, expected {}", c.len(), f.m()));
    }
    if n == 0 {
        return domain("n must be positive");
    }
    let r = n as f64 / params.y;
    let fmax = w.f_max(f);
    if r >= 1f64.max(2.0 * fmax) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v: Vec<f64> = c.iter().map(|&ci| ci as f64 * params.x / n as f64).collect();
    let scale = w.integral() * h_scale(r, fmax);
    let mut cycles = params.cycles;
    let mut prev = ic_at(f, w, r, &v, cycles, params.max_grid)?;
    loop {
        cycles *= 2.0;
        let next = ic_at(f, w, r, &v, cycles, params.max_grid).map_err(|e| match e {
            Error::ResourceLimit(why) => Error::NumericalFailure(format!(
                "I_c(n) for c = {c:?}, n = {n} did not settle ({why}); last two values {} and {}",
                prev.re, prev.im
            )),
            other => other,
        })?;
        if (next - prev).norm() <= params.tol * scale {
            return Ok(next);
        }
        prev = next;
    }
}

fn density_at(f: &DiagonalCubicForm, w: &SmoothWeight, cycles: f64, max_grid: usize) -> Result<f64> {
    let mut band: f64 = 1.0;
    for (i, &fi) in f.coeffs().iter().enumerate() {
        band = band.max(to_u_band(w, i, fi, eta_band(w, i, cycles)));
    }
    let grid = Grid::new(w.f_max(f), band, max_grid)?;
    let fft = plan(grid.n);
    let mut prod = vec![Complex64::new(1.0, 0.0); grid.n];
    for (i, &fi) in f.coeffs().iter().enumerate() {
        let sup = support(&grid, w, i, fi);
        let mu = transform(&sup, grid.n, |_, _| Complex64::new(1.0, 0.0), &fft);
        for (p, q) in prod.iter_mut().zip(&mu) {
            *p *= q;
        }
    }
    // ρ(0) = (1/(N du)) Σ_k ρ̂_k
    let mut s = Neumaier::default();
    for p in &prod {
        s.add(p.re);
    }
    Ok(s.total() / (grid.n as f64 * grid.du))
}

/// `σ_∞ = ρ(0)`, the density of `F(x)` under `w(x) dx` at zero, from the
/// product of the one-dimensional transforms.
pub fn real_density_fourier(f: &DiagonalCubicForm, w: &SmoothWeight) -> Result<f64> {
    check_form(f, w)?;
    let scale = w.integral() / w.f_max(f);
    let tol = 1e-9;
    let max_grid = 1 << 22;
    let mut cycles = 8.0;
    let mut prev = density_at(f, w, cycles, max_grid)?;
    loop {
        cycles *= 2.0;
        let next = density_at(f, w, cycles, max_grid).map_err(|e| match e {
            Error::ResourceLimit(why) => {
                Error::NumericalFailure(format!("singular integral did not settle: {why}"))
            }
            other => other,
        })?;
        if (next - prev).abs() <= tol * scale {
            return Ok(next);
        }
        prev = next;
    }
}
