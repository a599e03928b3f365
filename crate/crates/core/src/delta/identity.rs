//! Both sides of the delta identity at desk scale.
//!
//! The dual side factorizes over coordinates: with
//! `g(b, c; n) = Σ_{y mod n} e_n(b y³ + c y)` we have
//! `S_c(n) = Σ_{a unit} Π_i g(aF_i, c_i; n)`, so the box sum over `c` is
//! `Σ_a ∫ w(x) h(n/Y, F(x)) Π_i K_{aF_i,i}(x_i) dx` with
//! `K_{b,i}(x) = Σ_{|c| ≤ R_i} g(b, c; n) e(−cXx/n)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fourier::{eta_band, h_band, h_hat, parseval, plan, support, to_u_band, transform, Grid};
use super::{c_y, h_unchecked, DeltaParams, Neumaier, SmoothWeight};
use crate::error::{domain, Error, Result};
use crate::exactnum::arith::gcd;
use crate::expsums::ramanujan_sum;
use crate::forms::DiagonalCubicForm;

const LATTICE_BUDGET: f64 = 2e8;

/// Integers `y` with `η_i(y/X) > 0`, with their weights.
fn lattice_axis(w: &SmoothWeight, i: usize, x: f64) -> Vec<(i64, f64)> {
    let b = w.radii[i].1;
    let top = (b * x).ceil() as i64;
    (-top..=top)
        .filter_map(|y| {
            let e = w.eta(i, y as f64 / x);
            (e > 0.0).then_some((y, e))
        })
        .collect()
}

fn axes(f: &DiagonalCubicForm, w: &SmoothWeight, x: f64, skip_last: bool) -> Result<Vec<Vec<(i64, f64)>>> {
    w.check(f)?;
    if !(x >= 1.0 && x.is_finite()) {
        return domain(format!("X must be at least 1, got {x}"));
    }
    let ax: Vec<_> = (0..f.m()).map(|i| lattice_axis(w, i, x)).collect();
    let k = if skip_last { f.m() - 1 } else { f.m() };
    let size: f64 = ax[..k].iter().map(|a| a.len() as f64).product();
    if size > LATTICE_BUDGET {
        return Err(Error::ResourceLimit(format!(
            "lattice enumeration needs {size} points, budget {LATTICE_BUDGET}"
        )));
    }
    Ok(ax)
}

fn icbrt(t: i128) -> Option<i64> {
    let g = (t as f64).cbrt().round() as i128;
    (g - 1..=g + 1).find(|&y| y * y * y == t).map(|y| y as i64)
}

/// Call `visit(value, weight)` for every point of the product of `axes`, in
/// lexicographic order.
fn for_each_point(fc: &[i64], axes: &[Vec<(i64, f64)>], mut visit: impl FnMut(i128, f64)) {
    if axes.iter().any(|a| a.is_empty()) {
        return;
    }
    let k = axes.len();
    let mut idx = vec![0usize; k];
    loop {
        let mut s: i128 = 0;
        let mut wt = 1.0;
        for (i, &j) in idx.iter().enumerate() {
            let (y, e) = axes[i][j];
            s += fc[i] as i128 * (y as i128).pow(3);
            wt *= e;
        }
        visit(s, wt);
        let mut d = k;
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

/// `N_{F,w}(X) = Σ_{y ∈ Z^m} w(y/X)·1_{F(y)=0}`: enumerate all but the last
/// coordinate and solve for it.
pub fn brute_force_count(f: &DiagonalCubicForm, w: &SmoothWeight, x: f64) -> Result<f64> {
    let ax = axes(f, w, x, true)?;
    let fc = f.coeffs();
    let m = f.m();
    let last = fc[m - 1] as i128;
    let mut acc = Neumaier::default();
    for_each_point(fc, &ax[..m - 1], |s, wt| {
        if s % last != 0 {
            return;
        }
        if let Some(y) = icbrt(-s / last) {
            let e = w.eta(m - 1, y as f64 / x);
            if e > 0.0 {
                acc.add(wt * e);
            }
        }
    });
    Ok(acc.total())
}

/// The same count by meeting in the middle: tabulate the first half of the
/// coordinates by value, then look up the negated second half.
pub fn brute_force_count_mitm(f: &DiagonalCubicForm, w: &SmoothWeight, x: f64) -> Result<f64> {
    let ax = axes(f, w, x, false)?;
    let fc = f.coeffs();
    let h = f.m() / 2;
    let mut left: HashMap<i128, f64> = HashMap::new();
    for_each_point(&fc[..h], &ax[..h], |s, wt| *left.entry(s).or_insert(0.0) += wt);
    let mut acc = Neumaier::default();
    for_each_point(&fc[h..], &ax[h..], |s, wt| {
        if let Some(l) = left.get(&-s) {
            acc.add(l * wt);
        }
    });
    Ok(acc.total())
}

/// `Y^{−2} Σ_y w(y/X) Σ_{n ≤ cutoff} c_n(F(y)) h(n/Y, F(y)/Y²)`, the
/// identity's right side before Poisson summation in `y`.
pub fn primal_rhs(f: &DiagonalCubicForm, w: &SmoothWeight, params: &DeltaParams) -> Result<f64> {
    let ax = axes(f, w, params.x, false)?;
    let mut by_value: BTreeMap<i128, f64> = BTreeMap::new();
    for_each_point(f.coeffs(), &ax, |s, wt| *by_value.entry(s).or_insert(0.0) += wt);
    let ncut = params.n_cutoff(f, w);
    let y2 = params.y * params.y;
    let mut acc = Neumaier::default();
    for (&k, &wt) in &by_value {
        let t = k.unsigned_abs() as u64;
        let u = k as f64 / y2;
        let mut inner = Neumaier::default();
        for n in 1..=ncut {
            let hv = h_unchecked(n as f64 / params.y, u);
            if hv != 0.0 {
                inner.add(ramanujan_sum(n, t) as f64 * hv);
            }
        }
        acc.add(wt * inner.total());
    }
    Ok(acc.total() / y2)
}

/// Default `c`-box radii at modulus `n`: enough to resolve the `x`-bandwidth
/// of `w(x) h(n/Y, F(x))` on each coordinate.
pub(crate) fn box_radii(f: &DiagonalCubicForm, w: &SmoothWeight, params: &DeltaParams, n: u64, c_mult: f64) -> Vec<i64> {
    let r = n as f64 / params.y;
    let hb = h_band(r, params.cycles);
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(i, &fi)| {
            let b = w.radii[i].1;
            let xb = eta_band(w, i, params.cycles) + 3.0 * fi.unsigned_abs() as f64 * b * b * hb;
            (c_mult * n as f64 / params.x * xb).ceil() as i64
        })
        .collect()
}

/// `g(b, c; n)` for `c = 0..n`, from exact exponents and the embedding
/// `ζ_n ↦ e(1/n)`.
fn gauss_row(n: u64, b: u64, roots: &[Complex64]) -> Vec<Complex64> {
    let nn = n as usize;
    let cubes: Vec<usize> = (0..n)
        .map(|y| ((b as u128 * (y as u128).pow(3)) % n as u128) as usize)
        .collect();
    (0..nn)
        .map(|c| {
            let mut z = Complex64::new(0.0, 0.0);
            for (y, &cb) in cubes.iter().enumerate() {
                z += roots[(cb + c * y) % nn];
            }
            z
        })
        .collect()
}

/// `K(x) = Σ_{|c| ≤ R} g(c mod n) e(−cXx/n)`, folding `c = c₀ + nk`.
struct Kernel<'a> {
    row: &'a [Complex64],
    n: i64,
    r: i64,
    x_scale: f64,
}

impl Kernel<'_> {
    fn eval(&self, x: f64, prefix: &mut Vec<Complex64>) -> Complex64 {
        let (n, r) = (self.n, self.r);
        let theta = self.x_scale * x / n as f64;
        let kmin = -(r + n - 1).div_euclid(n) - 1;
        let kmax = r.div_euclid(n) + 1;
        // prefix[k − kmin] = Σ_{kmin ≤ j < k} z^j with z = e(−nθ)
        let z = Complex64::from_polar(1.0, -TAU * n as f64 * theta);
        prefix.clear();
        prefix.push(Complex64::new(0.0, 0.0));
        let mut p = z.powi(kmin as i32);
        for _ in kmin..=kmax {
            let last = *prefix.last().unwrap();
            prefix.push(last + p);
            p *= z;
        }
        let step = Complex64::from_polar(1.0, -TAU * theta);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (c0, g) in self.row.iter().enumerate() {
            let c0 = c0 as i64;
            let klo = -(r + c0).div_euclid(n);
            let khi = (r - c0).div_euclid(n);
            if khi >= klo {
                let s = prefix[(khi + 1 - kmin) as usize] - prefix[(klo - kmin) as usize];
                acc += g * phase * s;
            }
            phase *= step;
        }
        acc
    }
}

/// `Σ_{c ∈ box} S_c(n) Ĩ_c(n)` over the box `|c_i| ≤ radii[i]`.
pub fn dual_term_boxed(
    f: &DiagonalCubicForm,
    w: &SmoothWeight,
    params: &DeltaParams,
    n: u64,
    radii: &[i64],
) -> Result<f64> {
    w.check(f)?;
    if radii.len() != f.m() || radii.iter().any(|&r| r < 0) {
        return domain("need one nonnegative radius per coordinate");
    }
    if n == 0 {
        return domain("n must be positive");
    }
    let fc = f.coeffs();
    if fc.contains(&0) {
        return domain("every coefficient of F must be nonzero");
    }
    let r = n as f64 / params.y;
    let fmax = w.f_max(f);
    if r >= 1f64.max(2.0 * fmax) {
        return Ok(0.0);
    }
    let mut band = h_band(r, params.cycles);
    for (i, &fi) in fc.iter().enumerate() {
        let kb = radii[i] as f64 * params.x / n as f64;
        band = band.max(to_u_band(w, i, fi, eta_band(w, i, params.cycles) + kb));
    }
    let grid = Grid::new(fmax, band, params.max_grid)?;
    let fft = plan(grid.n);
    let hh = h_hat(&grid, r, &fft);
    let sups: Vec<_> = fc.iter().enumerate().map(|(i, &fi)| support(&grid, w, i, fi)).collect();
    // coordinates with identical data share transforms
    let class: Vec<usize> = (0..f.m())
        .map(|i| {
            (0..=i)
                .find(|&j| fc[j] == fc[i] && w.radii[j] == w.radii[i] && radii[j] == radii[i])
                .unwrap()
        })
        .collect();
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect();
    let mut rows: HashMap<u64, Vec<Complex64>> = HashMap::new();
    let mut cache: HashMap<(u64, usize), Vec<Complex64>> = HashMap::new();
    let mut rho = vec![Complex64::new(0.0, 0.0); grid.n];
    let mut prefix = Vec::new();
    for a in (0..n).filter(|&a| gcd(a, n) == 1) {
        let mut prod = vec![Complex64::new(1.0, 0.0); grid.n];
        for i in 0..f.m() {
            let b = ((a as i128 * fc[i] as i128).rem_euclid(n as i128)) as u64;
            let key = (b, class[i]);
            if !cache.contains_key(&key) {
                let row = rows.entry(b).or_insert_with(|| gauss_row(n, b, &roots));
                let k = Kernel { row, n: n as i64, r: radii[i], x_scale: params.x };
                let mu = transform(&sups[i], grid.n, |_, x| k.eval(x, &mut prefix), &fft);
                cache.insert(key, mu);
            }
            for (p, q) in prod.iter_mut().zip(&cache[&key]) {
                *p *= q;
            }
        }
        for (s, p) in rho.iter_mut().zip(&prod) {
            *s += p;
        }
    }
    Ok(parseval(&rho, &hh).re)
}

/// `Σ_{c ∈ box} S_c(n) Ĩ_c(n)` with the default box.
pub fn dual_term(f: &DiagonalCubicForm, w: &SmoothWeight, params: &DeltaParams, n: u64) -> Result<f64> {
    let radii = box_radii(f, w, params, n, params.c_mult);
    dual_term_boxed(f, w, params, n, &radii)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub form: Vec<i64>,
    pub weight: SmoothWeight,
    pub params: DeltaParams,
    /// `N_{F,w}(X)` by enumeration.
    pub lhs: f64,
    /// The same count by meet-in-the-middle.
    pub lhs_mitm: f64,
    /// `Y^{−2} Σ_n Σ_{c ∈ box} n^{−m} S_c(n) I_c(n)`.
    pub rhs: f64,
    /// The right side evaluated before dualizing, with Ramanujan sums.
    pub rhs_primal: f64,
    pub c_y: f64,
    /// `|rhs − lhs|/lhs`.
    pub rel_error: f64,
    /// `|c_Y·rhs − lhs|/lhs`.
    pub rel_error_normalized: f64,
    /// `|rhs − rhs_primal|/|rhs_primal|`: the numerical error of the dual side.
    pub dual_vs_primal: f64,
    pub n_cutoff: u64,
    pub max_c_radius: i64,
    /// `(n, Y^{−2} n^{−m} X^m Σ_c S_c(n) Ĩ_c(n))`.
    pub per_n: Vec<(u64, f64)>,
    /// Relative change of `rhs` when every box radius is doubled.
    pub c_tail: Option<f64>,
}

fn rhs_from(terms: &[(u64, f64)]) -> f64 {
    let mut acc = Neumaier::default();
    for &(_, t) in terms {
        acc.add(t);
    }
    acc.total()
}

fn dual_terms(f: &DiagonalCubicForm, w: &SmoothWeight, params: &DeltaParams, ncut: u64, c_mult: f64) -> Result<Vec<(u64, f64)>> {
    let m = f.m() as i32;
    let scale = params.x.powi(m) / (params.y * params.y);
    let ns: Vec<u64> = (1..=ncut).collect();
    crate::par::map(&ns, |&n| {
        let radii = box_radii(f, w, params, n, c_mult);
        let d = dual_term_boxed(f, w, params, n, &radii)?;
        Ok((n, scale * d / (n as f64).powi(m)))
    })
    .into_iter()
    .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    let d = if b != 0.0 { b.abs() } else { 1.0 };
    (a - b).abs() / d
}

/// Both sides of the delta identity for `N_{F,w}(X)`.
pub fn delta_identity_report(
    f: &DiagonalCubicForm,
    w: &SmoothWeight,
    params: &DeltaParams,
    tail_check: bool,
) -> Result<IdentityReport> {
    if params.x > 12.0 {
        return Err(Error::ResourceLimit(format!("X = {} exceeds the desk limit 12", params.x)));
    }
    let lhs = brute_force_count(f, w, params.x)?;
    let lhs_mitm = brute_force_count_mitm(f, w, params.x)?;
    let ncut = params.n_cutoff(f, w);
    let per_n = dual_terms(f, w, params, ncut, params.c_mult)?;
    let rhs = rhs_from(&per_n);
    let rhs_primal = primal_rhs(f, w, params)?;
    let cy = c_y(params.y);
    let c_tail = if tail_check {
        let wide = dual_terms(f, w, params, ncut, 2.0 * params.c_mult)?;
        Some(rel(rhs, rhs_from(&wide)))
    } else {
        None
    };
    let max_c_radius = (1..=ncut)
        .flat_map(|n| box_radii(f, w, params, n, params.c_mult))
        .max()
        .unwrap_or(0);
    Ok(IdentityReport {
        form: f.coeffs().to_vec(),
        weight: w.clone(),
        params: params.clone(),
        lhs,
        lhs_mitm,
        rhs,
        rhs_primal,
        c_y: cy,
        rel_error: rel(rhs, lhs),
        rel_error_normalized: rel(cy * rhs, lhs),
        dual_vs_primal: rel(rhs, rhs_primal),
        n_cutoff: ncut,
        max_c_radius,
        per_n,
        c_tail,
    })
}
