//! Covering of the minor arcs by short arcs around fractions with restricted
//! denominators, computed exactly on `R/Z`.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dirichlet::stats::StatReport;
use crate::error::{domain, Error, Result};
use crate::exactnum::arith::{euler_phi, factor_u64, gcd};

type Q = Ratio<i128>;

/// Largest `Σ_{q ∈ 𝒬} φ(q)` accepted, counting arc endpoints on both sides.
pub const ARC_BUDGET: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusFilter {
    All,
    /// `q` whose prime factors are all `≤ B`.
    Smooth(u64),
}

impl ModulusFilter {
    pub fn admits(&self, q: u64) -> bool {
        match *self {
            ModulusFilter::All => true,
            ModulusFilter::Smooth(b) => factor_u64(q).iter().all(|&(p, _)| p <= b),
        }
    }
}

/// `q ∈ [⌈Y/2⌉, Y]` passing the filter.
pub fn moduli(y: u64, filter: ModulusFilter) -> Vec<u64> {
    (y.div_ceil(2).max(1)..=y).filter(|&q| filter.admits(q)).collect()
}

/// Pushes `(position, Δcover, Δminor)` events for the closed arc `[s, e]` on `R/Z`.
fn push_arc(ev: &mut Vec<(Q, i64, i64)>, base: &mut i64, s: Q, e: Q, dc: i64, dm: i64) {
    if e - s >= Q::from_integer(1) {
        // wraps the whole circle
        if dc != 0 {
            *base += dc;
        } else {
            ev.push((Q::zero(), 0, dm));
            ev.push((Q::from_integer(1), 0, -dm));
        }
        return;
    }
    let shift = s.floor();
    let (s, e) = (s - shift, e - shift);
    let one = Q::from_integer(1);
    if e <= one {
        ev.push((s, dc, dm));
        ev.push((e, -dc, -dm));
    } else {
        ev.push((s, dc, dm));
        ev.push((one, -dc, -dm));
        ev.push((Q::zero(), dc, dm));
        ev.push((e - one, -dc, -dm));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringSweep {
    /// `inf_{θ ∈ 𝔪′} #{(q, b) : ‖θ − b/q‖ ≤ A/Y²}` over open pieces.
    pub infimum: u64,
    /// A point of the piece attaining the infimum.
    pub argmin: String,
    pub l: u64,
    /// Number of arcs making up `𝔪′`.
    pub minor_arcs: u64,
}

/// Exact sweep of the multiplicity over `𝔪′ = ⋃_{n ∈ [Y/2, Y]} ⋃_{(a,n)=1}
/// {|θ − a/n| ≤ 1/(nY)}`.
pub fn covering_sweep(y: u64, filter: ModulusFilter, a: Ratio<i64>) -> Result<CoveringSweep> {
    if y < 2 {
        return domain("need Y ≥ 2");
    }
    if a <= Ratio::zero() {
        return domain("need A > 0");
    }
    let qs = moduli(y, filter);
    if qs.is_empty() {
        return domain(format!("no moduli in [{}, {y}] pass {filter:?}", y.div_ceil(2)));
    }
    let ns = moduli(y, ModulusFilter::All);
    let l: u64 = qs.iter().map(|&q| euler_phi(q)).sum();
    let m_arcs: u64 = ns.iter().map(|&n| euler_phi(n)).sum();
    if l + m_arcs > ARC_BUDGET {
        return Err(Error::ResourceLimit(format!("{} arcs exceed {ARC_BUDGET}", l + m_arcs)));
    }
    let a = Q::new(*a.numer() as i128, *a.denom() as i128);
    let yy = y as i128;
    let width = a / Q::from_integer(yy * yy);
    let mut ev = Vec::with_capacity(4 * (l + m_arcs) as usize + 2);
    let mut base = 0i64;
    for &q in &qs {
        for b in (0..q).filter(|&b| gcd(b, q) == 1) {
            let c = Q::new(b as i128, q as i128);
            push_arc(&mut ev, &mut base, c - width, c + width, 1, 0);
        }
    }
    for &n in &ns {
        let r = Q::new(1, n as i128 * yy);
        for b in (0..n).filter(|&b| gcd(b, n) == 1) {
            let c = Q::new(b as i128, n as i128);
            push_arc(&mut ev, &mut base, c - r, c + r, 0, 1);
        }
    }
    ev.push((Q::zero(), 0, 0));
    ev.push((Q::from_integer(1), 0, 0));
    ev.sort_by(|x, y| x.0.cmp(&y.0));
    let (mut cover, mut minor) = (base, 0i64);
    let mut best: Option<(i64, Q)> = None;
    let mut i = 0;
    while i < ev.len() {
        let pos = ev[i].0;
        while i < ev.len() && ev[i].0 == pos {
            cover += ev[i].1;
            minor += ev[i].2;
            i += 1;
        }
        if i < ev.len() && ev[i].0 > pos && minor > 0 && best.map_or(true, |b| cover < b.0) {
            let mid = (pos + ev[i].0) / Q::from_integer(2);
            best = Some((cover, mid));
        }
    }
    let (inf, at) = best.ok_or_else(|| Error::Invariant("minor arcs are empty".into()))?;
    Ok(CoveringSweep {
        infimum: inf as u64,
        argmin: at.to_string(),
        l,
        minor_arcs: m_arcs,
    })
}

/// `ρ = (A·L/Y²) / inf_{𝔪′} multiplicity`, infinite when some point of `𝔪′`
/// is uncovered.
pub fn jutila_covering_ratio(y: u64, filter: ModulusFilter, a: Ratio<i64>) -> Result<StatReport> {
    let sw = covering_sweep(y, filter, a)?;
    let af = a.to_f64().unwrap_or(f64::NAN);
    let mass = af * sw.l as f64 / (y as f64 * y as f64);
    let value = if sw.infimum == 0 { f64::INFINITY } else { mass / sw.infimum as f64 };
    let filter_s = match filter {
        ModulusFilter::All => "all".to_string(),
        ModulusFilter::Smooth(b) => format!("smooth({b})"),
    };
    let mut rep = StatReport::new(
        "jutila-covering",
        vec![
            ("Y", y.to_string()),
            ("filter", filter_s),
            ("A", a.to_string()),
            ("n_range", format!("[{}, {y}]", y.div_ceil(2))),
        ],
        None,
        value,
        mass,
    );
    rep.extras.insert("L".into(), sw.l as f64);
    rep.extras.insert("infimum".into(), sw.infimum as f64);
    rep.extras.insert("uncovered".into(), if sw.infimum == 0 { 1.0 } else { 0.0 });
    rep.params.insert("argmin".into(), sw.argmin);
    Ok(rep)
}

/// Pointwise multiplicity, for cross-checking the sweep.
pub fn multiplicity_at(theta: Q, y: u64, filter: ModulusFilter, a: Ratio<i64>) -> u64 {
    let a = Q::new(*a.numer() as i128, *a.denom() as i128);
    let width = a / Q::from_integer((y * y) as i128);
    let mut count = 0;
    for q in moduli(y, filter) {
        for b in (0..q).filter(|&b| gcd(b, q) == 1) {
            let d = theta - Q::new(b as i128, q as i128);
            let d = d - d.round();
            let d = if d < Q::zero() { -d } else { d };
            if d <= width {
                count += 1;
            }
        }
    }
    count
}

/// Whether `θ` lies in `𝔪′`.
pub fn in_minor(theta: Q, y: u64) -> bool {
    moduli(y, ModulusFilter::All).into_iter().any(|n| {
        let r = Q::new(1, (n * y) as i128);
        (0..n).filter(|&b| gcd(b, n) == 1).any(|b| {
            let d = theta - Q::new(b as i128, n as i128);
            let d = d - d.round();
            (if d < Q::zero() { -d } else { d }) <= r
        })
    })
}
