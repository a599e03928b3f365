use anyhow::{anyhow, bail, Context};
use cubicdelta::cache::DiskCache;
use cubicdelta::delta::{delta_identity_report, singular_series, DeltaParams, SmoothWeight};
use cubicdelta::dirichlet::stats::{
    dyadic_moment_stat, large_sieve_norm, second_moment_stat, CBox, DeletedBox, Gamma, MomentKind,
};
use cubicdelta::dirichlet::Choice;
use cubicdelta::exactnum::{factorize, HalfPower};
use cubicdelta::expsums::expsum;
use cubicdelta::forms::{disc_delta, CVector, DiagonalCubicForm, DiscNormalization};
use cubicdelta::lab::{self, DifferencingConfig, ModulusFilter};
use cubicdelta::zeta::{charpoly_factor, frobenius_charpoly_with, weil_report, ZetaOptions};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::args::{Command, FormSpec, GammaArg, Norm, StatKind};
use crate::selftest;

/// What a command produced: a JSON payload and, for scans, a table.
pub struct Output {
    pub payload: Value,
    pub table: Option<Table>,
    pub notes: Vec<String>,
    pub provenance: Value,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    fn json(payload: Value) -> Self {
        Output { payload, table: None, notes: vec![], provenance: Value::Null }
    }
}

/// Marks a run whose checks did not all pass.
#[derive(Debug)]
pub struct ChecksFailed(pub Value);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "some checks failed")
    }
}

impl std::error::Error for ChecksFailed {}

/// Usage problems that clap cannot see (missing seed and the like).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn form(spec: &FormSpec) -> anyhow::Result<DiagonalCubicForm> {
    match (&spec.fermat, &spec.form) {
        (Some(m), None) => Ok(DiagonalCubicForm::fermat(*m)?),
        (None, Some(f)) => Ok(DiagonalCubicForm::new(f.clone())?),
        _ => Err(Usage("give exactly one of --fermat or --form".into()).into()),
    }
}

fn half_power(h: &HalfPower) -> Value {
    json!({
        "value": h.value.to_string(),
        "base": h.base,
        "half_exp": h.half_exp,
        "approx": h.to_f64(),
    })
}

/// Parses `p/q` or a decimal.
pub fn parse_ratio(s: &str) -> anyhow::Result<Ratio<i64>> {
    if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i64, i64) = (p.trim().parse()?, q.trim().parse()?);
        if q == 0 {
            bail!(Usage(format!("zero denominator in {s:?}")));
        }
        return Ok(Ratio::new(p, q));
    }
    if let Ok(n) = s.trim().parse::<i64>() {
        return Ok(Ratio::from_integer(n));
    }
    let x: f64 = s.trim().parse().map_err(|_| Usage(format!("not a number: {s:?}")))?;
    Ratio::approximate_float(x).ok_or_else(|| anyhow!(Usage(format!("cannot represent {s:?}"))))
}

fn parse_f64(s: &str) -> anyhow::Result<f64> {
    let r = parse_ratio(s)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

fn parse_filter(s: &str) -> anyhow::Result<ModulusFilter> {
    if s == "all" {
        return Ok(ModulusFilter::All);
    }
    match s.strip_prefix("smooth:").map(str::parse::<u64>) {
        Some(Ok(b)) => Ok(ModulusFilter::Smooth(b)),
        _ => Err(Usage(format!("filter must be `all` or `smooth:B`, got {s:?}")).into()),
    }
}

fn require_seed(seed: Option<u64>) -> anyhow::Result<u64> {
    seed.ok_or_else(|| anyhow!(Usage("randomized runs need --seed".into())))
}

pub fn run(cmd: &Command, cache: Option<&DiskCache>) -> anyhow::Result<Output> {
    match cmd {
        Command::Expsum { form: fs, c, n } => {
            let f = form(fs)?;
            let v = expsum(&f, &CVector::new(c.clone()), *n)?;
            Ok(Output::json(json!({
                "form": f.coeffs(),
                "c": c,
                "n": n,
                "value": v.value.to_string(),
                "normalized": half_power(&v.normalized),
            })))
        }
        Command::Disc { form: fs, c, norm, factor } => {
            let f = form(fs)?;
            let nm = match norm {
                Norm::Definition => DiscNormalization::Definition,
                Norm::AppendixCode => DiscNormalization::AppendixCode,
            };
            let d = disc_delta(&f, &CVector::new(c.clone()), nm)?;
            let mut out = json!({ "form": f.coeffs(), "c": c, "norm": nm, "value": d.to_string() });
            if *factor {
                let fd = factorize(&d)?;
                let parts: Vec<Value> =
                    fd.factors.iter().map(|(p, e)| json!([p.to_string(), e])).collect();
                let sign = if d < num_bigint::BigInt::from(0) { -1 } else { 1 };
                out["sign"] = json!(sign);
                out["factors"] = json!(parts);
                out["factored"] = json!(fd
                    .factors
                    .iter()
                    .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
                    .collect::<Vec<_>>()
                    .join("*"));
            }
            Ok(Output::json(out))
        }
        Command::Zeta { form: fs, c, p, depth } => {
            let f = form(fs)?;
            let opts = ZetaOptions { cache, ..ZetaOptions::default() };
            let data = frobenius_charpoly_with(&f, &CVector::new(c.clone()), *p, *depth, &opts)?;
            let coeffs: Vec<String> = data.charpoly.coeffs().iter().map(|x| x.to_string()).collect();
            let mut out = json!({
                "form": data.f,
                "c": data.c,
                "p": data.p,
                "depth": depth,
                "counts": data.counts.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "charpoly": coeffs,
                "complete": data.complete,
            });
            if data.complete {
                let fac: Vec<Value> = charpoly_factor(&data)?
                    .iter()
                    .map(|(g, e)| json!({ "factor": g.to_string(), "exp": e }))
                    .collect();
                let w = weil_report(&data)?;
                out["factorization"] = json!(fac);
                out["weil"] = json!({
                    "max_modulus_error": w.max_modulus_error,
                    "functional_equation": w.fe_holds,
                });
            }
            let mut o = Output::json(out);
            if let Some(c) = cache {
                o.notes.push(format!("point-count cache at {}", c.root().display()));
            }
            Ok(o)
        }
        Command::DirichletStat { form: fs, kind, z, deleted, lo, hi, choice, y, n, beta } => {
            let f = form(fs)?;
            let ch = Choice::from_index(*choice)?;
            let rep = match kind {
                StatKind::SecondMoment => {
                    if deleted.is_some() {
                        bail!(Usage("second-moment uses the full box".into()));
                    }
                    let (Some(y), Some(n)) = (y, n) else {
                        bail!(Usage("second-moment needs --y and --n".into()));
                    };
                    second_moment_stat(&f, *z, *y, *n, (*lo, *hi), ch, *beta)?
                }
                k => {
                    let cbox = match deleted {
                        Some(idx) => CBox::Deleted(DeletedBox::new(f.m(), idx.clone(), *z)?),
                        None => CBox::Full { m: f.m(), z: *z },
                    };
                    let mk = match k {
                        StatKind::AbsAPrime => MomentKind::AbsAPrime,
                        StatKind::AbsB => MomentKind::AbsB,
                        _ => MomentKind::BadSum,
                    };
                    dyadic_moment_stat(mk, &f, &cbox, (*lo, *hi), ch)?
                }
            };
            Ok(Output::json(serde_json::to_value(rep)?))
        }
        Command::SieveNorm { form: fs, z, q, gamma, choice, beta } => {
            let f = form(fs)?;
            let g = match gamma {
                GammaArg::B => Gamma::B,
                GammaArg::SqfreeA => Gamma::SqfreeA,
            };
            let rep = large_sieve_norm(&f, *z, *q, g, Choice::from_index(*choice)?, *beta)?;
            Ok(Output::json(serde_json::to_value(rep)?))
        }
        Command::DeltaVerify { form: fs, x, weight, positive, c_mult, tail } => {
            let f = form(fs)?;
            let [a, b] = weight[..] else {
                bail!(Usage("--weight takes two radii a,b".into()));
            };
            let mut w = SmoothWeight::uniform(f.m(), a, b)?;
            if *positive {
                w = w.positive_only();
            }
            let mut params = DeltaParams::new(*x)?;
            params.c_mult = *c_mult;
            let rep = delta_identity_report(&f, &w, &params, *tail)?;
            let mut o = Output::json(serde_json::to_value(&rep)?);
            o.notes.push(format!(
                "n truncated at {} (exact support of h), c-box radius up to {}",
                rep.n_cutoff, rep.max_c_radius
            ));
            Ok(o)
        }
        Command::SingularSeries { form: fs, n_max } => {
            let f = form(fs)?;
            let rep = singular_series(&f, *n_max)?;
            let table = Table {
                header: vec!["N".into(), "partial_sum".into()],
                rows: rep.partial_sums.iter().map(|(n, s)| vec![n.to_string(), s.to_string()]).collect(),
            };
            Ok(Output { payload: serde_json::to_value(rep)?, table: Some(table), notes: vec![], provenance: Value::Null })
        }
        Command::LabTernary { h, k, x, scan_h, samples, seed } => match (scan_h, h, k) {
            (Some(hh), None, None) => {
                let seed = require_seed(*seed)?;
                let (rows, rep) = lab::ternary_conjecture_scan(*hh, *x, *samples, seed)?;
                let table = Table {
                    header: ["h1", "h2", "h3", "k", "X", "count", "bound", "ratio"].map(String::from).to_vec(),
                    rows: rows
                        .iter()
                        .map(|r| {
                            let mut v: Vec<String> = r.h.iter().map(|x| x.to_string()).collect();
                            v.extend([r.k.to_string(), r.x.to_string(), r.count.to_string()]);
                            v.extend([r.bound.to_string(), r.ratio.to_string()]);
                            v
                        })
                        .collect(),
                };
                Ok(Output {
                    payload: json!({ "report": rep, "rows": rows }),
                    table: Some(table),
                    notes: vec![],
                    provenance: Value::Null,
                })
            }
            (None, Some(h), Some(k)) => {
                let Ok(h3) = <[i64; 3]>::try_from(h.as_slice()) else {
                    bail!(Usage("--h takes three integers".into()));
                };
                let count = lab::ternary_count(h3, *k, *x)?;
                Ok(Output::json(json!({
                    "h": h3,
                    "k": k,
                    "X": x,
                    "count": count,
                    "admissible": lab::is_admissible(h3, *k),
                    "bound": lab::ternary_bound(h3, *x, h3.iter().map(|v| v.abs()).max().unwrap_or(0) as f64),
                })))
            }
            _ => bail!(Usage("give either --h and --k, or --scan-h".into())),
        },
        Command::LabSquareLocus { h_max, slope, list } => {
            if *list {
                let sols = lab::square_locus(*h_max);
                let rows = sols
                    .iter()
                    .map(|(h, z)| vec![h[0].to_string(), h[1].to_string(), h[2].to_string(), z.to_string()])
                    .collect();
                return Ok(Output {
                    payload: json!({ "H": h_max, "solutions": sols }),
                    table: Some(Table { header: ["h1", "h2", "h3", "z"].map(String::from).to_vec(), rows }),
                    notes: vec!["z ≥ 0 listed; the count includes ±z".into()],
                    provenance: Value::Null,
                });
            }
            let sols = lab::square_locus(*h_max);
            let count: u64 = sols.iter().map(|&(_, z)| if z == 0 { 1 } else { 2 }).sum();
            let mut mordell_checked = 0u64;
            let mut mordell_failed = 0u64;
            for (h, z) in &sols {
                if h[2] != 0 {
                    mordell_checked += 1;
                    if !lab::mordell_transform(h[0], h[1], h[2], *z)?.on_curve {
                        mordell_failed += 1;
                    }
                }
            }
            let mut out = json!({
                "H": h_max,
                "norm": "max",
                "count": count,
                "mordell": { "checked": mordell_checked, "failed": mordell_failed },
            });
            if let Some(hs) = slope {
                out["slope"] = serde_json::to_value(lab::square_locus_scan(hs)?)?;
            }
            Ok(Output::json(out))
        }
        Command::LabVdc { samples, seed, keypoint_x, theta, small_c, keypoint_samples, mahler_samples } => {
            let failures = lab::vdc_fuzz(*samples, 100, *seed);
            let poly = lab::vdc_polynomial_identity();
            let cfg = DifferencingConfig::new(*keypoint_x, parse_f64(theta)?, *small_c)?;
            let kp = lab::vdc_keypoint_check(&cfg, *keypoint_samples, *seed)?;
            let mut out = json!({
                "identity": { "samples": samples, "range": 100, "failures": failures, "polynomial": poly },
                "keypoint": kp,
            });
            if *mahler_samples > 0 {
                let bad = lab::mahler_fuzz(*mahler_samples, 1000, *seed);
                out["mahler"] = json!({ "samples": mahler_samples, "range": 1000, "failures": bad });
            }
            Ok(Output::json(out))
        }
        Command::LabJutila { y, a, filter } => {
            let rep = lab::jutila_covering_ratio(*y, parse_filter(filter)?, parse_ratio(a)?)?;
            let mut o = Output::json(serde_json::to_value(rep)?);
            o.notes.push("n and q range over [ceil(Y/2), Y]".into());
            Ok(o)
        }
        Command::LabPhiSearch { limit, dmax, mult } => {
            if *limit < 1 {
                return Err(cubicdelta::Error::Domain("limit must be at least 1".into()).into());
            }
            let r = lab::phi_divisibility_search(limit.saturating_add(1), *dmax, *mult)?;
            Ok(Output::json(json!({
                "limit": limit,
                "dmax": dmax,
                "mult": mult,
                "max_tested": r.max_tested,
                "max_discovered": r.max_discovered,
            })))
        }
        Command::Selftest { level } => {
            let summary = selftest::run(*level, cache);
            let v = serde_json::to_value(&summary).context("serializing selftest")?;
            if summary.failed > 0 {
                return Err(ChecksFailed(v).into());
            }
            if let Some(why) = &summary.stopped {
                return Err(anyhow!(cubicdelta::Error::ResourceLimit(why.clone())).context(v.to_string()));
            }
            Ok(Output::json(v))
        }
    }
}
