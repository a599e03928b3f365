mod args;
mod run;
mod selftest;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::Parser;
use cubicdelta::cache::DiskCache;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use args::{Cli, Command, Format, Global};
use run::{ChecksFailed, Output, Usage};

/// Everything needed to repeat a run; echoed into every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunConfig {
    command: Command,
    global: Global,
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

fn count_files(dir: &Path) -> usize {
    let Ok(rd) = std::fs::read_dir(dir) else { return 0 };
    rd.flatten()
        .map(|e| match e.file_type() {
            Ok(t) if t.is_dir() => count_files(&e.path()),
            Ok(_) => 1,
            Err(_) => 0,
        })
        .sum()
}

fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("bad config: {e}")))?;
    let v = v.get("config").cloned().unwrap_or(v);
    Ok(serde_json::from_value(v).map_err(|e| Usage(format!("bad config: {e}")))?)
}

fn write_report(cfg: &RunConfig, out: &Output, started: f64) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    match cfg.global.format {
        Format::Json => {
            let env = json!({
                "tool": "cubicdelta",
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg,
                "started": started,
                "finished": now(),
                "payload": out.payload,
                "provenance": out.provenance,
            });
            serde_json::to_writer_pretty(&mut buf, &env)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            let Some(t) = &out.table else {
                anyhow::bail!(Usage("this command has no tabular output; use --format json".into()));
            };
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&t.header)?;
            for r in &t.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    match &cfg.global.out {
        Some(p) => std::fs::write(p, &buf).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    let cfg = match (cli.config, cli.command) {
        (Some(path), None) => {
            let mut c = load_config(&path)?;
            c.global.out = cli.global.out;
            c
        }
        (None, Some(command)) => RunConfig { command, global: cli.global },
        (Some(_), Some(_)) => anyhow::bail!(Usage("--config replaces the subcommand; give one".into())),
        (None, None) => anyhow::bail!(Usage("no subcommand given; see --help".into())),
    };
    if cfg.global.threads > 0 {
        cubicdelta::par::init_threads(cfg.global.threads);
    }
    let cache = match &cfg.global.cache_dir {
        Some(d) => Some(DiskCache::new(d)),
        None => DiskCache::from_env(),
    };
    let before = cache.as_ref().map(|c| count_files(c.root()));
    let started = now();
    let mut out = run::run(&cfg.command, cache.as_ref())?;
    let mut prov = json!({
        "parallel": cubicdelta::par::is_parallel(),
        "threads": cfg.global.threads,
        "notes": out.notes,
    });
    if let (Some(c), Some(b)) = (&cache, before) {
        prov["cache"] = json!({
            "dir": c.root().display().to_string(),
            "files_before": b,
            "files_after": count_files(c.root()),
        });
    }
    out.provenance = prov;
    write_report(&cfg, &out, started)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(err) = e.downcast_ref::<cubicdelta::Error>() {
        return err.exit_code() as u8;
    }
    if e.downcast_ref::<Usage>().is_some()
        || e.downcast_ref::<ChecksFailed>().is_some()
        || e.downcast_ref::<std::num::ParseIntError>().is_some()
        || e.downcast_ref::<std::num::ParseFloatError>().is_some()
    {
        return 1;
    }
    2
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(ChecksFailed(v)) = e.downcast_ref::<ChecksFailed>() {
                println!("{}", serde_json::to_string_pretty(v).unwrap_or_default());
            }
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
