use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "cubicdelta", version, about = "Delta-method kernels for diagonal cubic forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Replay a run from a config file (a report envelope or its `config` field).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct Global {
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,

    /// Cache directory; defaults to $CUBICDELTA_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct FormSpec {
    /// Fermat form x_1³ + … + x_m³.
    #[arg(long, conflicts_with = "form")]
    pub fermat: Option<usize>,
    /// Coefficients F_1,…,F_m.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub form: Option<Vec<i64>>,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Complete exponential sum S_c(n).
    Expsum {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        c: Vec<i64>,
        #[arg(long)]
        n: u64,
    },
    /// Discriminant Δ(F, c), optionally factored.
    Disc {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        c: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Norm::Definition)]
        norm: Norm,
        #[arg(long)]
        factor: bool,
    },
    /// Frobenius polynomial of the section V_c at p.
    Zeta {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        c: Vec<i64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        depth: u32,
    },
    /// Second-moment and dyadic-moment statistics.
    DirichletStat {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long, value_enum)]
        kind: StatKind,
        #[arg(long)]
        z: i64,
        /// Support of a deleted box (0-based indices); full box if omitted.
        #[arg(long, value_delimiter = ',')]
        deleted: Option<Vec<usize>>,
        /// Range of n: inclusive for second-moment, half-open otherwise.
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long, default_value_t = 2)]
        choice: u8,
        /// Y and N for second-moment.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Large-sieve operator norm.
    SieveNorm {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long)]
        z: i64,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = GammaArg::B)]
        gamma: GammaArg,
        #[arg(long, default_value_t = 2)]
        choice: u8,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Numerical check of the delta-method identity at small X.
    DeltaVerify {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long)]
        x: f64,
        /// Radii a,b of the bump weight on a < |x_i| < b.
        #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
        weight: Vec<f64>,
        #[arg(long)]
        positive: bool,
        #[arg(long, default_value_t = 1.0)]
        c_mult: f64,
        #[arg(long)]
        tail: bool,
    },
    /// Partial sums of the singular series.
    SingularSeries {
        #[command(flatten)]
        form: FormSpec,
        #[arg(long)]
        n_max: u64,
    },
    /// Ternary quadric counts: one instance, or a seeded scan.
    LabTernary {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        h: Option<Vec<i64>>,
        #[arg(long, allow_negative_numbers = true)]
        k: Option<i64>,
        #[arg(long)]
        x: u64,
        /// Scan with ‖h‖ ∈ [H, 2H].
        #[arg(long = "scan-h")]
        scan_h: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Square-locus counts, slope and the Mordell transform.
    LabSquareLocus {
        #[arg(long)]
        h_max: u64,
        /// H values for the log-log slope.
        #[arg(long, value_delimiter = ',')]
        slope: Option<Vec<u64>>,
        /// Emit every solution (CSV) instead of the count.
        #[arg(long)]
        list: bool,
    },
    /// Differencing identity, key-point filter and Mahler identity.
    LabVdc {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        keypoint_x: u64,
        /// θ as a decimal or a fraction like 10/13.
        #[arg(long, default_value = "10/13")]
        theta: String,
        #[arg(long, default_value_t = 0.01)]
        small_c: f64,
        #[arg(long, default_value_t = 10_000)]
        keypoint_samples: usize,
        #[arg(long, default_value_t = 0)]
        mahler_samples: usize,
    },
    /// Covering ratio of minor arcs by arcs around b/q.
    LabJutila {
        #[arg(long)]
        y: u64,
        /// Arc constant A, an integer or fraction.
        #[arg(long, default_value = "4")]
        a: String,
        /// `all` or `smooth:B`.
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Largest n ≤ limit with φ(n) | mult·d for some d ≤ dmax.
    LabPhiSearch {
        /// Inclusive upper end of the scan.
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 9)]
        dmax: u64,
        #[arg(long, default_value_t = 10)]
        mult: u64,
    },
    /// Run the built-in check batteries.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    Definition,
    AppendixCode,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    SecondMoment,
    AbsAPrime,
    AbsB,
    BadSum,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaArg {
    B,
    SqfreeA,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}
