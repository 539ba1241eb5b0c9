//! Command-line configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use gapseq::{GapSpec, MaxGap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// SPMF if any line ends with the `-2` terminator, plain otherwise.
    Auto,
    Spmf,
    Plain,
}

/// Minimum support, absolute or as a percentage of the number of sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSupport {
    Absolute(usize),
    /// Percentage stored as `numerator / 10^scale`.
    Percent {
        numerator: u64,
        scale: u32,
    },
}

impl MinSupport {
    /// Absolute threshold for a database of `m` sequences. Percentages round
    /// up, so `support >= minsup` holds exactly when the support reaches the
    /// requested fraction. Never below 1.
    pub fn resolve(&self, m: usize) -> usize {
        match *self {
            MinSupport::Absolute(n) => n,
            MinSupport::Percent { numerator, scale } => {
                let denom = 100u128 * 10u128.pow(scale);
                let value = (numerator as u128 * m as u128).div_ceil(denom);
                (value as usize).max(1)
            }
        }
    }

    /// Threshold for the database replicated `k` times.
    pub fn resolve_replicated(&self, m: usize, k: usize) -> usize {
        match *self {
            MinSupport::Absolute(n) => n * k,
            MinSupport::Percent { .. } => self.resolve(m * k),
        }
    }
}

impl FromStr for MinSupport {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(pct) = s.strip_suffix('%') {
            let (int, frac) = pct.split_once('.').unwrap_or((pct, ""));
            let digits = format!("{int}{frac}");
            if int.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || frac.len() > 9 {
                return Err(format!("invalid percentage `{s}`"));
            }
            let numerator: u64 = digits.parse().map_err(|_| format!("invalid percentage `{s}`"))?;
            let scale = frac.len() as u32;
            if numerator > 100 * 10u64.pow(scale) {
                return Err(format!("percentage `{s}` exceeds 100%"));
            }
            return Ok(MinSupport::Percent { numerator, scale });
        }
        match s.parse::<usize>() {
            Ok(0) => Err("minimum support must be at least 1".into()),
            Ok(n) => Ok(MinSupport::Absolute(n)),
            Err(_) => Err(format!("invalid minimum support `{s}` (expected INT or FLOAT%)")),
        }
    }
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MinSupport::Absolute(n) => write!(f, "{n}"),
            MinSupport::Percent { numerator, scale } => {
                let p = 10u64.pow(scale);
                if scale == 0 {
                    write!(f, "{numerator}%")
                } else {
                    write!(f, "{}.{:0w$}%", numerator / p, numerator % p, w = scale as usize)
                }
            }
        }
    }
}

/// `TOKEN[:l[:u]]`: the token occurs between `l` and `u` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub token: String,
    pub min: usize,
    pub max: Option<usize>,
}

impl FromStr for Membership {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let token = parts.next().unwrap_or_default().to_owned();
        if token.is_empty() {
            return Err(format!("missing token in `{s}`"));
        }
        let min = match parts.next() {
            None => 1,
            Some(l) => l.parse().map_err(|_| format!("invalid lower bound in `{s}`"))?,
        };
        let max = match parts.next() {
            None => None,
            Some(u) if u.eq_ignore_ascii_case("inf") => None,
            Some(u) => Some(u.parse().map_err(|_| format!("invalid upper bound in `{s}`"))?),
        };
        if parts.next().is_some() {
            return Err(format!("too many fields in `{s}`"));
        }
        if max.is_some_and(|u| min > u) {
            return Err(format!("lower bound exceeds upper bound in `{s}`"));
        }
        Ok(Membership { token, min, max })
    }
}

/// A maximum gap value, `inf` allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxGapArg(pub MaxGap);

impl FromStr for MaxGapArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("inf") {
            return Ok(MaxGapArg(MaxGap::Unbounded));
        }
        s.trim()
            .parse()
            .map(|n| MaxGapArg(MaxGap::Bounded(n)))
            .map_err(|_| format!("invalid maximum gap `{s}`"))
    }
}

impl fmt::Display for MaxGapArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            MaxGap::Bounded(n) => write!(f, "{n}"),
            MaxGap::Unbounded => f.write_str("inf"),
        }
    }
}

fn parse_gap(s: &str) -> Result<GapSpec, String> {
    s.parse()
}

fn parse_time_limit(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        _ => Err(format!("invalid time limit `{s}` (expected positive seconds)")),
    }
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer, got `{s}`")),
        Ok(n) => Ok(n),
    }
}

/// Mine sequential patterns under gap[M,N] constraints.
#[derive(Debug, Clone, Parser)]
#[command(name = "gapseq", version, about, long_about = None)]
pub struct RunConfig {
    /// Sequence database to mine.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,

    /// Minimum support: an absolute count or a percentage such as `40%`.
    #[arg(long, value_name = "INT|FLOAT%")]
    pub minsup: MinSupport,

    /// Gap constraint `M,N`; `N` may be `inf`.
    #[arg(long, value_name = "M,N", default_value = "0,inf", value_parser = parse_gap)]
    pub gap: GapSpec,

    /// Number of pattern variables; defaults to the longest sequence.
    #[arg(long, value_name = "L", value_parser = parse_positive)]
    pub max_len: Option<usize>,

    #[arg(long, value_name = "K", value_parser = parse_positive)]
    pub min_size: Option<usize>,

    #[arg(long, value_name = "K", value_parser = parse_positive)]
    pub max_size: Option<usize>,

    /// `TOKEN[:l[:u]]`; repeatable. Defaults to l=1, u=inf. `TOKEN:0:0` excludes.
    #[arg(long = "contains", value_name = "TOKEN[:l[:u]]")]
    pub contains: Vec<Membership>,

    /// Print search statistics to stderr.
    #[arg(long)]
    pub stats: bool,

    /// Sort patterns lexicographically by token instead of search order.
    #[arg(long)]
    pub sort: bool,

    #[arg(long, value_name = "SECONDS", value_parser = parse_time_limit)]
    pub time_limit: Option<f64>,

    /// Benchmark: replication factors to mine, comma-separated.
    #[arg(long, value_name = "k1,k2,…", value_delimiter = ',', value_parser = parse_positive)]
    pub bench_replicate: Vec<usize>,

    /// Benchmark: maximum gaps to sweep, comma-separated (`inf` allowed).
    #[arg(long, value_name = "N1,N2,…", value_delimiter = ',')]
    pub bench_gap_sweep: Vec<MaxGapArg>,

    /// Benchmark: run rows concurrently.
    #[arg(long)]
    pub bench_parallel: bool,

    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn is_bench(&self) -> bool {
        !self.bench_replicate.is_empty() || !self.bench_gap_sweep.is_empty()
    }

    /// One-line summary of the effective configuration.
    pub fn echo(&self) -> String {
        let mut s = format!(
            "input={} format={:?} minsup={} {}",
            self.input.display(),
            self.format,
            self.minsup,
            self.gap
        );
        if let Some(l) = self.max_len {
            s.push_str(&format!(" max-len={l}"));
        }
        if let Some(k) = self.min_size {
            s.push_str(&format!(" min-size={k}"));
        }
        if let Some(k) = self.max_size {
            s.push_str(&format!(" max-size={k}"));
        }
        for m in &self.contains {
            let max = m.max.map_or("inf".to_string(), |u| u.to_string());
            s.push_str(&format!(" contains={}:{}:{}", m.token, m.min, max));
        }
        if let Some(t) = self.time_limit {
            s.push_str(&format!(" time-limit={t}s"));
        }
        s
    }
}
