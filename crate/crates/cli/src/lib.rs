//! Command-line front end for the `gapseq` miner.

pub mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use gapseq::{
    parse_plain, parse_spmf, solve_with, AuxConstraint, GapSpec, Item, MaxGap, PatternModel, SearchOptions,
    SearchStats, SequenceDatabase,
};

pub use config::{InputFormat, MaxGapArg, Membership, MinSupport, RunConfig};

/// Exit code used when the time limit interrupts the search.
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Debug, Clone)]
pub struct RunReport {
    pub patterns: u64,
    pub stats: SearchStats,
    pub elapsed: Duration,
    pub minsup: usize,
    pub config: String,
}

impl RunReport {
    pub fn timed_out(&self) -> bool {
        self.stats.timed_out
    }

    /// Statistics block as printed with `--stats`.
    pub fn stats_block(&self) -> String {
        format!(
            "# patterns: {}\n# nodes: {}\n# propagations: {}\n# elapsed_ms: {:.3}\n# config: {} (absolute minsup {})\n",
            self.patterns,
            self.stats.nodes,
            self.stats.propagations,
            self.elapsed.as_secs_f64() * 1e3,
            self.config,
            self.minsup
        )
    }
}

/// One row of the benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub replication: usize,
    pub max_gap: MaxGapArg,
    pub minsup: usize,
    pub patterns: u64,
    pub nodes: u64,
    pub propagations: u64,
    pub elapsed_ms: f64,
    pub timed_out: bool,
}

pub const BENCH_HEADER: &str = "replication,max_gap,minsup,patterns,nodes,propagations,elapsed_ms,timed_out";

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3},{}",
            self.replication,
            self.max_gap,
            self.minsup,
            self.patterns,
            self.nodes,
            self.propagations,
            self.elapsed_ms,
            self.timed_out
        )
    }
}

pub fn load_database(config: &RunConfig) -> anyhow::Result<SequenceDatabase> {
    let bytes =
        std::fs::read(&config.input).with_context(|| format!("cannot read {}", config.input.display()))?;
    let format = match config.format {
        InputFormat::Auto if looks_like_spmf(&bytes) => InputFormat::Spmf,
        InputFormat::Auto => InputFormat::Plain,
        f => f,
    };
    let db = match format {
        InputFormat::Spmf => parse_spmf(&bytes),
        _ => parse_plain(&bytes),
    };
    db.with_context(|| format!("cannot parse {}", config.input.display()))
}

fn looks_like_spmf(bytes: &[u8]) -> bool {
    String::from_utf8_lossy(bytes)
        .lines()
        .any(|l| l.split_whitespace().next_back() == Some("-2"))
}

/// Builds the search model for `db` with the given absolute minimum support.
pub fn build_model(
    config: &RunConfig,
    db: &SequenceDatabase,
    gap: GapSpec,
    minsup: usize,
) -> anyhow::Result<PatternModel> {
    let mut model = PatternModel::new(db, gap, minsup);
    if let Some(l) = config.max_len {
        model = model.with_max_len(l);
    }
    if let Some(k) = config.min_size {
        if k > model.ell {
            bail!(
                "minimum size {k} exceeds the maximum pattern length {}",
                model.ell
            );
        }
        model = model.with_constraint(AuxConstraint::MinSize(k));
    }
    if let Some(k) = config.max_size {
        model = model.with_constraint(AuxConstraint::MaxSize(k));
    }
    for m in &config.contains {
        match db.catalog().get(&m.token) {
            Some(item) => {
                model = model.with_constraint(AuxConstraint::Membership {
                    items: vec![item],
                    min: m.min,
                    max: m.max,
                })
            }
            // an absent token can never occur, which only matters if required
            None if m.min == 0 => {}
            None => bail!("--contains token `{}` does not occur in the database", m.token),
        }
    }
    model.validate(db)?;
    Ok(model)
}

fn deadline(config: &RunConfig, start: Instant) -> Option<Instant> {
    config.time_limit.map(|t| start + Duration::from_secs_f64(t))
}

fn format_pattern(db: &SequenceDatabase, items: &[Item], support: usize) -> String {
    let mut line = String::new();
    for tok in db.tokens(items) {
        line.push_str(tok);
        line.push(' ');
    }
    line.push_str(&format!("#SUP: {support}\n"));
    line
}

/// Mines `db` according to `config` and writes one line per pattern to `out`.
pub fn mine_to(config: &RunConfig, db: &SequenceDatabase, out: &mut dyn Write) -> anyhow::Result<RunReport> {
    let minsup = config.minsup.resolve(db.len());
    let model = build_model(config, db, config.gap, minsup)?;
    let start = Instant::now();
    let options = SearchOptions {
        deadline: deadline(config, start),
        roots: None,
    };
    let mut write_err: Option<io::Error> = None;
    let mut buffered: Vec<(Vec<Item>, usize)> = Vec::new();
    let stats = solve_with(db, &model, &options, |items, support| {
        if config.sort {
            buffered.push((items.to_vec(), support));
        } else if write_err.is_none() {
            if let Err(e) = out.write_all(format_pattern(db, items, support).as_bytes()) {
                write_err = Some(e);
            }
        }
    })?;
    let elapsed = start.elapsed();
    if let Some(e) = write_err {
        return Err(e).context("cannot write output");
    }
    if config.sort {
        let mut lines: Vec<(Vec<&str>, usize)> = buffered
            .iter()
            .map(|(items, support)| (db.tokens(items).collect(), *support))
            .collect();
        lines.sort();
        for (toks, support) in &lines {
            writeln!(out, "{} #SUP: {support}", toks.join(" ")).context("cannot write output")?;
        }
    }
    out.flush().context("cannot write output")?;
    Ok(RunReport {
        patterns: stats.patterns,
        stats,
        elapsed,
        minsup,
        config: config.echo(),
    })
}

/// Runs every (replication, max gap) combination requested by the bench flags.
pub fn bench(config: &RunConfig, db: &SequenceDatabase) -> anyhow::Result<Vec<BenchRow>> {
    let ks = if config.bench_replicate.is_empty() {
        vec![1]
    } else {
        config.bench_replicate.clone()
    };
    let gaps = if config.bench_gap_sweep.is_empty() {
        vec![MaxGapArg(config.gap.max_gap())]
    } else {
        config.bench_gap_sweep.clone()
    };
    let replicated: Vec<SequenceDatabase> = ks.iter().map(|&k| db.replicate(k)).collect::<Result<_, _>>()?;
    let mut jobs = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        for &n in &gaps {
            let gap = match n.0 {
                MaxGap::Bounded(n) => GapSpec::bounded(config.gap.min_gap(), n)
                    .with_context(|| format!("swept maximum gap {n} is below the minimum gap"))?,
                MaxGap::Unbounded => GapSpec::unbounded(config.gap.min_gap()),
            };
            let minsup = config.minsup.resolve_replicated(db.len(), k);
            let model = build_model(config, &replicated[i], gap, minsup)?;
            jobs.push((i, n, minsup, model));
        }
    }

    let run_one =
        |(i, n, minsup, model): &(usize, MaxGapArg, usize, PatternModel)| -> anyhow::Result<BenchRow> {
            let start = Instant::now();
            let options = SearchOptions {
                deadline: deadline(config, start),
                roots: None,
            };
            let stats = solve_with(&replicated[*i], model, &options, |_, _| {})?;
            Ok(BenchRow {
                replication: ks[*i],
                max_gap: *n,
                minsup: *minsup,
                patterns: stats.patterns,
                nodes: stats.nodes,
                propagations: stats.propagations,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                timed_out: stats.timed_out,
            })
        };
    if config.bench_parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = jobs.iter().map(|job| scope.spawn(|| run_one(job))).collect();
            handles
                .into_iter()
                .map(|h| {
                    h.join()
                        .map_err(|_| anyhow::anyhow!("benchmark thread panicked"))?
                })
                .collect()
        })
    } else {
        jobs.iter().map(run_one).collect()
    }
}

fn open_output(config: &RunConfig) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Full command: load, mine or bench, write. Returns the process exit code.
pub fn run(config: &RunConfig) -> anyhow::Result<i32> {
    let db = load_database(config)?;
    let mut out = open_output(config)?;
    if config.is_bench() {
        let rows = bench(config, &db)?;
        writeln!(out, "{BENCH_HEADER}")?;
        for row in &rows {
            writeln!(out, "{}", row.to_csv())?;
        }
        out.flush()?;
        return Ok(if rows.iter().any(|r| r.timed_out) {
            EXIT_TIMEOUT
        } else {
            0
        });
    }
    let report = mine_to(config, &db, &mut out)?;
    drop(out);
    if config.stats {
        let s = db.stats();
        eprint!(
            "# sequences: {}\n# items: {}\n# avg_length: {:.2}\n# max_length: {}\n{}",
            s.num_sequences,
            s.num_items,
            s.avg_length,
            s.max_length,
            report.stats_block()
        );
    }
    if report.timed_out() {
        eprintln!("TIMEOUT");
        return Ok(EXIT_TIMEOUT);
    }
    Ok(0)
}
