use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use tkcore::enumeration::SinkMode;
use tkcore::Window;
use tkcore_cli::bench::{all_timed_out, bench, write_csv, BenchOptions};
use tkcore_cli::gen::gen_queries;
use tkcore_cli::memory::CountingAlloc;
use tkcore_cli::output::JsonLinesSink;
use tkcore_cli::query::{resolve, run_query, Algorithm, KSpec, Percent, QuerySpec, RangeSpec};
use tkcore_cli::verify::{verify, VerifyOptions};
use tkcore_cli::load_graph;

#[global_allocator]
static ALLOC: CountingAlloc = CountingAlloc;

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "tkcore", version, about = "Enumerate temporal k-cores of an edge-list graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print n, m, t_max, k_max and the average degree.
    Stats {
        #[arg(long)]
        input: PathBuf,
    },
    /// Enumerate all temporal k-cores of one query range.
    Query(QueryArgs),
    /// Generate query ranges that each hold at least one core.
    Gen(GenArgs),
    /// Check every stage against the brute-force oracle.
    Verify(VerifyArgs),
    /// Time the algorithms over a grid of (k, t%) cells.
    Bench(BenchArgs),
}

#[derive(Args)]
struct KArgs {
    /// Absolute k.
    #[arg(long, conflicts_with = "k_pct")]
    k: Option<u32>,
    /// k as a share of k_max, floored, at least 1 [default: 30].
    #[arg(long)]
    k_pct: Option<Percent>,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    k: KArgs,
    /// Range start in compressed time (1-based rank of distinct timestamps).
    #[arg(long, requires = "te", conflicts_with_all = ["raw_ts", "t_pct"])]
    ts: Option<u32>,
    #[arg(long, requires = "ts")]
    te: Option<u32>,
    /// Range start as a raw input timestamp.
    #[arg(long, requires = "raw_te", conflicts_with = "t_pct")]
    raw_ts: Option<i64>,
    #[arg(long, requires = "raw_ts")]
    raw_te: Option<i64>,
    /// Range width as a share of t_max, placed uniformly at random by --seed [default: 10].
    #[arg(long)]
    t_pct: Option<Percent>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Algorithm::Enum)]
    algo: Algorithm,
    /// count | sizes | delta | full
    #[arg(long, default_value = "count")]
    mode: SinkMode,
    /// Seconds allowed for the brute-force enumerator.
    #[arg(long)]
    budget: Option<f64>,
    /// Result stream destination [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated absolute k values.
    #[arg(long, value_delimiter = ',', conflicts_with = "k_pct")]
    k: Vec<u32>,
    /// Comma-separated shares of k_max [default: 30].
    #[arg(long, value_delimiter = ',')]
    k_pct: Vec<Percent>,
    /// Comma-separated shares of t_max [default: 10].
    #[arg(long, value_delimiter = ',')]
    t_pct: Vec<Percent>,
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draws per query before a cell is declared impossible.
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also check this graph, on its first 30 timestamps.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Number of seeded random graphs.
    #[arg(long, default_value_t = 200)]
    queries: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where a minimized failing instance is written.
    #[arg(long, default_value = "verify-repro.txt")]
    out: PathBuf,
    /// Drop one skyline window before comparing (negative control).
    #[arg(long, hide = true)]
    corrupt_ecs: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', conflicts_with = "k_pct")]
    k: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    k_pct: Vec<Percent>,
    #[arg(long, value_delimiter = ',')]
    t_pct: Vec<Percent>,
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds per cell and algorithm.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::Enum, Algorithm::Enumbase, Algorithm::Brute])]
    algo: Vec<Algorithm>,
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
    /// CSV destination [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

fn k_specs(k: &[u32], k_pct: &[Percent]) -> Vec<KSpec> {
    if !k.is_empty() {
        k.iter().map(|&k| KSpec::Absolute(k)).collect()
    } else if !k_pct.is_empty() {
        k_pct.iter().map(|&p| KSpec::Percent(p)).collect()
    } else {
        vec![KSpec::Percent(Percent::new(30).unwrap())]
    }
}

fn t_pcts(t_pct: &[Percent]) -> Vec<Percent> {
    if t_pct.is_empty() {
        vec![Percent::new(10).unwrap()]
    } else {
        t_pct.to_vec()
    }
}

fn writer(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn budget(seconds: f64) -> anyhow::Result<Duration> {
    Duration::try_from_secs_f64(seconds).map_err(|_| anyhow::anyhow!("invalid budget {seconds}"))
}

fn cmd_query(a: QueryArgs) -> anyhow::Result<u8> {
    let g = load_graph(&a.input)?;
    let range = match (a.ts, a.te, a.raw_ts, a.raw_te, a.t_pct) {
        (Some(ts), Some(te), ..) => RangeSpec::Explicit(Window::new(ts, te)),
        (_, _, Some(lo), Some(hi), _) => RangeSpec::Raw { lo, hi },
        (.., Some(p)) => RangeSpec::Percent(p),
        _ => QuerySpec::default().range,
    };
    let spec = QuerySpec {
        k: k_specs(a.k.k.as_slice(), a.k.k_pct.as_slice())[0],
        range,
        seed: a.seed,
        algorithm: a.algo,
    };
    let q = resolve(&g, &spec)?;
    let deadline = a.budget.map(budget).transpose()?.map(|d| Instant::now() + d);

    let mut sink = JsonLinesSink::new(&g, a.mode, writer(a.out.as_deref())?);
    let report = run_query(&g, q, spec.algorithm, &mut sink, deadline)?;
    let mut out = sink.finish()?;
    if a.mode == SinkMode::Count {
        writeln!(out, "cores={} |R|={}", report.cores_emitted, report.total_result_size)?;
    }
    out.flush()?;
    eprintln!("{}", serde_json::to_string(&report)?);
    if report.timed_out {
        bail!("brute-force enumeration exceeded its budget");
    }
    Ok(0)
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<u8> {
    let g = load_graph(&a.input)?;
    let workload = gen_queries(&g, &k_specs(&a.k, &a.k_pct), &t_pcts(&a.t_pct), a.queries, a.seed, a.max_attempts)?;
    let mut out = writer(a.out.as_deref())?;
    for q in &workload.queries {
        serde_json::to_writer(&mut out, q)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    for cell in &workload.cells {
        eprintln!("{}", serde_json::to_string(cell)?);
    }
    Ok(0)
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let input = a.input.as_deref().map(load_graph).transpose()?;
    let opts = VerifyOptions {
        random_graphs: a.queries,
        seed: a.seed,
        corrupt_ecs: a.corrupt_ecs,
        repro_path: a.out,
        ..VerifyOptions::default()
    };
    let report = verify(input.as_ref(), &opts)?;
    println!("instances={} mismatches={}", report.instances, report.mismatches.len());
    for m in report.mismatches.iter().take(20) {
        println!("mismatch stage={} k={} range={} source={}", m.stage, m.k, m.range, m.source);
    }
    if let Some(p) = &report.repro {
        println!("minimized reproduction written to {}", p.display());
    }
    Ok(if report.passed() { 0 } else { EXIT_VERIFY })
}

fn cmd_bench(a: BenchArgs) -> anyhow::Result<u8> {
    let g = load_graph(&a.input)?;
    let opts = BenchOptions {
        ks: k_specs(&a.k, &a.k_pct),
        t_pcts: t_pcts(&a.t_pct),
        queries: a.queries,
        seed: a.seed,
        budget: budget(a.budget)?,
        algorithms: a.algo,
        max_attempts: a.max_attempts,
    };
    let rows = bench(&g, &opts)?;
    write_csv(&rows, writer(a.out.as_deref())?)?;
    Ok(if all_timed_out(&rows) { EXIT_BUDGET } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Stats { input } => load_graph(&input).map(|g| {
            println!("{}", g.stats());
            0
        }),
        Command::Query(a) => cmd_query(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
