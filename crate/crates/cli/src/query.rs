//! Query specification, resolution against a graph, and the query pipeline.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tkcore::ecs::build_ecs;
use tkcore::enumeration::{enum_all, enum_base, replay_sorted, Emission, ResultSink};
use tkcore::oracle::brute_enumerate_until;
use tkcore::vct::build_vct;
use tkcore::{TemporalGraph, Time, Window};

use crate::memory;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("k resolves to 0; k must be at least 1")]
    ZeroK,
    #[error("percentage {0} is outside (0, 100]")]
    Percent(u32),
    #[error("range [{lo},{hi}] is outside the time domain of the graph")]
    OutOfDomain { lo: i64, hi: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Enum,
    Enumbase,
    Brute,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Enum => "enum",
            Algorithm::Enumbase => "enumbase",
            Algorithm::Brute => "brute",
        })
    }
}

/// A percentage in `(0, 100]`, written `30` or `30%`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Percent(u32);

impl Percent {
    pub fn new(p: u32) -> Result<Self, QueryError> {
        if (1..=100).contains(&p) {
            Ok(Percent(p))
        } else {
            Err(QueryError::Percent(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `max(1, floor(p * of / 100))`.
    pub fn of(self, of: u32) -> u32 {
        ((u64::from(self.0) * u64::from(of) / 100) as u32).max(1)
    }
}

impl FromStr for Percent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s.trim().trim_end_matches('%');
        let p: u32 = digits.parse().map_err(|_| format!("not a percentage: {s:?}"))?;
        Percent::new(p).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KSpec {
    Absolute(u32),
    /// Share of the graph's `k_max`.
    Percent(Percent),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeSpec {
    /// Compressed times.
    Explicit(Window),
    /// Raw timestamps, rounded inwards to the nearest present times.
    Raw { lo: i64, hi: i64 },
    /// A window of `max(1, floor(p * t_max / 100))` times with a start drawn
    /// uniformly from the seed.
    Percent(Percent),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuerySpec {
    pub k: KSpec,
    pub range: RangeSpec,
    pub seed: u64,
    pub algorithm: Algorithm,
}

impl Default for QuerySpec {
    fn default() -> Self {
        QuerySpec {
            k: KSpec::Percent(Percent(30)),
            range: RangeSpec::Percent(Percent(10)),
            seed: 0,
            algorithm: Algorithm::Enum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvedQuery {
    pub k: u32,
    pub ts: Time,
    pub te: Time,
}

impl ResolvedQuery {
    pub fn window(&self) -> Window {
        Window::new(self.ts, self.te)
    }
}

pub fn resolve_k(k: KSpec, k_max: u32) -> Result<u32, QueryError> {
    match k {
        KSpec::Absolute(0) => Err(QueryError::ZeroK),
        KSpec::Absolute(k) => Ok(k),
        KSpec::Percent(p) => Ok(p.of(k_max)),
    }
}

/// Uniformly placed window of `width` times inside `[1, t_max]`.
pub fn place_window(width: u32, t_max: Time, rng: &mut impl Rng) -> Window {
    let width = width.clamp(1, t_max);
    let start = rng.gen_range(1..=t_max - width + 1);
    Window::new(start, start + width - 1)
}

pub fn resolve_range(g: &TemporalGraph, range: RangeSpec, seed: u64) -> Result<Window, QueryError> {
    let t_max = g.t_max();
    match range {
        RangeSpec::Explicit(w) => {
            if w.start >= 1 && w.start <= w.end && w.end <= t_max {
                Ok(w)
            } else {
                Err(QueryError::OutOfDomain { lo: w.start.into(), hi: w.end.into() })
            }
        }
        RangeSpec::Raw { lo, hi } => {
            let td = g.time_domain();
            match (td.ceil_rank(lo), td.floor_rank(hi)) {
                (Some(a), Some(b)) if lo <= hi && a <= b => Ok(Window::new(a, b)),
                _ => Err(QueryError::OutOfDomain { lo, hi }),
            }
        }
        RangeSpec::Percent(p) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(place_window(p.of(t_max), t_max, &mut rng))
        }
    }
}

pub fn resolve(g: &TemporalGraph, spec: &QuerySpec) -> Result<ResolvedQuery, QueryError> {
    let k = resolve_k(spec.k, g.stats().k_max)?;
    let w = resolve_range(g, spec.range, spec.seed)?;
    Ok(ResolvedQuery { k, ts: w.start, te: w.end })
}

/// Per-query figures, reported next to the result stream.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub k: u32,
    pub ts: Time,
    pub te: Time,
    pub cores_emitted: u64,
    pub total_result_size: u64,
    pub vct_size: usize,
    pub ecs_size: usize,
    /// List operations of the sweep; only for `enum`.
    pub node_ops: Option<u64>,
    pub vct_ms: f64,
    pub ecs_ms: f64,
    pub enum_ms: f64,
    /// Approximate heap high-water mark while the query ran.
    pub peak_memory_bytes: Option<usize>,
    /// The brute-force enumerator hit its deadline; nothing was emitted.
    pub timed_out: bool,
}

impl RunReport {
    pub fn total_ms(&self) -> f64 {
        self.vct_ms + self.ecs_ms + self.enum_ms
    }
}

struct Tally<'a> {
    inner: &'a mut dyn ResultSink,
    cores: u64,
    size: u64,
}

impl ResultSink for Tally<'_> {
    fn accept(&mut self, core: &Emission<'_>) {
        self.cores += 1;
        self.size += core.size() as u64;
        self.inner.accept(core);
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Builds both indexes, then runs `algorithm` into `sink`.
///
/// `deadline` only bounds the brute-force enumerator, which checks it
/// between windows.
pub fn run_query(
    g: &TemporalGraph,
    q: ResolvedQuery,
    algorithm: Algorithm,
    sink: &mut dyn ResultSink,
    deadline: Option<Instant>,
) -> tkcore::Result<RunReport> {
    memory::reset_peak();
    let range = q.window();
    let start = Instant::now();
    let vct = build_vct(g, q.k, range)?;
    let vct_time = start.elapsed();
    let start = Instant::now();
    let ecs = build_ecs(g, q.k, range, &vct)?;
    let ecs_time = start.elapsed();

    let mut tally = Tally { inner: sink, cores: 0, size: 0 };
    let mut node_ops = None;
    let mut timed_out = false;
    let start = Instant::now();
    match algorithm {
        Algorithm::Enum => {
            node_ops = Some(enum_all(&ecs, &mut tally).node_ops);
        }
        Algorithm::Enumbase => {
            enum_base(&ecs, &mut tally);
        }
        Algorithm::Brute => match brute_enumerate_until(g, q.k, range, deadline)? {
            Some(b) => replay_sorted(b.cores.iter().map(|c| (c.tti, c.edges.as_slice())), &mut tally),
            None => timed_out = true,
        },
    }
    let enum_time = start.elapsed();

    Ok(RunReport {
        algorithm,
        k: q.k,
        ts: q.ts,
        te: q.te,
        cores_emitted: tally.cores,
        total_result_size: tally.size,
        vct_size: vct.total_size(),
        ecs_size: ecs.total_size(),
        node_ops,
        vct_ms: ms(vct_time),
        ecs_ms: ms(ecs_time),
        enum_ms: ms(enum_time),
        peak_memory_bytes: memory::peak_bytes(),
        timed_out,
    })
}
