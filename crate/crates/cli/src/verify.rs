//! Oracle harness: every stage of the pipeline against its brute-force twin.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use tkcore::ecs::{build_ecs, EcsIndex};
use tkcore::enumeration::{enum_all, enum_base, CollectSink, SinkMode};
use tkcore::fixtures::g14;
use tkcore::oracle::{brute_ecs, brute_enumerate, brute_vct};
use tkcore::synthetic::fuzz_instance;
use tkcore::vct::build_vct;
use tkcore::{EdgeId, TemporalGraph, Window};

/// Input graphs are checked on a prefix of their time domain, since the
/// brute-force side is quadratic in the number of timestamps.
pub const INPUT_TIME_PREFIX: u32 = 30;
/// Upper bound on oracle runs spent shrinking one failing instance.
const MINIMIZE_CHECKS: usize = 5_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Vct,
    Ecs,
    Enum,
    EnumBase,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Vct => "vct",
            Stage::Ecs => "ecs",
            Stage::Enum => "enum",
            Stage::EnumBase => "enumbase",
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub random_graphs: u64,
    pub seed: u64,
    pub ks: Vec<u32>,
    /// Negative control: drop one window from every built skyline.
    pub corrupt_ecs: bool,
    pub repro_path: PathBuf,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            random_graphs: 200,
            seed: 0,
            ks: vec![1, 2, 3, 4],
            corrupt_ecs: false,
            repro_path: PathBuf::from("verify-repro.txt"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Mismatch {
    pub source: String,
    pub k: u32,
    pub range: Window,
    pub stage: Stage,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub instances: usize,
    pub mismatches: Vec<Mismatch>,
    /// Where the minimized reproduction of the first mismatch was written.
    pub repro: Option<PathBuf>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn corrupt(ecs: &mut EcsIndex) {
    let mut dropped = false;
    ecs.retain_windows(|_, _| {
        let keep = dropped;
        dropped = true;
        keep
    });
}

fn cores(sink: CollectSink) -> Vec<(Window, Vec<EdgeId>)> {
    sink.results.into_iter().map(|r| (r.tti, r.edges)).collect()
}

/// First stage at which the fast pipeline disagrees with the oracle.
pub fn first_mismatch(g: &TemporalGraph, k: u32, range: Window, corrupt_ecs: bool) -> Option<Stage> {
    let vct = build_vct(g, k, range).ok()?;
    if brute_vct(g, k, range).ok()? != vct {
        return Some(Stage::Vct);
    }
    let mut ecs = build_ecs(g, k, range, &vct).ok()?;
    if corrupt_ecs {
        corrupt(&mut ecs);
    }
    if brute_ecs(g, k, range).ok()? != ecs {
        return Some(Stage::Ecs);
    }
    let expected: Vec<(Window, Vec<EdgeId>)> = brute_enumerate(g, k, range)
        .ok()?
        .cores
        .into_iter()
        .map(|c| (c.tti, c.edges))
        .collect();
    let mut fast = CollectSink::new(SinkMode::Full);
    enum_all(&ecs, &mut fast);
    if cores(fast) != expected {
        return Some(Stage::Enum);
    }
    let mut base = CollectSink::new(SinkMode::Full);
    enum_base(&ecs, &mut base);
    if cores(base) != expected {
        return Some(Stage::EnumBase);
    }
    None
}

/// A graph as raw triples plus the query range in raw time.
#[derive(Clone, Debug)]
struct Repro {
    triples: Vec<(u64, u64, i64)>,
    k: u32,
    raw: (i64, i64),
}

impl Repro {
    fn new(g: &TemporalGraph, k: u32, range: Window) -> Self {
        let td = g.time_domain();
        let triples = g
            .edges()
            .iter()
            .map(|e| (g.label(e.u), g.label(e.v), td.raw_of(e.t).unwrap()))
            .collect();
        let raw = (td.raw_of(range.start).unwrap(), td.raw_of(range.end).unwrap());
        Repro { triples, k, raw }
    }

    fn materialize(&self) -> Option<(TemporalGraph, Window)> {
        let g = TemporalGraph::from_raw_edges(self.triples.iter().copied()).ok()?;
        let td = g.time_domain();
        let (a, b) = (td.ceil_rank(self.raw.0)?, td.floor_rank(self.raw.1)?);
        (a <= b).then(|| (g, Window::new(a, b)))
    }

    fn fails(&self, corrupt_ecs: bool) -> Option<Stage> {
        let (g, w) = self.materialize()?;
        first_mismatch(&g, self.k, w, corrupt_ecs)
    }
}

/// Greedily drops edges while the mismatch persists.
fn minimize(start: Repro, corrupt_ecs: bool) -> (Repro, Stage) {
    let mut cur = start;
    let mut stage = cur.fails(corrupt_ecs).expect("instance fails");
    let mut budget = MINIMIZE_CHECKS;
    let mut shrunk = true;
    while shrunk && budget > 0 {
        shrunk = false;
        let mut i = 0;
        while i < cur.triples.len() && budget > 0 {
            budget -= 1;
            let mut cand = cur.clone();
            cand.triples.remove(i);
            match cand.fails(corrupt_ecs) {
                Some(s) => {
                    cur = cand;
                    stage = s;
                    shrunk = true;
                }
                None => i += 1,
            }
        }
    }
    (cur, stage)
}

fn dump(path: &Path, repro: &Repro, stage: Stage, source: &str) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# mismatch at stage {stage} (from {source})")?;
    writeln!(out, "# query: k={} raw range [{},{}]", repro.k, repro.raw.0, repro.raw.1)?;
    writeln!(out, "# u v t")?;
    for (u, v, t) in &repro.triples {
        writeln!(out, "{u} {v} {t}")?;
    }
    out.flush()
}

/// Checks the fixture, `random_graphs` seeded random graphs and, if given,
/// a prefix of `input`. The first mismatch is minimized and dumped.
pub fn verify(input: Option<&TemporalGraph>, opts: &VerifyOptions) -> std::io::Result<VerifyReport> {
    let mut report = VerifyReport::default();
    let mut first: Option<(Repro, String)> = None;
    let mut run = |g: &TemporalGraph, k: u32, range: Window, source: String, report: &mut VerifyReport| {
        report.instances += 1;
        if let Some(stage) = first_mismatch(g, k, range, opts.corrupt_ecs) {
            if first.is_none() {
                first = Some((Repro::new(g, k, range), source.clone()));
            }
            report.mismatches.push(Mismatch { source, k, range, stage });
        }
    };

    let fixture = g14();
    for &k in &opts.ks {
        run(&fixture, k, fixture.full_range(), "fixture".into(), &mut report);
    }
    run(&fixture, 2, Window::new(1, 4), "fixture".into(), &mut report);

    for i in 0..opts.random_graphs {
        let seed = opts.seed.wrapping_add(i);
        let g = fuzz_instance(seed);
        for &k in &opts.ks {
            run(&g, k, g.full_range(), format!("random graph seed {seed}"), &mut report);
        }
    }

    if let Some(g) = input {
        let range = Window::new(1, g.t_max().min(INPUT_TIME_PREFIX));
        for &k in &opts.ks {
            run(g, k, range, "input".into(), &mut report);
        }
    }

    if let Some((repro, source)) = first {
        let (small, stage) = minimize(repro, opts.corrupt_ecs);
        dump(&opts.repro_path, &small, stage, &source)?;
        report.repro = Some(opts.repro_path.clone());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_fixture_passes() {
        let g = g14();
        assert_eq!(first_mismatch(&g, 2, g.full_range(), false), None);
    }

    #[test]
    fn corruption_is_caught_and_minimized() {
        let dir = tempfile::tempdir().unwrap();
        let opts = VerifyOptions {
            random_graphs: 3,
            corrupt_ecs: true,
            repro_path: dir.path().join("repro.txt"),
            ..VerifyOptions::default()
        };
        let report = verify(None, &opts).unwrap();
        assert!(!report.passed());
        assert_eq!(report.mismatches[0].stage, Stage::Ecs);
        let text = std::fs::read_to_string(dir.path().join("repro.txt")).unwrap();
        let edges = text.lines().filter(|l| !l.starts_with('#')).count();
        // A single k-core needs at least k + 1 vertices; k = 1 shrinks to one edge.
        assert!(edges <= 3, "{text}");
        assert!(text.contains("stage ecs"));
    }

    #[test]
    fn small_random_corpus_passes() {
        let opts = VerifyOptions { random_graphs: 10, ..VerifyOptions::default() };
        let report = verify(None, &opts).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.instances, 4 + 1 + 40);
    }
}
