//! Benchmark grid over `(k, t%)` cells.

use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;
use tkcore::enumeration::{CollectSink, SinkMode};
use tkcore::TemporalGraph;

use crate::gen::{gen_queries, GenError};
use crate::query::{run_query, Algorithm, KSpec, Percent, RunReport};

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub ks: Vec<KSpec>,
    pub t_pcts: Vec<Percent>,
    pub queries: usize,
    pub seed: u64,
    /// Wall-clock allowance per cell and algorithm.
    pub budget: Duration,
    pub algorithms: Vec<Algorithm>,
    pub max_attempts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    TimedOut,
    NoRange,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub k_spec: String,
    pub t_pct: u32,
    pub k: Option<u32>,
    pub width: Option<u32>,
    pub queries_run: usize,
    pub status: CellStatus,
    pub avg_total_ms: Option<f64>,
    pub avg_vct_ms: Option<f64>,
    pub avg_ecs_ms: Option<f64>,
    pub avg_enum_ms: Option<f64>,
    pub avg_cores: Option<f64>,
    pub avg_result_size: Option<f64>,
    pub avg_vct_size: Option<f64>,
    pub avg_ecs_size: Option<f64>,
}

fn mean(reports: &[RunReport], f: impl Fn(&RunReport) -> f64) -> Option<f64> {
    (!reports.is_empty()).then(|| reports.iter().map(f).sum::<f64>() / reports.len() as f64)
}

fn row(algorithm: Algorithm, k_spec: String, t_pct: u32, status: CellStatus, runs: &[RunReport]) -> BenchRow {
    BenchRow {
        algorithm,
        k_spec,
        t_pct,
        k: runs.first().map(|r| r.k),
        width: runs.first().map(|r| r.te - r.ts + 1),
        queries_run: runs.len(),
        status,
        avg_total_ms: mean(runs, RunReport::total_ms),
        avg_vct_ms: mean(runs, |r| r.vct_ms),
        avg_ecs_ms: mean(runs, |r| r.ecs_ms),
        avg_enum_ms: mean(runs, |r| r.enum_ms),
        avg_cores: mean(runs, |r| r.cores_emitted as f64),
        avg_result_size: mean(runs, |r| r.total_result_size as f64),
        avg_vct_size: mean(runs, |r| r.vct_size as f64),
        avg_ecs_size: mean(runs, |r| r.ecs_size as f64),
    }
}

/// Runs every cell; a cell that exceeds its budget keeps the averages of the
/// queries it finished and is marked timed out.
pub fn bench(g: &TemporalGraph, opts: &BenchOptions) -> tkcore::Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &k_spec in &opts.ks {
        for &t_pct in &opts.t_pcts {
            let workload = match gen_queries(g, &[k_spec], &[t_pct], opts.queries, opts.seed, opts.max_attempts) {
                Ok(w) => w,
                Err(GenError::NoRange { .. } | GenError::Query(_)) => {
                    for &algo in &opts.algorithms {
                        rows.push(row(algo, k_spec.to_string(), t_pct.get(), CellStatus::NoRange, &[]));
                    }
                    continue;
                }
            };
            for &algo in &opts.algorithms {
                let deadline = Instant::now() + opts.budget;
                let mut runs = Vec::new();
                let mut status = CellStatus::Ok;
                for q in &workload.queries {
                    let mut sink = CollectSink::new(SinkMode::Count);
                    let report = run_query(g, q.query, algo, &mut sink, Some(deadline))?;
                    if report.timed_out {
                        status = CellStatus::TimedOut;
                        break;
                    }
                    runs.push(report);
                    if Instant::now() >= deadline {
                        status = CellStatus::TimedOut;
                        break;
                    }
                }
                if runs.len() == workload.queries.len() {
                    status = CellStatus::Ok;
                }
                rows.push(row(algo, k_spec.to_string(), t_pct.get(), status, &runs));
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Every cell that ran timed out.
pub fn all_timed_out(rows: &[BenchRow]) -> bool {
    let ran: Vec<&BenchRow> = rows.iter().filter(|r| r.status != CellStatus::NoRange).collect();
    !ran.is_empty() && ran.iter().all(|r| r.status == CellStatus::TimedOut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tkcore::fixtures::g14;

    fn opts(budget: Duration) -> BenchOptions {
        BenchOptions {
            ks: vec![KSpec::Percent(Percent::new(100).unwrap()), KSpec::Absolute(3)],
            t_pcts: vec![Percent::new(60).unwrap(), Percent::new(100).unwrap()],
            queries: 3,
            seed: 1,
            budget,
            algorithms: vec![Algorithm::Enum, Algorithm::Enumbase, Algorithm::Brute],
            max_attempts: 50,
        }
    }

    #[test]
    fn fixture_grid_is_populated() {
        let rows = bench(&g14(), &opts(Duration::from_secs(10))).unwrap();
        assert_eq!(rows.len(), 12);
        for r in &rows {
            if r.k_spec == "3" {
                assert_eq!(r.status, CellStatus::NoRange);
            } else {
                assert_eq!(r.status, CellStatus::Ok);
                assert_eq!(r.queries_run, 3);
                assert!(r.avg_cores.unwrap() >= 1.0);
            }
        }
        // Same workload for every algorithm in a cell.
        let full: Vec<f64> = rows
            .iter()
            .filter(|r| r.k_spec == "100%" && r.t_pct == 100)
            .map(|r| r.avg_result_size.unwrap())
            .collect();
        assert_eq!(full, vec![105.0; 3]);
        let mut csv = Vec::new();
        write_csv(&rows, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("algorithm,k_spec,t_pct,k,width,queries_run,status"));
        assert_eq!(text.lines().count(), 13);
        assert!(!all_timed_out(&rows));
    }

    #[test]
    fn zero_budget_times_out() {
        let rows = bench(&g14(), &opts(Duration::ZERO)).unwrap();
        assert!(rows.iter().all(|r| r.status != CellStatus::Ok));
        assert!(all_timed_out(&rows));
    }
}
