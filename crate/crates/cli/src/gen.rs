//! Query workload generation.
//!
//! Each `(k, t%)` cell gets `count` windows of width `max(1, floor(t% * t_max / 100))`
//! with uniformly drawn starts. A draw is kept only if the window holds at
//! least one temporal k-core, which is the case exactly when its edge
//! core-window skyline is non-empty.

use std::collections::HashMap;
use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tkcore::ecs::build_ecs;
use tkcore::vct::build_vct;
use tkcore::{TemporalGraph, Window};

use crate::query::{place_window, resolve_k, KSpec, Percent, QueryError, ResolvedQuery};

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("cell (k={k_spec}, t={t_pct}): no window of width {width} holds a {k}-core after {attempts} attempts")]
    NoRange { k_spec: String, t_pct: Percent, k: u32, width: u32, attempts: usize },
    #[error(transparent)]
    Query(#[from] QueryError),
}

impl fmt::Display for KSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KSpec::Absolute(k) => write!(f, "{k}"),
            KSpec::Percent(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratedQuery {
    pub k_spec: String,
    pub t_pct: u32,
    #[serde(flatten)]
    pub query: ResolvedQuery,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellSummary {
    pub k_spec: String,
    pub t_pct: u32,
    pub k: u32,
    pub width: u32,
    pub accepted: usize,
    pub rejections: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workload {
    pub queries: Vec<GeneratedQuery>,
    pub cells: Vec<CellSummary>,
}

pub fn has_core(g: &TemporalGraph, k: u32, w: Window) -> bool {
    build_vct(g, k, w)
        .and_then(|vct| build_ecs(g, k, w, &vct))
        .is_ok_and(|ecs| ecs.total_size() > 0)
}

/// Generates `count` queries per cell, deterministically from `seed`.
///
/// Every draw is bounded by `max_attempts`; a cell whose only window is the
/// full time domain is decided by a single check.
pub fn gen_queries(
    g: &TemporalGraph,
    ks: &[KSpec],
    t_pcts: &[Percent],
    count: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<Workload, GenError> {
    let k_max = g.stats().k_max;
    let t_max = g.t_max();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Workload::default();
    for &k_spec in ks {
        let k = resolve_k(k_spec, k_max)?;
        for &t_pct in t_pcts {
            let width = t_pct.of(t_max).min(t_max);
            let placements = (t_max - width + 1) as usize;
            let mut known: HashMap<Window, bool> = HashMap::new();
            let mut cell = CellSummary {
                k_spec: k_spec.to_string(),
                t_pct: t_pct.get(),
                k,
                width,
                accepted: 0,
                rejections: 0,
            };
            for _ in 0..count {
                let mut attempts = 0;
                let w = loop {
                    if attempts == max_attempts.max(1) || (placements == 1 && attempts == 1) {
                        return Err(GenError::NoRange {
                            k_spec: k_spec.to_string(),
                            t_pct,
                            k,
                            width,
                            attempts,
                        });
                    }
                    attempts += 1;
                    let w = place_window(width, t_max, &mut rng);
                    if *known.entry(w).or_insert_with(|| has_core(g, k, w)) {
                        break w;
                    }
                    cell.rejections += 1;
                };
                cell.accepted += 1;
                out.queries.push(GeneratedQuery {
                    k_spec: k_spec.to_string(),
                    t_pct: t_pct.get(),
                    query: ResolvedQuery { k, ts: w.start, te: w.end },
                });
            }
            out.cells.push(cell);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tkcore::fixtures::g14;
    use tkcore::oracle::brute_enumerate;

    fn pct(p: u32) -> Percent {
        Percent::new(p).unwrap()
    }

    #[test]
    fn full_width_is_the_whole_domain() {
        let g = g14();
        let w = gen_queries(&g, &[KSpec::Absolute(2)], &[pct(100)], 1, 7, 50).unwrap();
        assert_eq!(w.queries.len(), 1);
        assert_eq!(w.queries[0].query, ResolvedQuery { k: 2, ts: 1, te: 7 });
        assert_eq!(w.cells[0].rejections, 0);
    }

    #[test]
    fn impossible_cell_fails_with_its_name() {
        let g = g14();
        let err = gen_queries(&g, &[KSpec::Absolute(3)], &[pct(50)], 1, 7, 40).unwrap_err();
        match err {
            GenError::NoRange { k, width, attempts, .. } => {
                assert_eq!((k, width, attempts), (3, 3, 40));
            }
            other => panic!("{other}"),
        }
        let err = gen_queries(&g, &[KSpec::Absolute(3)], &[pct(100)], 1, 7, 40).unwrap_err();
        assert!(matches!(err, GenError::NoRange { attempts: 1, .. }));
        assert!(err.to_string().contains("k=3, t=100%"));
    }

    #[test]
    fn accepted_windows_hold_cores_and_are_deterministic() {
        let g = g14();
        for seed in 0..10 {
            let a = gen_queries(&g, &[KSpec::Absolute(2)], &[pct(58)], 5, seed, 100).unwrap();
            let b = gen_queries(&g, &[KSpec::Absolute(2)], &[pct(58)], 5, seed, 100).unwrap();
            assert_eq!(a, b);
            for q in &a.queries {
                assert_eq!(q.query.te - q.query.ts + 1, 4);
                let cores = brute_enumerate(&g, 2, q.query.window()).unwrap();
                assert!(!cores.cores.is_empty());
            }
        }
    }

    #[test]
    fn has_core_agrees_with_brute_force() {
        let g = g14();
        for ts in 1..=7 {
            for te in ts..=7 {
                let w = Window::new(ts, te);
                let brute = !brute_enumerate(&g, 2, w).unwrap().cores.is_empty();
                assert_eq!(has_core(&g, 2, w), brute, "{w}");
            }
        }
    }
}
