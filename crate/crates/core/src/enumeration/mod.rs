//! Enumeration of all distinct temporal k-cores from an edge core-window skyline.
//!
//! [`enum_all`] sweeps start times over a linked list of windows kept in end
//! order and emits each core exactly once, with no deduplication structure.
//! [`enum_base`] scans every window with buckets and a hash set; it is the
//! simple baseline.

mod base;
mod list;
mod sweep;

use std::str::FromStr;

use crate::{EdgeId, Window};

pub use base::{enum_base, BaseStats};
pub use list::WindowList;
pub use sweep::{as_output, enum_all, enum_all_observed, AsOutputStats, EnumStats, SweepState};

/// One emitted core, borrowed from the enumerator.
#[derive(Clone, Copy, Debug)]
pub struct Emission<'a> {
    pub tti: Window,
    /// Edge ids of the whole core, in no particular order.
    pub core: &'a [EdgeId],
    /// Edges added since the previous emission with the same start time.
    pub added: &'a [EdgeId],
}

impl Emission<'_> {
    pub fn size(&self) -> usize {
        self.core.len()
    }

    /// The core's edge ids sorted, i.e. sorted by `(t, u, v)`.
    pub fn canonical_edges(&self) -> Vec<EdgeId> {
        let mut edges = self.core.to_vec();
        edges.sort_unstable();
        edges
    }
}

/// Receives cores in ascending `(tti.start, tti.end)` order, never the same TTI twice.
pub trait ResultSink {
    fn accept(&mut self, core: &Emission<'_>);
}

impl<F: FnMut(&Emission<'_>)> ResultSink for F {
    fn accept(&mut self, core: &Emission<'_>) {
        self(core)
    }
}

/// How much of each core a [`CollectSink`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SinkMode {
    /// Tally only.
    Count,
    /// TTI and size.
    Sizes,
    /// TTI, size and the edges added since the previous core with the same start.
    Delta,
    /// TTI, size and the full canonical edge list.
    Full,
}

impl FromStr for SinkMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "count" => Ok(SinkMode::Count),
            "sizes" => Ok(SinkMode::Sizes),
            "delta" => Ok(SinkMode::Delta),
            "full" => Ok(SinkMode::Full),
            other => Err(format!("unknown output mode {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoreResult {
    pub tti: Window,
    pub size: usize,
    /// Sorted edge ids: the full core in [`SinkMode::Full`], the delta in
    /// [`SinkMode::Delta`], empty otherwise.
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct CollectSink {
    mode: SinkMode,
    pub results: Vec<CoreResult>,
    pub cores: u64,
    pub total_size: u64,
}

impl CollectSink {
    pub fn new(mode: SinkMode) -> Self {
        CollectSink {
            mode,
            results: Vec::new(),
            cores: 0,
            total_size: 0,
        }
    }

    pub fn mode(&self) -> SinkMode {
        self.mode
    }
}

impl ResultSink for CollectSink {
    fn accept(&mut self, core: &Emission<'_>) {
        self.cores += 1;
        self.total_size += core.size() as u64;
        let edges = match self.mode {
            SinkMode::Count => return,
            SinkMode::Sizes => Vec::new(),
            SinkMode::Delta => {
                let mut added = core.added.to_vec();
                added.sort_unstable();
                added
            }
            SinkMode::Full => core.canonical_edges(),
        };
        self.results.push(CoreResult {
            tti: core.tti,
            size: core.size(),
            edges,
        });
    }
}

/// Feeds cores already sorted by TTI to `sink`, deriving each delta from the
/// previous core with the same start. Cores sharing a start must be nested.
pub fn replay_sorted<'a, S, I>(cores: I, sink: &mut S)
where
    S: ResultSink + ?Sized,
    I: IntoIterator<Item = (Window, &'a [EdgeId])>,
{
    let mut prev: Option<(Window, &[EdgeId])> = None;
    let mut added = Vec::new();
    for (tti, core) in cores {
        added.clear();
        match prev {
            Some((p, prev_core)) if p.start == tti.start => {
                let mut j = 0;
                for &e in core {
                    while j < prev_core.len() && prev_core[j] < e {
                        j += 1;
                    }
                    if j == prev_core.len() || prev_core[j] != e {
                        added.push(e);
                    }
                }
            }
            _ => added.extend_from_slice(core),
        }
        sink.accept(&Emission { tti, core, added: &added });
        prev = Some((tti, core));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_parsing() {
        assert_eq!("delta".parse::<SinkMode>(), Ok(SinkMode::Delta));
        assert!("everything".parse::<SinkMode>().is_err());
    }

    #[test]
    fn replay_computes_deltas_per_start() {
        let a = [1, 2];
        let b = [1, 2, 5, 7];
        let c = [3];
        let cores = [
            (Window::new(1, 2), &a[..]),
            (Window::new(1, 4), &b[..]),
            (Window::new(2, 2), &c[..]),
        ];
        let mut sink = CollectSink::new(SinkMode::Delta);
        replay_sorted(cores, &mut sink);
        let deltas: Vec<Vec<EdgeId>> = sink.results.iter().map(|r| r.edges.clone()).collect();
        assert_eq!(deltas, vec![vec![1, 2], vec![5, 7], vec![3]]);
        assert_eq!((sink.cores, sink.total_size), (3, 7));
    }

    #[test]
    fn count_mode_keeps_nothing() {
        let mut sink = CollectSink::new(SinkMode::Count);
        let core = [4, 1];
        sink.accept(&Emission { tti: Window::new(1, 1), core: &core, added: &core });
        assert!(sink.results.is_empty());
        assert_eq!((sink.cores, sink.total_size), (1, 2));

        let mut full = CollectSink::new(SinkMode::Full);
        full.accept(&Emission { tti: Window::new(1, 1), core: &core, added: &core });
        assert_eq!(full.results[0].edges, vec![1, 4]);
    }
}
