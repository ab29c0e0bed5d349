//! Temporal k-core enumeration.
//!
//! Given a temporal graph, an integer `k` and a query range `[Ts, Te]`, this
//! crate enumerates every distinct k-core that appears in the projection of
//! some window `[ts, te] ⊆ [Ts, Te]`, in time proportional to the total
//! output size. The pipeline is:
//!
//! 1. [`vct::build_vct`]: per-vertex core times as a run-length step function.
//! 2. [`ecs::build_ecs`]: per-edge minimal core windows (the core-window skyline).
//! 3. [`enumeration::enum_all`]: a start-time sweep over a linked list of windows.
//!
//! [`oracle`] holds brute-force reference implementations of every stage.

pub mod ecs;
pub mod enumeration;
mod error;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod synthetic;
pub mod vct;

pub use error::{Error, Result};
pub use graph::{
    compress_timestamps, parse_edge_list, GraphStats, ParseOptions, TemporalEdge, TemporalGraph,
    TimeDomain,
};

/// Compressed timestamp. Valid times are `1..=t_count`.
pub type Time = u32;
/// Dense vertex index in `0..n`.
pub type VertexId = u32;
/// Index into [`TemporalGraph::edges`].
pub type EdgeId = u32;

/// A closed time window `[start, end]` in compressed time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Window {
    pub start: Time,
    pub end: Time,
}

impl Window {
    pub const fn new(start: Time, end: Time) -> Self {
        Window { start, end }
    }

    pub fn contains_time(&self, t: Time) -> bool {
        self.start <= t && t <= self.end
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &Window) -> bool {
        other.start <= self.start && self.end <= other.end
    }

    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}
