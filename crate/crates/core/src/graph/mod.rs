//! Immutable temporal graphs.
//!
//! Vertex ids are dense (`0..n`) and timestamps are compressed to `1..=t_count`.
//! Edges are stored once, sorted by `(t, u, v)`, so the edges of any window form
//! a contiguous slice. Per-vertex adjacency is sorted by time.

mod coreness;
mod parse;

use std::collections::HashMap;

use num_rational::Ratio;

use crate::{EdgeId, Error, Result, Time, VertexId, Window};

pub use coreness::static_coreness;
pub use parse::{parse_edge_list, parse_edge_list_str, ParseOptions, ParseReport};

/// An undirected edge with a compressed timestamp. Endpoints satisfy `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub t: Time,
}

impl TemporalEdge {
    /// Canonical ordering key.
    pub fn key(&self) -> (Time, VertexId, VertexId) {
        (self.t, self.u, self.v)
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl Ord for TemporalEdge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for TemporalEdge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// One entry of a vertex's adjacency list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub t: Time,
    pub edge: EdgeId,
}

/// Order-preserving map between raw input timestamps and compressed times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeDomain {
    raw: Vec<i64>,
}

impl TimeDomain {
    pub fn t_count(&self) -> Time {
        self.raw.len() as Time
    }

    /// Raw timestamp of compressed time `t`.
    pub fn raw_of(&self, t: Time) -> Option<i64> {
        let idx = (t as usize).checked_sub(1)?;
        self.raw.get(idx).copied()
    }

    /// Compressed time of an exact raw timestamp.
    pub fn rank_of(&self, raw: i64) -> Option<Time> {
        self.raw.binary_search(&raw).ok().map(|i| i as Time + 1)
    }

    /// Smallest compressed time whose raw value is `>= raw`.
    pub fn ceil_rank(&self, raw: i64) -> Option<Time> {
        let i = self.raw.partition_point(|&r| r < raw);
        (i < self.raw.len()).then_some(i as Time + 1)
    }

    /// Largest compressed time whose raw value is `<= raw`.
    pub fn floor_rank(&self, raw: i64) -> Option<Time> {
        let i = self.raw.partition_point(|&r| r <= raw);
        (i > 0).then_some(i as Time)
    }
}

/// Sorts and deduplicates `raw_ts`, assigning ranks `1..=t_count` in ascending order.
pub fn compress_timestamps<I: IntoIterator<Item = i64>>(raw_ts: I) -> TimeDomain {
    let mut raw: Vec<i64> = raw_ts.into_iter().collect();
    raw.sort_unstable();
    raw.dedup();
    TimeDomain { raw }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub t_max: Time,
    pub deg_avg: Ratio<u64>,
    pub k_max: u32,
}

impl std::fmt::Display for GraphStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let approx = *self.deg_avg.numer() as f64 / *self.deg_avg.denom() as f64;
        write!(
            f,
            "n={} m={} t_max={} k_max={} deg_avg={} ({:.3})",
            self.n, self.m, self.t_max, self.k_max, self.deg_avg, approx
        )
    }
}

#[derive(Clone, Debug)]
pub struct TemporalGraph {
    labels: Vec<u64>,
    label_index: HashMap<u64, VertexId>,
    edges: Vec<TemporalEdge>,
    multiplicity: Option<Vec<u32>>,
    /// Edges with time `t` live in `edges[time_offsets[t]..time_offsets[t + 1]]`.
    time_offsets: Vec<usize>,
    adj_offsets: Vec<usize>,
    adj: Vec<Incidence>,
    time_domain: TimeDomain,
}

impl TemporalGraph {
    /// Builds a graph from already-normalized parts.
    ///
    /// `edges` must use dense endpoints `u < v` below `labels.len()` and times in
    /// `1..=time_domain.t_count()`. Duplicates are collapsed; when `keep_counts`
    /// is set their multiplicity is retained.
    pub(crate) fn assemble(
        labels: Vec<u64>,
        mut edges: Vec<TemporalEdge>,
        time_domain: TimeDomain,
        keep_counts: bool,
    ) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        edges.sort_unstable();
        let mut counts = Vec::with_capacity(edges.len());
        let mut unique: Vec<TemporalEdge> = Vec::with_capacity(edges.len());
        for e in edges {
            debug_assert!(e.u < e.v);
            if unique.last() == Some(&e) {
                *counts.last_mut().unwrap() += 1;
            } else {
                unique.push(e);
                counts.push(1u32);
            }
        }
        let edges = unique;
        let n = labels.len();
        let t_count = time_domain.t_count() as usize;

        let mut time_offsets = vec![0usize; t_count + 2];
        for e in &edges {
            time_offsets[e.t as usize + 1] += 1;
        }
        for t in 1..time_offsets.len() {
            time_offsets[t] += time_offsets[t - 1];
        }

        let mut adj_offsets = vec![0usize; n + 1];
        for e in &edges {
            adj_offsets[e.u as usize + 1] += 1;
            adj_offsets[e.v as usize + 1] += 1;
        }
        for i in 1..=n {
            adj_offsets[i] += adj_offsets[i - 1];
        }
        let mut fill = adj_offsets.clone();
        let mut adj = vec![
            Incidence {
                neighbor: 0,
                t: 0,
                edge: 0
            };
            adj_offsets[n]
        ];
        // Edges are time-sorted, so every adjacency list comes out time-sorted.
        for (id, e) in edges.iter().enumerate() {
            let id = id as EdgeId;
            adj[fill[e.u as usize]] = Incidence { neighbor: e.v, t: e.t, edge: id };
            fill[e.u as usize] += 1;
            adj[fill[e.v as usize]] = Incidence { neighbor: e.u, t: e.t, edge: id };
            fill[e.v as usize] += 1;
        }

        let label_index = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as VertexId))
            .collect();

        Ok(TemporalGraph {
            labels,
            label_index,
            edges,
            multiplicity: keep_counts.then_some(counts),
            time_offsets,
            adj_offsets,
            adj,
            time_domain,
        })
    }

    /// Builds a graph from raw `(u, v, t)` triples with the default normalization
    /// (self-loops dropped, endpoints sorted, duplicates collapsed).
    pub fn from_raw_edges<I>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64, i64)>,
    {
        parse::normalize(triples.into_iter(), &ParseOptions::default()).map(|(g, _)| g)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn t_max(&self) -> Time {
        self.time_domain.t_count()
    }

    pub fn full_range(&self) -> Window {
        Window::new(1, self.t_max())
    }

    pub fn time_domain(&self) -> &TimeDomain {
        &self.time_domain
    }

    /// All edges sorted by `(t, u, v)`; an [`EdgeId`] indexes this slice.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> TemporalEdge {
        self.edges[id as usize]
    }

    /// Number of input lines that collapsed onto each stored edge, when requested
    /// through [`ParseOptions::dedupe_exact`] being off.
    pub fn multiplicity(&self) -> Option<&[u32]> {
        self.multiplicity.as_deref()
    }

    /// Original input label of a dense vertex id.
    pub fn label(&self, u: VertexId) -> u64 {
        self.labels[u as usize]
    }

    pub fn vertex_of(&self, label: u64) -> Option<VertexId> {
        self.label_index.get(&label).copied()
    }

    /// The edge `E_t` bucket.
    pub fn edges_at(&self, t: Time) -> &[TemporalEdge] {
        let ids = self.edge_ids_at(t);
        &self.edges[ids.start as usize..ids.end as usize]
    }

    pub fn edge_ids_at(&self, t: Time) -> std::ops::Range<EdgeId> {
        if t == 0 || t > self.t_max() {
            return 0..0;
        }
        self.time_offsets[t as usize] as EdgeId..self.time_offsets[t as usize + 1] as EdgeId
    }

    /// Ids of all edges whose time lies in `w` (a contiguous range).
    pub fn edge_ids_in(&self, w: Window) -> std::ops::Range<EdgeId> {
        let lo = w.start.clamp(1, self.t_max() + 1) as usize;
        let hi = (w.end.min(self.t_max()) as usize + 1).max(lo);
        self.time_offsets[lo] as EdgeId..self.time_offsets[hi] as EdgeId
    }

    /// Full adjacency of `u`, sorted by time.
    pub fn adjacency(&self, u: VertexId) -> &[Incidence] {
        let u = u as usize;
        &self.adj[self.adj_offsets[u]..self.adj_offsets[u + 1]]
    }

    /// Incident edges of `u` with `lo <= t <= hi`, sorted by time.
    pub fn neighbors_in(&self, u: VertexId, lo: Time, hi: Time) -> Result<&[Incidence]> {
        if u as usize >= self.n() {
            return Err(Error::UnknownVertex(u));
        }
        self.check_window(Window::new(lo, hi))?;
        Ok(self.incident_within(u, lo, hi))
    }

    /// Unchecked variant of [`neighbors_in`](Self::neighbors_in).
    pub(crate) fn incident_within(&self, u: VertexId, lo: Time, hi: Time) -> &[Incidence] {
        let all = self.adjacency(u);
        let a = all.partition_point(|x| x.t < lo);
        let b = all.partition_point(|x| x.t <= hi);
        &all[a..b.max(a)]
    }

    pub fn check_window(&self, w: Window) -> Result<()> {
        if w.start < 1 || w.start > w.end || w.end > self.t_max() {
            return Err(Error::InvalidWindow {
                start: w.start,
                end: w.end,
                t_max: self.t_max(),
            });
        }
        Ok(())
    }

    pub fn stats(&self) -> GraphStats {
        let coreness = static_coreness(self, self.full_range());
        GraphStats {
            n: self.n(),
            m: self.m(),
            t_max: self.t_max(),
            deg_avg: Ratio::new(2 * self.m() as u64, self.n() as u64),
            k_max: coreness.into_iter().max().unwrap_or(0),
        }
    }

    /// Writes the graph as an edge list using original labels and raw timestamps.
    pub fn write_edge_list<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            let raw = self.time_domain.raw_of(e.t).expect("edge time inside domain");
            writeln!(out, "{} {} {}", self.label(e.u), self.label(e.v), raw)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn compress_orders_distinct_values() {
        let td = compress_timestamps([100, 105, 105, 230]);
        assert_eq!(td.t_count(), 3);
        assert_eq!(td.rank_of(100), Some(1));
        assert_eq!(td.rank_of(105), Some(2));
        assert_eq!(td.rank_of(230), Some(3));
        assert_eq!(td.rank_of(101), None);
        assert_eq!(td.raw_of(3), Some(230));
        assert_eq!(td.raw_of(0), None);
        assert_eq!(td.raw_of(4), None);
    }

    #[test]
    fn compress_dense_and_constant() {
        let td = compress_timestamps(1..=7);
        for t in 1..=7 {
            assert_eq!(td.rank_of(t as i64), Some(t));
        }
        let td = compress_timestamps([7, 7, 7]);
        assert_eq!(td.t_count(), 1);
        assert_eq!(td.rank_of(7), Some(1));
    }

    #[test]
    fn raw_range_translation() {
        let td = compress_timestamps([10, 20, 30]);
        assert_eq!(td.ceil_rank(15), Some(2));
        assert_eq!(td.ceil_rank(10), Some(1));
        assert_eq!(td.ceil_rank(31), None);
        assert_eq!(td.floor_rank(25), Some(2));
        assert_eq!(td.floor_rank(9), None);
        assert_eq!(td.floor_rank(99), Some(3));
    }

    #[test]
    fn g14_neighbors() {
        let g = fixtures::g14();
        let v = |l: u64| g.vertex_of(l).unwrap();
        let got: Vec<(u64, Time)> = g
            .neighbors_in(v(1), 3, 7)
            .unwrap()
            .iter()
            .map(|x| (g.label(x.neighbor), x.t))
            .collect();
        assert_eq!(got, vec![(2, 3), (6, 5), (7, 5), (3, 6), (5, 7)]);
        assert!(g.neighbors_in(v(9), 2, 3).unwrap().is_empty());
        // no edge of v5 at time 1
        assert!(g.neighbors_in(v(5), 1, 1).unwrap().is_empty());
    }

    #[test]
    fn neighbors_in_rejects_bad_input() {
        let g = fixtures::g14();
        assert!(matches!(g.neighbors_in(99, 1, 2), Err(Error::UnknownVertex(99))));
        assert!(matches!(g.neighbors_in(0, 0, 2), Err(Error::InvalidWindow { .. })));
        assert!(matches!(g.neighbors_in(0, 3, 2), Err(Error::InvalidWindow { .. })));
        assert!(matches!(g.neighbors_in(0, 1, 8), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn g14_stats() {
        let s = fixtures::g14().stats();
        assert_eq!((s.n, s.m, s.t_max, s.k_max), (9, 14, 7, 2));
        assert_eq!(s.deg_avg, Ratio::new(28, 9));
    }

    #[test]
    fn single_edge_stats() {
        let g = TemporalGraph::from_raw_edges([(3, 4, 10)]).unwrap();
        let s = g.stats();
        assert_eq!((s.n, s.m, s.t_max, s.k_max), (2, 1, 1, 1));
    }

    #[test]
    fn buckets_partition_edges() {
        let g = fixtures::g14();
        let mut total = 0;
        for t in 1..=g.t_max() {
            for e in g.edges_at(t) {
                assert_eq!(e.t, t);
            }
            total += g.edges_at(t).len();
        }
        assert_eq!(total, g.m());
        assert_eq!(g.edge_ids_in(Window::new(2, 3)), 1..5);
        assert_eq!(g.edges_at(0).len(), 0);
        assert_eq!(g.edges_at(8).len(), 0);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = fixtures::g14();
        for u in 0..g.n() as VertexId {
            for inc in g.adjacency(u) {
                let back = g
                    .adjacency(inc.neighbor)
                    .iter()
                    .filter(|x| x.neighbor == u && x.t == inc.t)
                    .count();
                assert_eq!(back, 1);
            }
            let full = g.neighbors_in(u, 1, g.t_max()).unwrap();
            assert_eq!(full.len(), g.adjacency(u).len());
        }
    }
}
