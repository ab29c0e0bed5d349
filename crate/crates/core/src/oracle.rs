//! Brute-force reference implementations.
//!
//! Everything here computes k-cores window by window with plain peeling and
//! shares no code with [`vct`](crate::vct), [`ecs`](crate::ecs) or
//! [`enumeration`](crate::enumeration). It is the ground truth for tests and
//! the naive baseline for benchmarks.

use std::collections::HashSet;
use std::time::Instant;

use crate::ecs::EcsIndex;
use crate::vct::VctIndex;
use crate::{EdgeId, Error, Result, TemporalEdge, TemporalGraph, Time, VertexId, Window};

/// The k-core of one window's projection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoreSubgraph {
    /// Sorted vertex ids.
    pub vertices: Vec<VertexId>,
    /// Sorted edge ids; since edges are stored in `(t, u, v)` order this is the
    /// canonical identity of the core.
    pub edges: Vec<EdgeId>,
    /// Tightest window holding all edges. Meaningless when empty.
    pub tti: Window,
}

impl CoreSubgraph {
    fn from_edges(g: &TemporalGraph, edges: Vec<EdgeId>) -> Self {
        let mut vertices: Vec<VertexId> = edges
            .iter()
            .flat_map(|&id| {
                let e = g.edge(id);
                [e.u, e.v]
            })
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        let tti = match (edges.first(), edges.last()) {
            (Some(&a), Some(&b)) => Window::new(g.edge(a).t, g.edge(b).t),
            _ => Window::new(0, 0),
        };
        CoreSubgraph { vertices, edges, tti }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_triples(&self, g: &TemporalGraph) -> Vec<TemporalEdge> {
        self.edges.iter().map(|&id| g.edge(id)).collect()
    }
}

/// Reusable scratch space for peeling window projections.
struct Peeler<'g> {
    g: &'g TemporalGraph,
    /// Distinct-neighbor pair of each edge.
    pair_of: Vec<u32>,
    seen: Vec<u32>,
    dropped: Vec<u32>,
    epoch: u32,
    deg: Vec<usize>,
    alive: Vec<bool>,
    touched: Vec<VertexId>,
    stack: Vec<VertexId>,
}

impl<'g> Peeler<'g> {
    fn new(g: &'g TemporalGraph) -> Self {
        let mut keyed: Vec<(VertexId, VertexId, usize)> =
            g.edges().iter().enumerate().map(|(i, e)| (e.u, e.v, i)).collect();
        keyed.sort_unstable();
        let mut pair_of = vec![0u32; g.m()];
        let mut pairs = 0u32;
        for i in 0..keyed.len() {
            if i > 0 && (keyed[i - 1].0, keyed[i - 1].1) != (keyed[i].0, keyed[i].1) {
                pairs += 1;
            }
            pair_of[keyed[i].2] = pairs;
        }
        let pairs = pairs as usize + 1;
        Peeler {
            g,
            pair_of,
            seen: vec![0; pairs],
            dropped: vec![0; pairs],
            epoch: 0,
            deg: vec![0; g.n()],
            alive: vec![false; g.n()],
            touched: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn next_epoch(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.dropped.iter_mut().for_each(|s| *s = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.epoch
    }

    /// Edge ids of the k-core of `w`, sorted.
    fn core_edges(&mut self, k: usize, w: Window) -> Vec<EdgeId> {
        let g = self.g;
        let ids = g.edge_ids_in(w);
        let epoch = self.next_epoch();
        for id in ids.clone() {
            let p = self.pair_of[id as usize] as usize;
            if self.seen[p] == epoch {
                continue;
            }
            self.seen[p] = epoch;
            let e = g.edge(id);
            for x in [e.u, e.v] {
                if self.deg[x as usize] == 0 {
                    self.touched.push(x);
                    self.alive[x as usize] = true;
                }
                self.deg[x as usize] += 1;
            }
        }
        for &x in &self.touched {
            if self.deg[x as usize] < k {
                self.alive[x as usize] = false;
                self.stack.push(x);
            }
        }
        while let Some(x) = self.stack.pop() {
            for inc in g.incident_within(x, w.start, w.end) {
                let p = self.pair_of[inc.edge as usize] as usize;
                if self.dropped[p] == epoch {
                    continue;
                }
                self.dropped[p] = epoch;
                let y = inc.neighbor as usize;
                if self.alive[y] {
                    self.deg[y] -= 1;
                    if self.deg[y] < k {
                        self.alive[y] = false;
                        self.stack.push(y as VertexId);
                    }
                }
            }
        }
        let edges = ids
            .filter(|&id| {
                let e = g.edge(id);
                self.alive[e.u as usize] && self.alive[e.v as usize]
            })
            .collect();
        for &x in &self.touched {
            self.deg[x as usize] = 0;
            self.alive[x as usize] = false;
        }
        self.touched.clear();
        edges
    }
}

fn check_args(g: &TemporalGraph, k: u32, w: Window) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidK);
    }
    g.check_window(w)
}

/// The k-core of the projection over `w`, by iterated peeling of vertices with
/// fewer than `k` distinct neighbors.
pub fn temporal_kcore(g: &TemporalGraph, k: u32, w: Window) -> Result<CoreSubgraph> {
    check_args(g, k, w)?;
    let edges = Peeler::new(g).core_edges(k as usize, w);
    Ok(CoreSubgraph::from_edges(g, edges))
}

/// Every distinct non-empty temporal k-core of the range, sorted by TTI.
#[derive(Clone, Debug)]
pub struct BruteEnumeration {
    pub cores: Vec<CoreSubgraph>,
    pub windows_scanned: u64,
}

impl BruteEnumeration {
    /// `|R|`.
    pub fn result_size(&self) -> usize {
        self.cores.iter().map(CoreSubgraph::size).sum()
    }
}

/// Peels every window `[ts, te] ⊆ range` and keeps each distinct core once.
pub fn brute_enumerate(g: &TemporalGraph, k: u32, range: Window) -> Result<BruteEnumeration> {
    Ok(brute_enumerate_until(g, k, range, None)?.expect("no deadline"))
}

/// As [`brute_enumerate`], giving up with `Ok(None)` once `deadline` passes.
pub fn brute_enumerate_until(
    g: &TemporalGraph,
    k: u32,
    range: Window,
    deadline: Option<Instant>,
) -> Result<Option<BruteEnumeration>> {
    check_args(g, k, range)?;
    let mut peeler = Peeler::new(g);
    // HashSet compares full edge lists whenever hashes collide.
    let mut distinct: HashSet<Vec<EdgeId>> = HashSet::new();
    let mut windows_scanned = 0u64;
    for ts in range.start..=range.end {
        for te in ts..=range.end {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Ok(None);
            }
            windows_scanned += 1;
            let edges = peeler.core_edges(k as usize, Window::new(ts, te));
            if !edges.is_empty() && !distinct.contains(&edges) {
                distinct.insert(edges);
            }
        }
    }
    let mut cores: Vec<CoreSubgraph> = distinct
        .into_iter()
        .map(|edges| CoreSubgraph::from_edges(g, edges))
        .collect();
    cores.sort_by(|a, b| (a.tti, &a.edges).cmp(&(b.tti, &b.edges)));
    Ok(Some(BruteEnumeration { cores, windows_scanned }))
}

/// Core times by scanning every window: for each `ts`, `te` grows until the
/// vertex first appears in the core.
pub fn brute_vct(g: &TemporalGraph, k: u32, range: Window) -> Result<VctIndex> {
    check_args(g, k, range)?;
    let mut peeler = Peeler::new(g);
    let span = range.len() as usize;
    let mut table: Vec<Option<Vec<Option<Time>>>> = (0..g.n() as VertexId)
        .map(|u| {
            let isolated = g.incident_within(u, range.start, range.end).is_empty();
            (!isolated).then(|| vec![None; span])
        })
        .collect();
    for ts in range.start..=range.end {
        let col = (ts - range.start) as usize;
        for te in ts..=range.end {
            for id in peeler.core_edges(k as usize, Window::new(ts, te)) {
                let e = g.edge(id);
                for x in [e.u, e.v] {
                    let row = table[x as usize].as_mut().expect("core vertex has range edges");
                    if row[col].is_none() {
                        row[col] = Some(te);
                    }
                }
            }
        }
    }
    Ok(VctIndex::from_dense(k, range, table))
}

/// Minimal core windows by testing, for every edge, every window containing it.
///
/// Core membership is monotone under window growth, so a window in which the
/// edge is in the core is minimal exactly when neither `[a + 1, b]` nor
/// `[a, b - 1]` keeps it; every other strict sub-window lies inside one of them.
pub fn brute_ecs(g: &TemporalGraph, k: u32, range: Window) -> Result<EcsIndex> {
    check_args(g, k, range)?;
    let mut peeler = Peeler::new(g);
    let ids = g.edge_ids_in(range);
    let lo = ids.start;
    let span = range.len() as usize;
    let slot = |a: Time, b: Time| (a - range.start) as usize * span + (b - range.start) as usize;
    // member[slot(a, b)] lists core edges of [a, b] as a bitmap over range edges.
    let mut member: Vec<Vec<bool>> = vec![Vec::new(); span * span];
    for a in range.start..=range.end {
        for b in a..=range.end {
            let mut bits = vec![false; ids.len()];
            for id in peeler.core_edges(k as usize, Window::new(a, b)) {
                bits[(id - lo) as usize] = true;
            }
            member[slot(a, b)] = bits;
        }
    }
    let in_core = |rel: usize, a: Time, b: Time| -> bool {
        a >= range.start && b <= range.end && a <= b && member[slot(a, b)][rel]
    };

    let per_edge = ids
        .clone()
        .map(|id| {
            let rel = (id - lo) as usize;
            let t = g.edge(id).t;
            let mut found = Vec::new();
            for a in range.start..=t {
                for b in t..=range.end {
                    if in_core(rel, a, b) && !in_core(rel, a + 1, b) && !in_core(rel, a, b.wrapping_sub(1)) {
                        found.push(Window::new(a, b));
                    }
                }
            }
            found.sort();
            found
        })
        .collect();
    Ok(EcsIndex::from_windows(g, k, range, per_edge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labeled(g: &TemporalGraph, c: &CoreSubgraph) -> Vec<(u64, u64, Time)> {
        c.edge_triples(g)
            .iter()
            .map(|e| (g.label(e.u), g.label(e.v), e.t))
            .collect()
    }

    #[test]
    fn triangle_in_1_3() {
        let g = fixtures::g14();
        let c = temporal_kcore(&g, 2, Window::new(1, 3)).unwrap();
        assert_eq!(labeled(&g, &c), vec![(1, 4, 2), (1, 2, 3), (2, 4, 3)]);
        let verts: Vec<u64> = c.vertices.iter().map(|&u| g.label(u)).collect();
        assert_eq!(verts, vec![1, 2, 4]);
        assert_eq!(c.tti, Window::new(2, 3));
    }

    #[test]
    fn single_edge_window_has_no_two_core() {
        let g = fixtures::g14();
        assert!(temporal_kcore(&g, 2, Window::new(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn six_edge_core_in_1_4() {
        let g = fixtures::g14();
        let c = temporal_kcore(&g, 2, Window::new(1, 4)).unwrap();
        assert_eq!(c.size(), 6);
        assert_eq!(c.vertices.len(), 5);
        assert_eq!(c.tti, Window::new(1, 4));
        assert!(g.vertex_of(8).is_some_and(|v8| !c.vertices.contains(&v8)));
    }

    #[test]
    fn k_zero_is_rejected() {
        let g = fixtures::g14();
        assert!(matches!(temporal_kcore(&g, 0, Window::new(1, 3)), Err(Error::InvalidK)));
        assert!(temporal_kcore(&g, 2, Window::new(4, 3)).is_err());
    }

    #[test]
    fn two_nested_cores_on_short_range() {
        let g = fixtures::g14();
        let r = brute_enumerate(&g, 2, Window::new(1, 4)).unwrap();
        let ttis: Vec<Window> = r.cores.iter().map(|c| c.tti).collect();
        assert_eq!(ttis, vec![Window::new(1, 4), Window::new(2, 3)]);
        assert_eq!(r.cores[0].size(), 6);
        assert_eq!(r.cores[1].size(), 3);
        assert_eq!(r.windows_scanned, 10);
    }

    #[test]
    fn full_range_thirteen_cores() {
        let g = fixtures::g14();
        let r = brute_enumerate(&g, 2, g.full_range()).unwrap();
        let ttis: Vec<(Time, Time)> = r.cores.iter().map(|c| (c.tti.start, c.tti.end)).collect();
        assert_eq!(
            ttis,
            vec![
                (1, 4), (1, 5), (1, 6), (1, 7), (2, 3), (2, 5), (2, 6),
                (2, 7), (3, 5), (3, 7), (5, 5), (5, 7), (6, 7)
            ]
        );
        assert_eq!(r.result_size(), 105);
        assert!(brute_enumerate(&g, 3, g.full_range()).unwrap().cores.is_empty());
    }

    #[test]
    fn deadline_in_the_past_gives_up() {
        let g = fixtures::g14();
        let r = brute_enumerate_until(&g, 2, g.full_range(), Some(Instant::now())).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn brute_vct_rows() {
        let g = fixtures::g14();
        let idx = brute_vct(&g, 2, g.full_range()).unwrap();
        let row = |l| -> Vec<(Time, Option<Time>)> {
            idx.entries(g.vertex_of(l).unwrap()).iter().map(|e| (e.from_ts, e.core_end)).collect()
        };
        assert_eq!(row(1), vec![(1, Some(3)), (3, Some(5)), (6, Some(7)), (7, None)]);
        assert_eq!(row(5), vec![(1, Some(7)), (7, None)]);
        assert_eq!(row(3), vec![(1, Some(4)), (2, Some(6)), (3, Some(7)), (7, None)]);
    }

    #[test]
    fn brute_ecs_examples() {
        let g = fixtures::g14();
        let idx = brute_ecs(&g, 2, g.full_range()).unwrap();
        let find = |u: u64, v: u64, t: Time| -> Vec<Window> {
            let (a, b) = (g.vertex_of(u).unwrap(), g.vertex_of(v).unwrap());
            let id = g.edges().iter().position(|e| (e.u, e.v, e.t) == (a.min(b), a.max(b), t)).unwrap();
            idx.windows_of(id as EdgeId).iter().map(|w| w.window()).collect()
        };
        assert_eq!(find(2, 9, 1), vec![Window::new(1, 4)]);
        assert_eq!(find(1, 3, 6), vec![Window::new(2, 6), Window::new(6, 7)]);
        assert_eq!(idx.total_size(), 18);
        assert_eq!(brute_ecs(&g, 5, g.full_range()).unwrap().total_size(), 0);
    }

    #[test]
    fn multi_edges_count_one_neighbor() {
        // v0-v1 three times, v1-v2 once: no vertex has two distinct neighbors
        // except v1.
        let g = TemporalGraph::from_raw_edges([(0, 1, 1), (0, 1, 2), (0, 1, 3), (1, 2, 2)]).unwrap();
        assert!(temporal_kcore(&g, 2, g.full_range()).unwrap().is_empty());
    }
}
