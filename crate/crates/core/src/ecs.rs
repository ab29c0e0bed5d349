//! Edge core-window skylines.
//!
//! A window `[s, e]` is a minimal core window of edge `x` when `x` is in the
//! k-core of `[s, e]` but of no strict sub-window. Per edge these windows are
//! pairwise incomparable, so sorting by start also sorts by end.

use std::fmt::Write as _;

use crate::vct::VctIndex;
use crate::{EdgeId, Error, Result, TemporalEdge, TemporalGraph, Time, Window};

/// A minimal core window of one edge, with its active time: the earliest start
/// time for which this is the edge's first window starting at or after it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoreWindow {
    pub start: Time,
    pub end: Time,
    pub active: Time,
}

impl CoreWindow {
    pub fn window(&self) -> Window {
        Window::new(self.start, self.end)
    }
}

/// A [`CoreWindow`] together with the edge that owns it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinimalCoreWindow {
    pub edge_id: EdgeId,
    pub edge: TemporalEdge,
    pub start: Time,
    pub end: Time,
    pub active: Time,
}

/// Minimal core windows of every edge inside one query range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcsIndex {
    k: u32,
    range: Window,
    edge_lo: EdgeId,
    edges: Vec<TemporalEdge>,
    offsets: Vec<usize>,
    windows: Vec<CoreWindow>,
}

impl EcsIndex {
    /// Assembles an index from per-edge window lists (one list per range edge,
    /// in edge-id order, each sorted by start). Active times are filled in.
    pub(crate) fn from_windows(
        g: &TemporalGraph,
        k: u32,
        range: Window,
        per_edge: Vec<Vec<Window>>,
    ) -> Self {
        let ids = g.edge_ids_in(range);
        debug_assert_eq!(per_edge.len(), ids.len());
        let mut offsets = Vec::with_capacity(per_edge.len() + 1);
        let mut windows = Vec::new();
        offsets.push(0);
        for list in per_edge {
            windows.extend(list.into_iter().map(|w| CoreWindow {
                start: w.start,
                end: w.end,
                active: 0,
            }));
            offsets.push(windows.len());
        }
        let mut idx = EcsIndex {
            k,
            range,
            edge_lo: ids.start,
            edges: g.edges()[ids.start as usize..ids.end as usize].to_vec(),
            offsets,
            windows,
        };
        compute_active_times(&mut idx);
        idx
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn range(&self) -> Window {
        self.range
    }

    /// Ids of the edges covered by this index (all edges inside the range).
    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        self.edge_lo..self.edge_lo + self.edges.len() as EdgeId
    }

    pub fn edge(&self, id: EdgeId) -> TemporalEdge {
        self.edges[(id - self.edge_lo) as usize]
    }

    /// `|ECS|`: the total number of windows.
    pub fn total_size(&self) -> usize {
        self.windows.len()
    }

    /// The skyline of `id`, sorted by start. Empty for edges outside the range.
    pub fn windows_of(&self, id: EdgeId) -> &[CoreWindow] {
        if !self.edge_ids().contains(&id) {
            return &[];
        }
        let i = (id - self.edge_lo) as usize;
        &self.windows[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn iter(&self) -> impl Iterator<Item = MinimalCoreWindow> + '_ {
        self.edge_ids().flat_map(move |id| {
            let edge = self.edge(id);
            self.windows_of(id).iter().map(move |w| MinimalCoreWindow {
                edge_id: id,
                edge,
                start: w.start,
                end: w.end,
                active: w.active,
            })
        })
    }

    /// Keeps only the windows for which `keep` returns true and recomputes
    /// active times.
    pub fn retain_windows<F: FnMut(EdgeId, &CoreWindow) -> bool>(&mut self, mut keep: F) {
        let mut offsets = Vec::with_capacity(self.offsets.len());
        let mut windows = Vec::with_capacity(self.windows.len());
        offsets.push(0);
        for id in self.edge_ids() {
            windows.extend(self.windows_of(id).iter().filter(|w| keep(id, w)).copied());
            offsets.push(windows.len());
        }
        self.offsets = offsets;
        self.windows = windows;
        compute_active_times(self);
    }

    /// One line per range edge, `(u,v,t): [s1,e1], [s2,e2]`, using original labels.
    pub fn to_table(&self, g: &TemporalGraph) -> String {
        let mut out = String::new();
        for id in self.edge_ids() {
            let e = self.edge(id);
            write!(out, "({},{},{}):", g.label(e.u), g.label(e.v), e.t).unwrap();
            let ws = self.windows_of(id);
            if ws.is_empty() {
                out.push_str(" -");
            }
            for (i, w) in ws.iter().enumerate() {
                let sep = if i == 0 { " " } else { ", " };
                write!(out, "{sep}[{},{}]", w.start, w.end).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Sets each window's active time: the first window of an edge activates at
/// `Ts`, every later one right after its predecessor's start.
pub fn compute_active_times(ecs: &mut EcsIndex) {
    let ts = ecs.range.start;
    for i in 0..ecs.edges.len() {
        let (lo, hi) = (ecs.offsets[i], ecs.offsets[i + 1]);
        for j in lo..hi {
            ecs.windows[j].active = if j == lo { ts } else { ecs.windows[j - 1].start + 1 };
        }
    }
}

fn edge_core_time(a: Option<Time>, b: Option<Time>, t: Time) -> Option<Time> {
    Some(a?.max(b?).max(t))
}

/// Derives every edge's minimal core windows from the vertex core times.
///
/// The core time of edge `(u, v, t)` for start `ts <= t` is
/// `max(CT_ts(u), CT_ts(v), t)`. Whenever it is about to change (an endpoint's
/// core time moves, or `ts` passes `t` and the edge expires), `[ts, CT_ts(e)]`
/// is minimal and gets emitted.
pub fn build_ecs(g: &TemporalGraph, k: u32, range: Window, vct: &VctIndex) -> Result<EcsIndex> {
    g.check_window(range)?;
    if vct.k() != k || vct.range() != range || vct.n() != g.n() {
        return Err(Error::IndexMismatch {
            k,
            ts: range.start,
            te: range.end,
            found_k: vct.k(),
            found_ts: vct.range().start,
            found_te: vct.range().end,
        });
    }

    let n = g.n();
    let (ts0, te0) = (range.start, range.end);
    let span = (te0 - ts0 + 1) as usize;

    // Vertices whose core time changes at each start time, with the new value.
    let mut event_off = vec![0usize; span + 1];
    let mut current: Vec<Option<Time>> = vec![None; n];
    for u in 0..n as u32 {
        let entries = vct.entries(u);
        if let Some(first) = entries.first() {
            current[u as usize] = first.core_end;
        }
        for e in entries.iter().skip(1) {
            event_off[(e.from_ts - ts0) as usize + 1] += 1;
        }
    }
    for i in 1..=span {
        event_off[i] += event_off[i - 1];
    }
    let mut fill = event_off.clone();
    let mut events = vec![(0u32, None); event_off[span]];
    for u in 0..n as u32 {
        for e in vct.entries(u).iter().skip(1) {
            let slot = &mut fill[(e.from_ts - ts0) as usize];
            events[*slot] = (u, e.core_end);
            *slot += 1;
        }
    }

    let ids = g.edge_ids_in(range);
    let lo = ids.start;
    let mut edge_ct: Vec<Option<Time>> = ids
        .clone()
        .map(|id| {
            let e = g.edge(id);
            edge_core_time(current[e.u as usize], current[e.v as usize], e.t)
        })
        .collect();

    let mut emitted: Vec<(u32, Window)> = Vec::new();
    for ts in ts0..=te0 {
        // Edges at `ts` expire after their last possible start time.
        for id in g.edge_ids_at(ts) {
            if let Some(c) = edge_ct[(id - lo) as usize].take() {
                emitted.push((id - lo, Window::new(ts, c)));
            }
        }
        if ts == te0 {
            break;
        }
        let changes = &events[event_off[(ts + 1 - ts0) as usize]..event_off[(ts + 1 - ts0) as usize + 1]];
        for &(u, ct) in changes {
            current[u as usize] = ct;
        }
        for &(u, _) in changes {
            for inc in g.incident_within(u, ts + 1, te0) {
                let slot = &mut edge_ct[(inc.edge - lo) as usize];
                let next = edge_core_time(current[u as usize], current[inc.neighbor as usize], inc.t);
                if next != *slot {
                    if let Some(c) = *slot {
                        emitted.push((inc.edge - lo, Window::new(ts, c)));
                    }
                    *slot = next;
                }
            }
        }
    }

    let mut per_edge: Vec<Vec<Window>> = vec![Vec::new(); ids.len()];
    for (rel, w) in emitted {
        per_edge[rel as usize].push(w);
    }
    Ok(EcsIndex::from_windows(g, k, range, per_edge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::vct::build_vct;

    fn ecs(g: &TemporalGraph, k: u32, range: Window) -> EcsIndex {
        let vct = build_vct(g, k, range).unwrap();
        build_ecs(g, k, range, &vct).unwrap()
    }

    fn skyline(g: &TemporalGraph, idx: &EcsIndex, u: u64, v: u64, t: Time) -> Vec<(Time, Time)> {
        let (a, b) = (g.vertex_of(u).unwrap(), g.vertex_of(v).unwrap());
        let id = g
            .edges()
            .iter()
            .position(|e| e.u == a.min(b) && e.v == a.max(b) && e.t == t)
            .unwrap() as EdgeId;
        idx.windows_of(id).iter().map(|w| (w.start, w.end)).collect()
    }

    #[test]
    fn g14_multi_window_edges() {
        let g = fixtures::g14();
        let idx = ecs(&g, 2, g.full_range());
        assert_eq!(idx.total_size(), 18);
        assert_eq!(skyline(&g, &idx, 2, 3, 2), vec![(1, 4), (2, 6)]);
        assert_eq!(skyline(&g, &idx, 1, 3, 6), vec![(2, 6), (6, 7)]);
        assert_eq!(skyline(&g, &idx, 1, 4, 2), vec![(2, 3)]);
        assert_eq!(skyline(&g, &idx, 2, 9, 1), vec![(1, 4)]);
    }

    #[test]
    fn g14_restricted_range() {
        let g = fixtures::g14();
        let idx = ecs(&g, 2, Window::new(1, 4));
        assert_eq!(skyline(&g, &idx, 2, 9, 1), vec![(1, 4)]);
        assert_eq!(skyline(&g, &idx, 1, 4, 2), vec![(2, 3)]);
        assert_eq!(skyline(&g, &idx, 2, 3, 2), vec![(1, 4)]);
        assert_eq!(skyline(&g, &idx, 1, 2, 3), vec![(2, 3)]);
        assert_eq!(skyline(&g, &idx, 2, 4, 3), vec![(2, 3)]);
        assert_eq!(skyline(&g, &idx, 3, 9, 4), vec![(1, 4)]);
        assert_eq!(skyline(&g, &idx, 4, 8, 4), vec![]);
        assert_eq!(idx.total_size(), 6);
        // edges after the range are not covered
        assert_eq!(skyline(&g, &idx, 1, 5, 7), vec![]);
    }

    #[test]
    fn g14_no_three_core() {
        let g = fixtures::g14();
        assert_eq!(ecs(&g, 3, g.full_range()).total_size(), 0);
        assert_eq!(ecs(&g, 5, g.full_range()).total_size(), 0);
    }

    #[test]
    fn active_times() {
        let g = fixtures::g14();
        let idx = ecs(&g, 2, g.full_range());
        let actives = |u, v, t| -> Vec<Time> {
            let (a, b) = (g.vertex_of(u).unwrap(), g.vertex_of(v).unwrap());
            let id = g
                .edges()
                .iter()
                .position(|e| (e.u, e.v, e.t) == (a.min(b), a.max(b), t))
                .unwrap() as EdgeId;
            idx.windows_of(id).iter().map(|w| w.active).collect()
        };
        assert_eq!(actives(1, 2, 3), vec![1, 3]);
        assert_eq!(actives(2, 9, 1), vec![1]);
        assert_eq!(actives(1, 3, 6), vec![1, 3]);

        let shifted = ecs(&g, 2, Window::new(2, 7));
        for w in shifted.iter() {
            assert!(w.active >= 2);
        }
    }

    #[test]
    fn mismatched_index_is_rejected() {
        let g = fixtures::g14();
        let vct = build_vct(&g, 2, g.full_range()).unwrap();
        assert!(matches!(
            build_ecs(&g, 3, g.full_range(), &vct),
            Err(Error::IndexMismatch { .. })
        ));
        assert!(matches!(
            build_ecs(&g, 2, Window::new(1, 4), &vct),
            Err(Error::IndexMismatch { .. })
        ));
    }

    #[test]
    fn retain_recomputes_actives() {
        let g = fixtures::g14();
        let mut idx = ecs(&g, 2, g.full_range());
        idx.retain_windows(|_, w| w.start != 2);
        assert_eq!(skyline(&g, &idx, 1, 3, 6), vec![(6, 7)]);
        for id in idx.edge_ids() {
            if let Some(first) = idx.windows_of(id).first() {
                assert_eq!(first.active, 1);
            }
        }
    }

    #[test]
    fn table_text() {
        let g = fixtures::g14();
        let table = ecs(&g, 2, g.full_range()).to_table(&g);
        assert!(table.contains("(2,3,2): [1,4], [2,6]\n"));
        assert!(table.contains("(1,3,6): [2,6], [6,7]\n"));
        assert_eq!(table.lines().count(), 14);
    }
}
