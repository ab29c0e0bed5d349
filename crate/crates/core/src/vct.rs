//! Vertex core times.
//!
//! For a fixed `k` and range `[Ts, Te]`, the core time `CT_ts(u)` is the earliest
//! `te` such that `u` belongs to the k-core of `[ts, te]`, or absent if no such
//! `te <= Te` exists. As a function of `ts` it is a nondecreasing step function;
//! the index stores one entry per step.

use std::fmt::Write as _;

use crate::{Error, Result, TemporalGraph, Time, VertexId, Window};

/// One step of a vertex's core-time function: `CT_ts(u) = core_end` for every
/// `ts` from `from_ts` up to the next entry's `from_ts`. `None` means no core
/// window exists (infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VctEntry {
    pub from_ts: Time,
    pub core_end: Option<Time>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VctIndex {
    k: u32,
    range: Window,
    offsets: Vec<usize>,
    entries: Vec<VctEntry>,
}

impl VctIndex {
    /// Run-length encodes a dense table of core times.
    ///
    /// `per_vertex[u]` is `None` for vertices isolated within the range, else the
    /// core time for every `ts` in the range, in order.
    pub(crate) fn from_dense(k: u32, range: Window, per_vertex: Vec<Option<Vec<Option<Time>>>>) -> Self {
        let mut offsets = Vec::with_capacity(per_vertex.len() + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for row in per_vertex {
            if let Some(row) = row {
                debug_assert_eq!(row.len(), range.len() as usize);
                for (i, ct) in row.into_iter().enumerate() {
                    let from_ts = range.start + i as Time;
                    if i == 0 || entries.last().map(|e: &VctEntry| e.core_end) != Some(ct) {
                        entries.push(VctEntry { from_ts, core_end: ct });
                    }
                }
            }
            offsets.push(entries.len());
        }
        VctIndex { k, range, offsets, entries }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn range(&self) -> Window {
        self.range
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `|VCT|`: the total number of entries.
    pub fn total_size(&self) -> usize {
        self.entries.len()
    }

    /// Steps of `u`. Empty when `u` has no edge inside the range.
    pub fn entries(&self, u: VertexId) -> &[VctEntry] {
        let u = u as usize;
        &self.entries[self.offsets[u]..self.offsets[u + 1]]
    }

    /// `CT_ts(u)`.
    pub fn core_time_at(&self, u: VertexId, ts: Time) -> Result<Option<Time>> {
        if u as usize >= self.n() {
            return Err(Error::UnknownVertex(u));
        }
        if !self.range.contains_time(ts) {
            return Err(Error::InvalidWindow {
                start: ts,
                end: ts,
                t_max: self.range.end,
            });
        }
        let entries = self.entries(u);
        let i = entries.partition_point(|e| e.from_ts <= ts);
        Ok(if i == 0 { None } else { entries[i - 1].core_end })
    }

    /// One line per vertex, `label: [ts,ct], ..., [ts,inf]`, using original labels.
    pub fn to_table(&self, g: &TemporalGraph) -> String {
        let mut rows: Vec<(u64, String)> = (0..self.n() as VertexId)
            .map(|u| {
                let mut row = String::new();
                for (i, e) in self.entries(u).iter().enumerate() {
                    if i > 0 {
                        row.push_str(", ");
                    }
                    match e.core_end {
                        Some(ct) => write!(row, "[{},{}]", e.from_ts, ct).unwrap(),
                        None => write!(row, "[{},inf]", e.from_ts).unwrap(),
                    }
                }
                if row.is_empty() {
                    row.push('-');
                }
                (g.label(u), row)
            })
            .collect();
        rows.sort_by_key(|r| r.0);
        rows.into_iter().map(|(l, r)| format!("{l}: {r}\n")).collect()
    }
}

/// Builds the core-time index for `(k, range)`.
///
/// Core times at `Ts` come from peeling the range projection while deleting
/// edges from the latest time downwards. Each later start time is handled
/// incrementally: `CT_ts(u)` is the least fixpoint of
/// `CT(u) = k-th smallest over neighbors v of max(first edge time >= ts, CT(v))`,
/// and since core times only grow with `ts`, the previous fixpoint is a valid
/// starting point. Only endpoints of expired edges and their dependants are
/// re-evaluated.
pub fn build_vct(g: &TemporalGraph, k: u32, range: Window) -> Result<VctIndex> {
    if k < 1 {
        return Err(Error::InvalidK);
    }
    g.check_window(range)?;
    let mut state = CoreTimeState::new(g, k, range);
    state.init_at_start();

    let n = g.n();
    // (vertex, entry) in creation order; grouped per vertex at the end.
    let mut steps: Vec<(VertexId, VctEntry)> = (0..n)
        .filter(|&u| !state.vertex_pairs(u).is_empty())
        .map(|u| (u as VertexId, VctEntry { from_ts: range.start, core_end: state.ct[u] }))
        .collect();
    let mut changed = Vec::new();
    for ts in range.start..range.end {
        state.advance(ts + 1, &mut changed);
        steps.extend(changed.iter().map(|&u| {
            (u, VctEntry { from_ts: ts + 1, core_end: state.ct[u as usize] })
        }));
    }

    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in &steps {
        offsets[u as usize + 1] += 1;
    }
    for u in 1..=n {
        offsets[u] += offsets[u - 1];
    }
    let mut fill = offsets.clone();
    let mut entries = vec![VctEntry { from_ts: 0, core_end: None }; steps.len()];
    for (u, e) in steps {
        entries[fill[u as usize]] = e;
        fill[u as usize] += 1;
    }
    Ok(VctIndex { k, range, offsets, entries })
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    nbr: VertexId,
    /// First time in `arc_times[cur..end]` not yet expired.
    cur: u32,
    end: u32,
}

/// Working state for the core-time sweep over one range.
struct CoreTimeState<'g> {
    g: &'g TemporalGraph,
    k: usize,
    range: Window,
    /// Pair `p` joins `pair_ends[p].0 < pair_ends[p].1` and has
    /// `pair_off[p + 1] - pair_off[p]` edges in the range.
    pair_ends: Vec<(VertexId, VertexId)>,
    pair_off: Vec<usize>,
    /// Pair `vpairs[i]` seen from its endpoint: neighbor id and a private copy
    /// of the pair's times, cursor first. Laid out vertex by vertex so a
    /// re-evaluation reads one contiguous run.
    arcs: Vec<Arc>,
    arc_times: Vec<Time>,
    /// Pair of each range edge, indexed by `edge - edge_lo`.
    edge_pair: Vec<u32>,
    edge_lo: u32,
    vpair_off: Vec<usize>,
    vpairs: Vec<u32>,
    ct: Vec<Option<Time>>,
    queued: Vec<bool>,
    queue: Vec<VertexId>,
    scratch: Vec<Time>,
}

impl<'g> CoreTimeState<'g> {
    fn new(g: &'g TemporalGraph, k: u32, range: Window) -> Self {
        let ids = g.edge_ids_in(range);
        let edge_lo = ids.start;
        let mut keyed: Vec<(VertexId, VertexId, Time, u32)> = ids
            .clone()
            .map(|id| {
                let e = g.edge(id);
                (e.u, e.v, e.t, id - edge_lo)
            })
            .collect();
        keyed.sort_unstable();

        let mut pair_ends = Vec::new();
        let mut pair_off = vec![0];
        let mut pair_times = Vec::with_capacity(keyed.len());
        let mut edge_pair = vec![0u32; keyed.len()];
        for (i, &(u, v, t, rel)) in keyed.iter().enumerate() {
            if i == 0 || (keyed[i - 1].0, keyed[i - 1].1) != (u, v) {
                if i > 0 {
                    pair_off.push(pair_times.len());
                }
                pair_ends.push((u, v));
            }
            edge_pair[rel as usize] = (pair_ends.len() - 1) as u32;
            pair_times.push(t);
        }
        pair_off.push(pair_times.len());
        if pair_ends.is_empty() {
            pair_off.truncate(1);
        }

        let n = g.n();
        let mut vpair_off = vec![0usize; n + 1];
        for &(u, v) in &pair_ends {
            vpair_off[u as usize + 1] += 1;
            vpair_off[v as usize + 1] += 1;
        }
        for i in 1..=n {
            vpair_off[i] += vpair_off[i - 1];
        }
        let mut fill = vpair_off.clone();
        let mut vpairs = vec![0u32; vpair_off[n]];
        for (p, &(u, v)) in pair_ends.iter().enumerate() {
            vpairs[fill[u as usize]] = p as u32;
            fill[u as usize] += 1;
            vpairs[fill[v as usize]] = p as u32;
            fill[v as usize] += 1;
        }

        let mut arcs = Vec::with_capacity(vpairs.len());
        let mut arc_times = Vec::with_capacity(2 * pair_times.len());
        for u in 0..n {
            for &p in &vpairs[vpair_off[u]..vpair_off[u + 1]] {
                let (a, b) = pair_ends[p as usize];
                let cur = arc_times.len() as u32;
                arc_times.extend_from_slice(&pair_times[pair_off[p as usize]..pair_off[p as usize + 1]]);
                arcs.push(Arc {
                    nbr: if a as usize == u { b } else { a },
                    cur,
                    end: arc_times.len() as u32,
                });
            }
        }

        CoreTimeState {
            g,
            arcs,
            arc_times,
            k: k as usize,
            range,
            pair_ends,
            pair_off,
            edge_pair,
            edge_lo,
            vpair_off,
            vpairs,
            ct: vec![None; n],
            queued: vec![false; n],
            queue: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn vertex_pairs(&self, u: usize) -> &[u32] {
        &self.vpairs[self.vpair_off[u]..self.vpair_off[u + 1]]
    }

    /// Core times for `ts = Ts`: start from the k-core of the whole range and
    /// delete edges by decreasing time; a vertex peeled while removing `E_te`
    /// has core time `te`.
    fn init_at_start(&mut self) {
        let n = self.g.n();
        let k = self.k;
        let mut alive = vec![false; n];
        let mut deg = vec![0usize; n];
        let mut live_times: Vec<usize> = (0..self.pair_ends.len())
            .map(|p| self.pair_off[p + 1] - self.pair_off[p])
            .collect();
        let mut stack = Vec::new();
        for u in 0..n {
            deg[u] = self.vertex_pairs(u).len();
            if deg[u] > 0 {
                alive[u] = true;
                if deg[u] < k {
                    alive[u] = false;
                    stack.push(u as VertexId);
                }
            }
        }

        // `label` is the core time assigned to vertices peeled in this cascade.
        let cascade = |stack: &mut Vec<VertexId>,
                           alive: &mut Vec<bool>,
                           deg: &mut Vec<usize>,
                           live_times: &Vec<usize>,
                           ct: &mut Vec<Option<Time>>,
                           label: Option<Time>| {
            while let Some(u) = stack.pop() {
                ct[u as usize] = label;
                for &p in &self.vpairs[self.vpair_off[u as usize]..self.vpair_off[u as usize + 1]] {
                    if live_times[p as usize] == 0 {
                        continue;
                    }
                    let (a, b) = self.pair_ends[p as usize];
                    let x = if a == u { b } else { a } as usize;
                    if alive[x] {
                        deg[x] -= 1;
                        if deg[x] < k {
                            alive[x] = false;
                            stack.push(x as VertexId);
                        }
                    }
                }
            }
        };

        let mut ct = std::mem::take(&mut self.ct);
        cascade(&mut stack, &mut alive, &mut deg, &live_times, &mut ct, None);
        for te in (self.range.start..=self.range.end).rev() {
            for id in self.g.edge_ids_at(te) {
                let p = self.edge_pair[(id - self.edge_lo) as usize] as usize;
                live_times[p] -= 1;
                if live_times[p] > 0 {
                    continue;
                }
                let (u, v) = self.pair_ends[p];
                let (u, v) = (u as usize, v as usize);
                if alive[u] && alive[v] {
                    for x in [u, v] {
                        deg[x] -= 1;
                        if deg[x] < k {
                            alive[x] = false;
                            stack.push(x as VertexId);
                        }
                    }
                    // Peel now: a later pair of this timestamp must see these
                    // endpoints' removal through the cascade, not skip them.
                    cascade(&mut stack, &mut alive, &mut deg, &live_times, &mut ct, Some(te));
                }
            }
        }
        debug_assert!(alive.iter().all(|&a| !a));
        self.ct = ct;
    }

    /// Earliest unexpired time of arc `a`, skipping times before `ts`.
    fn arc_time_from(&mut self, a: usize, ts: Time) -> Option<Time> {
        let arc = &mut self.arcs[a];
        while arc.cur < arc.end && self.arc_times[arc.cur as usize] < ts {
            arc.cur += 1;
        }
        (arc.cur < arc.end).then(|| self.arc_times[arc.cur as usize])
    }

    /// `k`-th smallest of `max(first time >= ts, CT(v))` over neighbors `v`,
    /// given that it is at least `floor`.
    fn evaluate(&mut self, u: VertexId, ts: Time, floor: Time) -> Option<Time> {
        let mut above = std::mem::take(&mut self.scratch);
        above.clear();
        let mut at_most_floor = 0;
        for a in self.vpair_off[u as usize]..self.vpair_off[u as usize + 1] {
            let Some(t) = self.arc_time_from(a, ts) else { continue };
            if let Some(c) = self.ct[self.arcs[a].nbr as usize] {
                let c = t.max(c);
                if c <= floor {
                    at_most_floor += 1;
                } else {
                    above.push(c);
                }
            }
        }
        let value = if at_most_floor >= self.k {
            Some(floor)
        } else if at_most_floor + above.len() < self.k {
            None
        } else {
            let (_, kth, _) = above.select_nth_unstable(self.k - 1 - at_most_floor);
            Some(*kth)
        };
        self.scratch = above;
        value
    }

    /// Moves from `ts - 1` to `ts`, leaving the vertices whose core time
    /// changed in `changed`, sorted.
    fn advance(&mut self, ts: Time, changed: &mut Vec<VertexId>) {
        for e in self.g.edges_at(ts - 1) {
            for x in [e.u, e.v] {
                if self.ct[x as usize].is_some() && !self.queued[x as usize] {
                    self.queued[x as usize] = true;
                    self.queue.push(x);
                }
            }
        }

        changed.clear();
        while let Some(u) = self.queue.pop() {
            self.queued[u as usize] = false;
            let Some(old) = self.ct[u as usize] else { continue };
            let new = self.evaluate(u, ts, old);
            if new == Some(old) {
                continue;
            }
            debug_assert!(new.map_or(true, |c| c > old));
            self.ct[u as usize] = new;
            changed.push(u);
            // Only a contribution that moves from at most CT(w) to beyond it
            // can raise the k-th smallest value of neighbor w.
            for a in self.vpair_off[u as usize]..self.vpair_off[u as usize + 1] {
                let arc = self.arcs[a];
                if arc.cur == arc.end {
                    continue;
                }
                let t = self.arc_times[arc.cur as usize];
                let w = arc.nbr as usize;
                if self.queued[w] {
                    continue;
                }
                if let Some(cw) = self.ct[w] {
                    let was_counted = t.max(old) <= cw;
                    let still_counted = new.is_some_and(|c| t.max(c) <= cw);
                    if was_counted && !still_counted {
                        self.queued[w] = true;
                        self.queue.push(w as VertexId);
                    }
                }
            }
        }
        changed.sort_unstable();
        changed.dedup();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn entries(idx: &VctIndex, g: &TemporalGraph, label: u64) -> Vec<(Time, Option<Time>)> {
        idx.entries(g.vertex_of(label).unwrap())
            .iter()
            .map(|e| (e.from_ts, e.core_end))
            .collect()
    }

    #[test]
    fn g14_k2_rows() {
        let g = fixtures::g14();
        let idx = build_vct(&g, 2, g.full_range()).unwrap();
        assert_eq!(entries(&idx, &g, 1), vec![(1, Some(3)), (3, Some(5)), (6, Some(7)), (7, None)]);
        assert_eq!(entries(&idx, &g, 5), vec![(1, Some(7)), (7, None)]);
        assert_eq!(entries(&idx, &g, 3), vec![(1, Some(4)), (2, Some(6)), (3, Some(7)), (7, None)]);
        assert_eq!(entries(&idx, &g, 9), vec![(1, Some(4)), (2, None)]);
    }

    #[test]
    fn g14_k1_is_first_incident_time() {
        let g = fixtures::g14();
        let idx = build_vct(&g, 1, g.full_range()).unwrap();
        assert_eq!(entries(&idx, &g, 5), vec![(1, Some(6)), (7, Some(7))]);
    }

    #[test]
    fn g14_k3_all_absent() {
        let g = fixtures::g14();
        let idx = build_vct(&g, 3, g.full_range()).unwrap();
        for u in 0..g.n() as VertexId {
            assert_eq!(idx.entries(u), &[VctEntry { from_ts: 1, core_end: None }]);
        }
    }

    #[test]
    fn core_time_lookup() {
        let g = fixtures::g14();
        let idx = build_vct(&g, 2, g.full_range()).unwrap();
        let v = |l| g.vertex_of(l).unwrap();
        assert_eq!(idx.core_time_at(v(1), 2).unwrap(), Some(3));
        assert_eq!(idx.core_time_at(v(1), 3).unwrap(), Some(5));
        assert_eq!(idx.core_time_at(v(1), 7).unwrap(), None);
        assert_eq!(idx.core_time_at(v(9), 2).unwrap(), None);
        assert!(matches!(idx.core_time_at(99, 2), Err(Error::UnknownVertex(99))));
        assert!(idx.core_time_at(v(1), 8).is_err());
        assert!(idx.core_time_at(v(1), 0).is_err());
    }

    #[test]
    fn isolated_in_range_has_no_entries() {
        let g = fixtures::g14();
        let idx = build_vct(&g, 1, Window::new(1, 2)).unwrap();
        assert!(idx.entries(g.vertex_of(5).unwrap()).is_empty());
        assert_eq!(idx.core_time_at(g.vertex_of(5).unwrap(), 1).unwrap(), None);
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = fixtures::g14();
        assert!(matches!(build_vct(&g, 0, g.full_range()), Err(Error::InvalidK)));
        assert!(build_vct(&g, 2, Window::new(0, 3)).is_err());
        assert!(build_vct(&g, 2, Window::new(3, 8)).is_err());
    }

    #[test]
    fn table_text() {
        let g = fixtures::g14();
        let idx = build_vct(&g, 2, g.full_range()).unwrap();
        let table = idx.to_table(&g);
        assert!(table.starts_with("1: [1,3], [3,5], [6,7], [7,inf]\n"));
        assert!(table.contains("9: [1,4], [2,inf]\n"));
    }
}
