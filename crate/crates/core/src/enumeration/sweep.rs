use super::{Emission, ResultSink, WindowList};
use crate::ecs::{EcsIndex, MinimalCoreWindow};
use crate::{EdgeId, Time, Window};

/// Counters from one [`enum_all`] run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub cores_emitted: u64,
    /// `|R|`: sum of emitted core sizes.
    pub result_size: u64,
    /// Every list node touched: deletions, insertions, cursor steps and scans.
    pub node_ops: u64,
    pub peak_live_nodes: usize,
    pub peak_accumulator: usize,
    /// Whether live nodes plus accumulator stayed within `|ECS|` plus the
    /// largest core of the current start time, at every start time.
    pub state_within_bound: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AsOutputStats {
    pub emitted: u64,
    pub result_size: u64,
    pub visits: u64,
    pub largest_core: usize,
}

/// The list as seen right before cores for `ts` are produced.
pub struct SweepState<'a> {
    pub ts: Time,
    pub list: &'a WindowList,
    /// Node `i` of the list holds `windows[i]`.
    pub windows: &'a [MinimalCoreWindow],
}

/// Emits every core whose TTI starts at `ts`.
///
/// `list` must hold exactly the windows with `active <= ts <= start`, in
/// nondecreasing end order. Edges are accumulated front to back; once a window
/// starting at `ts` has been seen, the accumulated set is emitted at the last
/// node of each run of equal end times.
pub fn as_output<S: ResultSink + ?Sized>(
    list: &WindowList,
    windows: &[MinimalCoreWindow],
    ts: Time,
    sink: &mut S,
    acc: &mut Vec<EdgeId>,
) -> AsOutputStats {
    let mut stats = AsOutputStats::default();
    acc.clear();
    let mut valid = false;
    let mut emitted_upto = 0;
    let mut cur = list.first();
    while let Some(node) = cur {
        stats.visits += 1;
        let w = &windows[node as usize];
        acc.push(w.edge_id);
        if w.start == ts {
            valid = true;
        }
        let next = list.next(Some(node));
        let run_continues = next.is_some_and(|x| windows[x as usize].end == w.end);
        if valid && !run_continues {
            sink.accept(&Emission {
                tti: Window::new(ts, w.end),
                core: acc,
                added: &acc[emitted_upto..],
            });
            emitted_upto = acc.len();
            stats.emitted += 1;
            stats.result_size += acc.len() as u64;
            stats.largest_core = acc.len();
        }
        cur = next;
    }
    stats
}

/// Enumerates every distinct temporal k-core of the index's range.
pub fn enum_all<S: ResultSink + ?Sized>(ecs: &EcsIndex, sink: &mut S) -> EnumStats {
    enum_all_observed(ecs, sink, |_| {})
}

/// [`enum_all`], calling `observe` with the list state before each start
/// time's output.
pub fn enum_all_observed<S, F>(ecs: &EcsIndex, sink: &mut S, mut observe: F) -> EnumStats
where
    S: ResultSink + ?Sized,
    F: FnMut(&SweepState<'_>),
{
    let range = ecs.range();
    let (ts0, te0) = (range.start, range.end);
    let span = range.len() as usize;
    let slot = |t: Time| (t - ts0) as usize;

    let windows: Vec<MinimalCoreWindow> = ecs.iter().collect();
    let nw = windows.len();

    // Node ids in ascending end order (counting sort, stable).
    let mut end_off = vec![0usize; span + 1];
    for w in &windows {
        end_off[slot(w.end) + 1] += 1;
    }
    for i in 1..=span {
        end_off[i] += end_off[i - 1];
    }
    let mut by_end = vec![0u32; nw];
    {
        let mut fill = end_off.clone();
        for (i, w) in windows.iter().enumerate() {
            by_end[fill[slot(w.end)]] = i as u32;
            fill[slot(w.end)] += 1;
        }
    }

    let starts = Buckets::build(span, &by_end, |i| slot(windows[i as usize].start));
    // A start time with no window starting at it has no core; inserting its
    // newly active windows is postponed to the next start time that does.
    let mut next_valid = vec![usize::MAX; span + 1];
    for s in (0..span).rev() {
        next_valid[s] = if starts.get(s).is_empty() { next_valid[s + 1] } else { s };
    }
    let inserts = Buckets::build(span, &by_end, |i| next_valid[slot(windows[i as usize].active)]);

    let mut stats = EnumStats {
        state_within_bound: true,
        ..EnumStats::default()
    };
    let mut list = WindowList::with_capacity(nw);
    let mut acc: Vec<EdgeId> = Vec::new();
    for ts in ts0..=te0 {
        let s = slot(ts);
        if s > 0 {
            for &w in starts.get(s - 1) {
                list.delete(w);
                stats.node_ops += 1;
            }
        }
        if starts.get(s).is_empty() {
            continue;
        }
        let mut cursor: Option<u32> = None;
        for &w in inserts.get(s) {
            let end = windows[w as usize].end;
            while let Some(x) = list.next(cursor) {
                if windows[x as usize].end < end {
                    cursor = Some(x);
                    stats.node_ops += 1;
                } else {
                    break;
                }
            }
            list.insert_after(w, cursor);
            stats.node_ops += 1;
            cursor = Some(w);
        }
        stats.peak_live_nodes = stats.peak_live_nodes.max(list.len());

        observe(&SweepState {
            ts,
            list: &list,
            windows: &windows,
        });

        let out = as_output(&list, &windows, ts, sink, &mut acc);
        stats.cores_emitted += out.emitted;
        stats.result_size += out.result_size;
        stats.node_ops += out.visits;
        stats.peak_accumulator = stats.peak_accumulator.max(acc.len());
        if list.len() + acc.len() > nw + out.largest_core {
            stats.state_within_bound = false;
        }
    }
    stats
}

/// Node ids grouped by a time slot, each group keeping the input order.
struct Buckets {
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl Buckets {
    fn build(span: usize, order: &[u32], key: impl Fn(u32) -> usize) -> Self {
        let mut offsets = vec![0usize; span + 1];
        for &i in order {
            offsets[key(i) + 1] += 1;
        }
        for s in 1..=span {
            offsets[s] += offsets[s - 1];
        }
        let mut fill = offsets.clone();
        let mut items = vec![0u32; order.len()];
        for &i in order {
            let k = key(i);
            items[fill[k]] = i;
            fill[k] += 1;
        }
        Buckets { offsets, items }
    }

    fn get(&self, slot: usize) -> &[u32] {
        &self.items[self.offsets[slot]..self.offsets[slot + 1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecs::build_ecs;
    use crate::enumeration::{CollectSink, SinkMode};
    use crate::fixtures;
    use crate::vct::build_vct;
    use crate::TemporalGraph;

    fn ecs(g: &TemporalGraph, k: u32, range: Window) -> EcsIndex {
        build_ecs(g, k, range, &build_vct(g, k, range).unwrap()).unwrap()
    }

    #[test]
    fn g14_first_start_time() {
        let g = fixtures::g14();
        let idx = ecs(&g, 2, g.full_range());
        let mut sink = CollectSink::new(SinkMode::Sizes);
        enum_all(&idx, &mut sink);
        let first: Vec<(Window, usize)> = sink
            .results
            .iter()
            .filter(|r| r.tti.start == 1)
            .map(|r| (r.tti, r.size))
            .collect();
        assert_eq!(
            first,
            vec![
                (Window::new(1, 4), 6),
                (Window::new(1, 5), 11),
                (Window::new(1, 6), 12),
                (Window::new(1, 7), 14)
            ]
        );
    }

    #[test]
    fn g14_list_at_ts1_starts_with_end3_windows() {
        let g = fixtures::g14();
        let idx = ecs(&g, 2, g.full_range());
        let mut seen = false;
        enum_all_observed(&idx, &mut |_: &Emission<'_>| {}, |st| {
            if st.ts == 1 {
                let ends: Vec<Time> = st.list.iter().map(|i| st.windows[i as usize].end).collect();
                assert_eq!(&ends[..6], &[3, 3, 3, 4, 4, 4]);
                seen = true;
            }
        });
        assert!(seen);
    }

    #[test]
    fn restricted_range_skips_starts_without_windows() {
        let g = fixtures::g14();
        let idx = ecs(&g, 2, Window::new(1, 4));
        let mut sink = CollectSink::new(SinkMode::Sizes);
        let stats = enum_all(&idx, &mut sink);
        let got: Vec<(Window, usize)> = sink.results.iter().map(|r| (r.tti, r.size)).collect();
        assert_eq!(got, vec![(Window::new(1, 4), 6), (Window::new(2, 3), 3)]);
        assert_eq!(stats.cores_emitted, 2);
        assert_eq!(stats.result_size, 9);
    }

    #[test]
    fn empty_list_emits_nothing() {
        let list = WindowList::with_capacity(0);
        let mut acc = Vec::new();
        let mut count = 0;
        let out = as_output(&list, &[], 1, &mut |_: &Emission<'_>| count += 1, &mut acc);
        assert_eq!(out.emitted, 0);
        assert_eq!(count, 0);
    }

    #[test]
    fn one_shared_window_gives_one_core() {
        // Triangle at a single time: every edge has the window [1,1].
        let g = TemporalGraph::from_raw_edges([(1, 2, 5), (2, 3, 5), (1, 3, 5)]).unwrap();
        let idx = ecs(&g, 2, g.full_range());
        assert_eq!(idx.total_size(), 3);
        let mut sink = CollectSink::new(SinkMode::Full);
        enum_all(&idx, &mut sink);
        assert_eq!(sink.results.len(), 1);
        assert_eq!(sink.results[0].edges, vec![0, 1, 2]);
        assert_eq!(sink.results[0].tti, Window::new(1, 1));
    }
}
