use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{replay_sorted, ResultSink};
use crate::ecs::EcsIndex;
use crate::{EdgeId, Window};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BaseStats {
    pub cores_emitted: u64,
    pub result_size: u64,
    /// Windows whose candidate core was built and looked up.
    pub windows_scanned: u64,
}

fn hash128(edges: &[EdgeId]) -> u128 {
    let mut hi = DefaultHasher::new();
    0xa5u8.hash(&mut hi);
    edges.hash(&mut hi);
    let mut lo = DefaultHasher::new();
    0x5au8.hash(&mut lo);
    edges.hash(&mut lo);
    (u128::from(hi.finish()) << 64) | u128::from(lo.finish())
}

/// Bucket-based enumeration over every window.
///
/// For each start time, each edge contributes its first window starting no
/// earlier than `ts`, bucketed by end time; the running union over end times
/// is the core of `[ts, te]`. Repeats are filtered through a table of 128-bit
/// hashes backed by the stored lists. All distinct cores are collected, then
/// handed to `sink` in TTI order.
pub fn enum_base<S: ResultSink + ?Sized>(ecs: &EcsIndex, sink: &mut S) -> BaseStats {
    let range = ecs.range();
    let mut stats = BaseStats::default();
    let mut stored: Vec<(Window, Vec<EdgeId>)> = Vec::new();
    let mut table: HashMap<u128, Vec<usize>> = HashMap::new();

    for ts in range.start..=range.end {
        let mut buckets: Vec<Vec<EdgeId>> = vec![Vec::new(); (range.end - ts + 1) as usize];
        for id in ecs.edge_ids() {
            let ws = ecs.windows_of(id);
            let i = ws.partition_point(|w| w.start < ts);
            if let Some(w) = ws.get(i) {
                if w.end <= range.end {
                    buckets[(w.end - ts) as usize].push(id);
                }
            }
        }
        let mut core: Vec<EdgeId> = Vec::new();
        for bucket in &buckets {
            if bucket.is_empty() {
                continue;
            }
            stats.windows_scanned += 1;
            core.extend_from_slice(bucket);
            let mut canonical = core.clone();
            canonical.sort_unstable();
            let h = hash128(&canonical);
            let slots = table.entry(h).or_default();
            if slots.iter().any(|&s| stored[s].1 == canonical) {
                continue;
            }
            let tti = Window::new(
                ecs.edge(canonical[0]).t,
                ecs.edge(*canonical.last().unwrap()).t,
            );
            slots.push(stored.len());
            stored.push((tti, canonical));
        }
    }

    stored.sort_unstable_by_key(|(tti, _)| *tti);
    stats.cores_emitted = stored.len() as u64;
    stats.result_size = stored.iter().map(|(_, c)| c.len() as u64).sum();
    replay_sorted(stored.iter().map(|(w, c)| (*w, c.as_slice())), sink);
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecs::build_ecs;
    use crate::enumeration::{CollectSink, SinkMode};
    use crate::fixtures;
    use crate::vct::build_vct;

    #[test]
    fn two_nested_cores_on_short_range() {
        let g = fixtures::g14();
        let range = Window::new(1, 4);
        let idx = build_ecs(&g, 2, range, &build_vct(&g, 2, range).unwrap()).unwrap();
        let mut sink = CollectSink::new(SinkMode::Full);
        let stats = enum_base(&idx, &mut sink);
        assert_eq!(stats.cores_emitted, 2);
        assert_eq!(sink.results[0].tti, Window::new(1, 4));
        assert_eq!(sink.results[0].size, 6);
        assert_eq!(sink.results[1].tti, Window::new(2, 3));
        assert_eq!(sink.results[1].edges, vec![1, 3, 4]);
    }

    #[test]
    fn empty_index_gives_nothing() {
        let g = fixtures::g14();
        let range = g.full_range();
        let idx = build_ecs(&g, 4, range, &build_vct(&g, 4, range).unwrap()).unwrap();
        let mut sink = CollectSink::new(SinkMode::Count);
        let stats = enum_base(&idx, &mut sink);
        assert_eq!(stats.cores_emitted, 0);
        assert_eq!(stats.windows_scanned, 0);
    }

    #[test]
    fn hash_is_order_sensitive_and_stable() {
        assert_eq!(hash128(&[1, 2, 3]), hash128(&[1, 2, 3]));
        assert_ne!(hash128(&[1, 2, 3]), hash128(&[1, 3, 2]));
    }
}
