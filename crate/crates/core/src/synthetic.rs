//! Seeded random temporal graphs for fuzzing and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::TemporalGraph;

/// Uniform random multigraph with `n` vertices, about `m` edges and times in
/// `1..=t_max`. Self-loops are redrawn, so the result has at least one edge
/// whenever `n >= 2` and `m >= 1`.
pub fn uniform(n: u64, m: usize, t_max: i64, seed: u64) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n.max(2);
    let triples: Vec<(u64, u64, i64)> = (0..m.max(1))
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v, rng.gen_range(1..=t_max.max(1)))
        })
        .collect();
    TemporalGraph::from_raw_edges(triples).expect("at least one non-loop edge")
}

/// One member of the oracle fuzz corpus: `n <= 25`, `m <= 120`, `t_max <= 15`,
/// with density varied so that cores up to k = 4 show up.
pub fn fuzz_instance(seed: u64) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.gen_range(3..=25u64);
    let t_max = rng.gen_range(1..=15i64);
    let m = rng.gen_range(1..=120usize);
    uniform(n, m, t_max, seed)
}

/// Shape of a [`planted_bursts`] graph.
#[derive(Clone, Debug)]
pub struct BurstConfig {
    pub vertices: u64,
    pub timestamps: i64,
    /// Uniform background edges.
    pub background_edges: usize,
    pub communities: usize,
    pub community_size: usize,
    /// Number of consecutive timestamps a community is active for.
    pub burst_length: i64,
    pub edges_per_community: usize,
    pub seed: u64,
}

impl Default for BurstConfig {
    /// About 10^5 edges over 10^4 timestamps.
    fn default() -> Self {
        BurstConfig {
            vertices: 20_000,
            timestamps: 10_000,
            background_edges: 60_000,
            communities: 100,
            community_size: 24,
            burst_length: 150,
            edges_per_community: 400,
            seed: 42,
        }
    }
}

/// Sparse uniform background plus short-lived dense communities. Every
/// timestamp in `1..=timestamps` carries at least one edge.
pub fn planted_bursts(cfg: &BurstConfig) -> TemporalGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.vertices.max(2);
    let mut triples = Vec::with_capacity(
        cfg.background_edges + cfg.communities * cfg.edges_per_community + cfg.timestamps as usize,
    );
    let random_pair = |rng: &mut ChaCha8Rng| {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        (u, v)
    };
    for t in 1..=cfg.timestamps {
        let (u, v) = random_pair(&mut rng);
        triples.push((u, v, t));
    }
    for _ in 0..cfg.background_edges.saturating_sub(cfg.timestamps as usize) {
        let (u, v) = random_pair(&mut rng);
        triples.push((u, v, rng.gen_range(1..=cfg.timestamps)));
    }
    let all: Vec<u64> = (0..n).collect();
    let size = cfg.community_size.clamp(2, n as usize);
    for _ in 0..cfg.communities {
        let members: Vec<u64> = all.choose_multiple(&mut rng, size).copied().collect();
        let len = cfg.burst_length.clamp(1, cfg.timestamps);
        let begin = rng.gen_range(1..=cfg.timestamps - len + 1);
        for _ in 0..cfg.edges_per_community {
            let a = rng.gen_range(0..size);
            let mut b = rng.gen_range(0..size - 1);
            if b >= a {
                b += 1;
            }
            triples.push((members[a], members[b], rng.gen_range(begin..begin + len)));
        }
    }
    TemporalGraph::from_raw_edges(triples).expect("non-empty")
}
