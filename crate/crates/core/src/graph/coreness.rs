use super::TemporalGraph;
use crate::Window;

/// Static core decomposition of the window's projection.
///
/// The projection is the simple graph on distinct neighbor pairs with at least
/// one edge in `w`. Vertices without window edges get coreness 0. `w` is clamped
/// to the time domain.
pub fn static_coreness(g: &TemporalGraph, w: Window) -> Vec<u32> {
    let n = g.n();
    let mut pairs: Vec<(u32, u32)> = g.edge_ids_in(w).map(|id| {
        let e = g.edge(id);
        (e.u, e.v)
    }).collect();
    pairs.sort_unstable();
    pairs.dedup();

    let mut offsets = vec![0usize; n + 1];
    for &(u, v) in &pairs {
        offsets[u as usize + 1] += 1;
        offsets[v as usize + 1] += 1;
    }
    for i in 1..=n {
        offsets[i] += offsets[i - 1];
    }
    let mut fill = offsets.clone();
    let mut nbrs = vec![0u32; offsets[n]];
    for &(u, v) in &pairs {
        nbrs[fill[u as usize]] = v;
        fill[u as usize] += 1;
        nbrs[fill[v as usize]] = u;
        fill[v as usize] += 1;
    }

    // Bucket-sort peeling (Batagelj & Zaversnik).
    let mut deg: Vec<usize> = (0..n).map(|u| offsets[u + 1] - offsets[u]).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    {
        let mut next = bin.clone();
        for u in 0..n {
            pos[u] = next[deg[u]];
            vert[pos[u]] = u;
            next[deg[u]] += 1;
        }
    }
    for i in 0..n {
        let u = vert[i];
        for &x in &nbrs[offsets[u]..offsets[u + 1]] {
            let x = x as usize;
            if deg[x] > deg[u] {
                let dx = deg[x];
                let px = pos[x];
                let pw = bin[dx];
                let w = vert[pw];
                if x != w {
                    vert.swap(px, pw);
                    pos[x] = pw;
                    pos[w] = px;
                }
                bin[dx] += 1;
                deg[x] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as u32).collect()
}
