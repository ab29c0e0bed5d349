//! Front end for temporal k-core queries: dataset loading, query resolution,
//! result streams, workload generation, oracle verification and benchmarks.

pub mod bench;
pub mod gen;
pub mod memory;
pub mod output;
pub mod query;
pub mod verify;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::Context;
use tkcore::{parse_edge_list, ParseOptions, TemporalGraph};

/// Reads a whitespace-separated `u v t` edge list.
pub fn load_graph(path: &Path) -> anyhow::Result<TemporalGraph> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let (g, _) = parse_edge_list(BufReader::new(file), &ParseOptions::default())
        .with_context(|| format!("{}", path.display()))?;
    Ok(g)
}
