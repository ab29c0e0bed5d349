//! Small reference graphs with hand-checked answers.

use crate::{graph::parse_edge_list_str, ParseOptions, TemporalGraph};

/// Nine vertices, fourteen edges over seven timestamps. Vertex `i` is labeled `i`.
pub const G14_EDGE_LIST: &str = "\
# u v t
2 9 1
1 4 2
2 3 2
1 2 3
2 4 3
3 9 4
4 8 4
1 6 5
1 7 5
2 8 5
6 7 5
1 3 6
3 5 6
1 5 7
";

pub fn g14() -> TemporalGraph {
    parse_edge_list_str(G14_EDGE_LIST, &ParseOptions::default())
        .expect("fixture parses")
        .0
}
