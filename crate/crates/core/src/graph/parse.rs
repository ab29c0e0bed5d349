use std::collections::{BTreeSet, HashSet};
use std::io::BufRead;

use super::{compress_timestamps, TemporalEdge, TemporalGraph};
use crate::{Error, Result, VertexId};

/// Normalization switches for edge-list ingestion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Treat input as directed: a record `(v, u, t)` that only collides with
    /// `(u, v, t)` because of endpoint sorting is counted separately in
    /// [`ParseReport::reversed_duplicates`] instead of as an exact duplicate.
    pub directed_input: bool,
    /// Collapse exact duplicates silently. When off, duplicates are still stored
    /// once but their multiplicity is kept (see [`TemporalGraph::multiplicity`]).
    pub dedupe_exact: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            directed_input: false,
            dedupe_exact: true,
        }
    }
}

/// What normalization removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub records: usize,
    pub self_loops: usize,
    pub exact_duplicates: usize,
    pub reversed_duplicates: usize,
}

/// Reads a whitespace-separated `u v t` edge list.
///
/// Lines starting with `#` or `%` and blank lines are skipped; fields after the
/// third are ignored.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
    opts: &ParseOptions,
) -> Result<(TemporalGraph, ParseReport)> {
    let mut triples = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some(triple) = parse_line(&line, idx + 1)? {
            triples.push(triple);
        }
    }
    normalize(triples.into_iter(), opts)
}

pub fn parse_edge_list_str(text: &str, opts: &ParseOptions) -> Result<(TemporalGraph, ParseReport)> {
    parse_edge_list(text.as_bytes(), opts)
}

fn parse_line(line: &str, lineno: usize) -> Result<Option<(u64, u64, i64)>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
        return Ok(None);
    }
    let mut fields = trimmed.split_whitespace();
    let mut next = |name: &str| {
        fields.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected 3 fields (u v t), missing {name}"),
        })
    };
    let (u, v, t) = (next("u")?, next("v")?, next("t")?);
    let vertex = |s: &str| {
        s.parse::<u64>().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("vertex id {s:?} is not a non-negative integer"),
        })
    };
    let t = t.parse::<i64>().map_err(|_| Error::Parse {
        line: lineno,
        message: format!("timestamp {t:?} is not an integer"),
    })?;
    Ok(Some((vertex(u)?, vertex(v)?, t)))
}

pub(super) fn normalize<I>(triples: I, opts: &ParseOptions) -> Result<(TemporalGraph, ParseReport)>
where
    I: Iterator<Item = (u64, u64, i64)>,
{
    let mut report = ParseReport::default();
    let mut kept = Vec::new();
    for (u, v, t) in triples {
        report.records += 1;
        if u == v {
            report.self_loops += 1;
            continue;
        }
        kept.push((u, v, t));
    }
    if kept.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut seen_oriented: HashSet<(u64, u64, i64)> = HashSet::new();
    let mut seen: HashSet<(u64, u64, i64)> = HashSet::new();
    for &(u, v, t) in &kept {
        let canon = (u.min(v), u.max(v), t);
        if seen.insert(canon) {
            seen_oriented.insert((u, v, t));
        } else if opts.directed_input && seen_oriented.insert((u, v, t)) {
            report.reversed_duplicates += 1;
        } else {
            report.exact_duplicates += 1;
        }
    }

    let labels: Vec<u64> = kept
        .iter()
        .flat_map(|&(u, v, _)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let time_domain = compress_timestamps(kept.iter().map(|&(_, _, t)| t));
    let dense = |l: u64| labels.binary_search(&l).expect("label collected") as VertexId;
    let edges = kept
        .iter()
        .map(|&(u, v, t)| {
            let (a, b) = (dense(u), dense(v));
            TemporalEdge {
                u: a.min(b),
                v: a.max(b),
                t: time_domain.rank_of(t).expect("time collected"),
            }
        })
        .collect();
    let g = TemporalGraph::assemble(labels, edges, time_domain, !opts.dedupe_exact)?;
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn parse(text: &str) -> Result<TemporalGraph> {
        parse_edge_list_str(text, &ParseOptions::default()).map(|(g, _)| g)
    }

    #[test]
    fn collapses_duplicates_and_compresses() {
        let g = parse("1 2 100\n2 3 105\n1 2 100").unwrap();
        assert_eq!((g.n(), g.m(), g.t_max()), (3, 2, 2));
        assert_eq!(g.time_domain().raw_of(2), Some(105));
    }

    #[test]
    fn self_loop_only_is_empty() {
        assert!(matches!(parse("5 5 7"), Err(Error::EmptyGraph)));
        assert!(matches!(parse(""), Err(Error::EmptyGraph)));
        assert!(matches!(parse("# only a comment\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn g14_shape() {
        let g = fixtures::g14();
        assert_eq!((g.n(), g.m(), g.t_max()), (9, 14, 7));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        match parse("1 2 3\n1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("% header\n1 x 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse("1 2 3.5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("-1 2 3\n").is_err());
    }

    #[test]
    fn comments_whitespace_and_trailing_fields() {
        let g = parse("# c\n% c\n\n 10\t20   -5 extra 1.0\n20 30 7\n").unwrap();
        assert_eq!((g.n(), g.m(), g.t_max()), (3, 2, 2));
        assert_eq!(g.time_domain().raw_of(1), Some(-5));
    }

    #[test]
    fn endpoints_are_canonical_and_sparse_ids_remapped() {
        let g = parse("900 7 1\n7 900 2\n").unwrap();
        assert_eq!(g.n(), 2);
        for e in g.edges() {
            assert!(e.u < e.v);
        }
        assert_eq!(g.label(0), 7);
        assert_eq!(g.label(1), 900);
        assert_eq!(g.vertex_of(900), Some(1));
    }

    #[test]
    fn duplicate_accounting() {
        let text = "1 2 5\n2 1 5\n1 2 5\n3 3 1\n";
        let (g, r) = parse_edge_list_str(text, &ParseOptions::default()).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.multiplicity(), None);
        assert_eq!((r.records, r.self_loops, r.exact_duplicates, r.reversed_duplicates), (4, 1, 2, 0));

        let opts = ParseOptions { directed_input: true, dedupe_exact: false };
        let (g, r) = parse_edge_list_str(text, &opts).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.multiplicity(), Some(&[3u32][..]));
        assert_eq!((r.exact_duplicates, r.reversed_duplicates), (1, 1));
    }

    #[test]
    fn parallel_edges_at_distinct_times_are_kept() {
        let g = parse("1 2 1\n1 2 2\n2 1 3\n").unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = fixtures::g14();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let h = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(g.edges(), h.edges());
    }
}
