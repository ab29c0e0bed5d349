//! JSON-lines result stream.
//!
//! One object per core: `tti_ts`, `tti_te`, `size`, and for `delta`/`full`
//! an `edges` array of `[u, v, t]` triples sorted by `(t, u, v)`. Vertices are
//! original input labels; all times are compressed ranks, like the TTI.

use std::io::{self, Write};

use serde::Serialize;
use tkcore::enumeration::{Emission, ResultSink, SinkMode};
use tkcore::{EdgeId, TemporalGraph, Time};

#[derive(Serialize)]
struct Record {
    tti_ts: Time,
    tti_te: Time,
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(u64, u64, Time)>>,
}

pub struct JsonLinesSink<'g, W: Write> {
    g: &'g TemporalGraph,
    mode: SinkMode,
    out: W,
    error: Option<io::Error>,
    scratch: Vec<EdgeId>,
}

impl<'g, W: Write> JsonLinesSink<'g, W> {
    pub fn new(g: &'g TemporalGraph, mode: SinkMode, out: W) -> Self {
        JsonLinesSink { g, mode, out, error: None, scratch: Vec::new() }
    }

    /// Flushes and returns the writer, or the first write error.
    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }

    fn write(&mut self, core: &Emission<'_>) -> io::Result<()> {
        let edges = match self.mode {
            SinkMode::Count => return Ok(()),
            SinkMode::Sizes => None,
            SinkMode::Delta | SinkMode::Full => {
                let src = if self.mode == SinkMode::Delta { core.added } else { core.core };
                self.scratch.clear();
                self.scratch.extend_from_slice(src);
                self.scratch.sort_unstable();
                Some(
                    self.scratch
                        .iter()
                        .map(|&id| {
                            let e = self.g.edge(id);
                            (self.g.label(e.u), self.g.label(e.v), e.t)
                        })
                        .collect(),
                )
            }
        };
        let record = Record { tti_ts: core.tti.start, tti_te: core.tti.end, size: core.size(), edges };
        serde_json::to_writer(&mut self.out, &record)?;
        self.out.write_all(b"\n")
    }
}

impl<W: Write> ResultSink for JsonLinesSink<'_, W> {
    fn accept(&mut self, core: &Emission<'_>) {
        if self.error.is_none() {
            if let Err(e) = self.write(core) {
                self.error = Some(e);
            }
        }
    }
}
