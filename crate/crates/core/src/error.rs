use crate::{Time, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges after normalization")]
    EmptyGraph,

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("window [{start},{end}] is not inside the time domain [1,{t_max}]")]
    InvalidWindow { start: Time, end: Time, t_max: Time },

    #[error("k must be at least 1")]
    InvalidK,

    #[error("index built for k={found_k} range [{found_ts},{found_te}], expected k={k} range [{ts},{te}]")]
    IndexMismatch {
        k: u32,
        ts: Time,
        te: Time,
        found_k: u32,
        found_ts: Time,
        found_te: Time,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
