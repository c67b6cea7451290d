use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("duplicate document id {0:?}")]
    DuplicateDocumentId(String),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: &'static str,
        line: usize,
        message: String,
    },

    #[error("alias target {target:?} of {from:?} is itself an alias key")]
    AliasChain { from: String, target: String },

    #[error("min_doc_count must be at least 1")]
    InvalidMinDocCount,

    #[error("invalid matrix dimensions {rows}x{cols} for {len} values")]
    InvalidDimensions {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: Shape, right: Shape },

    #[error(
        "SVD of {shape} matrix did not converge after {sweeps} sweeps (residual {residual:e})"
    )]
    NoConvergence {
        shape: Shape,
        sweeps: usize,
        residual: f64,
    },

    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },

    #[error("term {term:?} not in vocabulary{}", candidates_suffix(.candidates))]
    UnknownTerm {
        term: String,
        candidates: Vec<String>,
    },

    #[error("unknown document id {0:?}")]
    UnknownDocument(String),

    #[error("empty rank list")]
    EmptyRanks,

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("invalid heatmap spec: {0}")]
    InvalidHeatmapSpec(String),

    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    #[error("maxval {0} exceeds 255")]
    MaxvalTooLarge(u32),

    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    TruncatedPixelData { expected: usize, found: usize },

    #[error("pixel value {value} exceeds maxval {maxval}")]
    PixelOutOfRange { value: u32, maxval: u32 },
}

fn candidates_suffix(candidates: &[String]) -> String {
    if candidates.is_empty() {
        String::new()
    } else {
        format!(" (did you mean: {})", candidates.join(", "))
    }
}

/// `rows x cols`, used in error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape(pub usize, pub usize);

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.0, self.1)
    }
}
