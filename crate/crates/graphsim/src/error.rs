use thiserror::Error;

/// Everything that can go wrong while building inputs or running learners.
///
/// Variants split into two groups: bad configuration or input data
/// (rejected before any learner state exists) and runtime failures
/// (resource caps, numerical breakdown). `exit_code` preserves the split
/// for the command-line tools.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {v} out of range 1..={n}")]
    VertexRange { v: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph too small: need at least {need} vertices, got {got}")]
    TooSmall { need: usize, got: usize },

    #[error("labeling has {got} entries but the graph has {want} vertices")]
    LabelLength { got: usize, want: usize },

    #[error("gave up after {0} resampling attempts")]
    ResampleCap(usize),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("random walk exceeded {0} steps without covering the graph")]
    WalkCap(u64),

    #[error("expert pool exceeded {0} entries")]
    PoolCap(usize),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// 2 for configuration and input problems, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Parse { .. }
            | Error::VertexRange { .. }
            | Error::SelfLoop(_)
            | Error::Disconnected
            | Error::TooSmall { .. }
            | Error::LabelLength { .. }
            | Error::ResampleCap(_)
            | Error::Io(_) => 2,
            Error::Eigen(_) | Error::WalkCap(_) | Error::PoolCap(_) => 3,
        }
    }
}
