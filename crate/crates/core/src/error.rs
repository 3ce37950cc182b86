use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("inhomogeneous polynomial: found total degrees {0} and {1}")]
    Inhomogeneous(u32, u32),

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("variable x{index} out of range for n = {n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial vanishes at the evaluation point")]
    ZeroLevel,

    #[error("h(X) = {0} is not positive; the ray does not meet the level set")]
    NonpositiveLevel(f64),

    #[error("metric routes disagree by {deviation:e} (tolerance {tolerance:e})")]
    RouteMismatch { deviation: f64, tolerance: f64 },

    #[error("base point is null for the quadratic form")]
    NullBasePoint,

    #[error("point left the cone: h(Y) = {0}")]
    ConeExit(f64),

    #[error("pole: z0 = 0 for a basic function of degree {0}")]
    Pole(u32),

    #[error("cone is not properly nondegenerate: |gamma(u,u)| = {0:e}")]
    ImproperCone(f64),

    #[error("potential undefined: log argument {0} is not positive")]
    Domain(f64),

    #[error("bilinear map is not isometric: residual {0}")]
    NotIsometric(String),

    #[error("degenerate metric: {0} null directions")]
    DegenerateMetric(usize),

    #[error("catalog entry {0} has no evaluator")]
    UnimplementedEntry(String),

    #[error("unknown catalog entry {0}")]
    UnknownEntry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("blocks do not partition 0..{n}: {msg}")]
    BadBlocks { n: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
