use thiserror::Error;

/// Crate-wide error type. Analysis outcomes that are expected results
/// (such as "not periodic up to the window") are not errors; they appear
/// as enum variants on the relevant return types instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("zero vector")]
    ZeroVector,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("non-integral input: {0}")]
    NonIntegral(String),
    #[error("non-primitive vector (entry gcd {0})")]
    NonPrimitive(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("desk-scale limit exceeded: {0}")]
    DeskScale(String),
    #[error("projection row cap exceeded ({0} rows)")]
    RowCap(usize),
    #[error("empty polyhedron")]
    EmptyPolyhedron,
    #[error("operation requires a polyhedral set: {0}")]
    RequiresPolyhedral(String),
    #[error("insufficient window: {0}")]
    InsufficientWindow(String),
    #[error("unknown fixture '{name}'; registered fixtures: {registry}")]
    UnknownFixture { name: String, registry: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
