use thiserror::Error;

/// Errors shared by all solver and verifier modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("not strictly convex: {0}")]
    NotConvex(String),

    #[error("boundary value violation: {0}")]
    BoundaryValue(String),

    #[error("degenerate point set: {0}")]
    Degenerate(String),

    #[error("infeasible query: {0}")]
    Infeasible(String),

    /// Target gradient lies outside the gradient image of the second
    /// potential; signals failure of the smooth-geodesic criterion.
    #[error("gradient {gradient} outside the gradient image ({lo}, {hi})")]
    NotInImage { gradient: f64, lo: f64, hi: f64 },

    #[error("newton iteration failed to converge: {0}")]
    ConvergenceFailure(String),

    /// The endpoints have different gradient images, so no smooth geodesic
    /// joins them; the envelope solver is the fallback.
    #[error("not smoothly connectable: {0}")]
    NotSmoothlyConnectable(String),

    #[error("non-toric input: {0}")]
    NonToric(String),

    #[error("axis point rejected: {0}")]
    AxisPoint(String),

    #[error("point location failed: {0}")]
    PointLocation(String),

    #[error("csv format error at line {line}: {message}")]
    CsvFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
