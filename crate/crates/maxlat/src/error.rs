use thiserror::Error;

/// Errors raised by validation, construction and solver code.
///
/// Failed mathematical checks are *not* errors: verification routines
/// return [`crate::report::CheckRecord`]s with a `Fail` verdict instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space must have at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("distance matrix row {row} has {got} entries, expected {expected}")]
    BadDimensions {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("dist[{i}][{i}] = {value}, diagonal must be exactly 0")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("dist[{i}][{j}] = {value}, off-diagonal distances must be positive and finite")]
    BadOffDiagonal { i: usize, j: usize, value: f64 },

    #[error("asymmetric distances: dist[{i}][{j}] = {dij} but dist[{j}][{i}] = {dji}")]
    AsymmetricDistance {
        i: usize,
        j: usize,
        dij: f64,
        dji: f64,
    },

    #[error("mass[{i}] = {value}, every atom must have strictly positive finite mass")]
    NonpositiveMass { i: usize, value: f64 },

    #[error("{path}:{line}: {message}")]
    ParseFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("unknown space kind {0:?}")]
    UnknownKind(String),

    #[error(
        "insufficient adjacency: ball(center={center}, radius={radius}) not contained in any \
         level-{level} cube after {grids} grids"
    )]
    InsufficientAdjacency {
        center: usize,
        radius: f64,
        level: i32,
        grids: usize,
    },

    #[error("gdp missing: no level-{level} cube contains the neighborhood of cube {cube}")]
    GdpMissing { cube: String, level: i32 },

    #[error("function has {got} entries, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("non-finite entry {value} at index {index}")]
    NonFiniteEntry { index: usize, value: f64 },

    #[error("weight entry {value} at index {index} must be strictly positive")]
    NonpositiveWeight { index: usize, value: f64 },

    #[error("exponent entry {value} at index {index}: must be in (0, 700] or inf")]
    BadExponent { index: usize, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("solver failed to converge: {0}")]
    NoConvergence(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
