use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The point 0 is not in the punctured plane.
    #[error("point is not in the punctured plane (z = 0)")]
    DomainError,

    /// |f(z)| exceeded the double range; use log-coordinate evaluation instead.
    #[error("|f(z)| overflows the double range")]
    Overflow,

    /// |f(z)| fell below the smallest positive double.
    #[error("|f(z)| underflows the double range")]
    Underflow,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two or more curve branches cross a single grid cell.
    #[error("grid resolution too coarse: {ambiguous_cells} ambiguous cell(s)")]
    ResolutionTooCoarse { ambiguous_cells: usize },

    #[error("incompatible raster geometry: {0}")]
    GeometryMismatch(String),

    #[error("cell ({row}, {col}) lies in the set")]
    CellInSet { row: usize, col: usize },

    #[error("no sample point fell inside the channel")]
    EmptyChannelSample,

    /// Box subdivision exhausted its depth without finding a shadowing point.
    #[error("no shadowing point found (covering relation failed numerically)")]
    NoPointFound,

    #[error("unknown fixture: {0}")]
    UnknownFixture(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
