//! Shared error type for the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid box: lo[{dim}] = {lo} must be strictly below hi[{dim}] = {hi}")]
    InvalidBox { dim: usize, lo: f64, hi: f64 },

    #[error("unsupported dimension {0} (1 to 3 supported)")]
    UnsupportedDim(usize),

    #[error("point count must be at least 1 (got {0})")]
    EmptyCount(usize),

    #[error("requested {requested} sample points but only {available} are available")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("unknown kernel name `{0}`")]
    UnknownKernel(String),

    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("random CUR middle matrix is singular at pivot {pivot}; reseed or lower the rank")]
    CurMiddleSingular { pivot: usize },

    #[error("matrix shape {rows}x{cols} is not {expected}")]
    BadShape {
        rows: usize,
        cols: usize,
        expected: &'static str,
    },

    #[error(
        "no Chebyshev grid of at most {m_max} nodes per dimension reaches accuracy {target:.3e}; \
         the kernel is insufficiently smooth on these domains or the domains are not separated"
    )]
    GridSizeExceeded { m_max: usize, target: f64 },

    #[error("kernel value at grid nodes is not finite (domains overlap?)")]
    NonFiniteKernelValue,

    #[error("weighted node matrix is numerically zero; nothing to select pivots from")]
    EmptySelection,

    #[error("dense evaluation guard exceeded: {entries} entries > {guard}")]
    DenseGuardExceeded { entries: u128, guard: u128 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("tolerance {0} outside (0, 1)")]
    InvalidTolerance(f64),
}
