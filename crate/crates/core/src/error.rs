//! Error type shared by all modules of this crate.

use thiserror::Error;

/// Errors produced by group arithmetic, energy computation, certification,
/// solvers, generators, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: modulus {modulus} must be >= 2 and dimension {dimension} >= 1")]
    InvalidGroup { modulus: u64, dimension: u32 },

    #[error("group size {modulus}^{dimension} overflows the native word size")]
    GroupSizeOverflow { modulus: u64, dimension: u32 },

    #[error("point has {got} coordinates, group has dimension {expected}")]
    PointDimension { got: usize, expected: usize },

    #[error("coordinate {coord} is not reduced modulo {modulus}")]
    CoordinateOutOfRange { coord: u64, modulus: u64 },

    #[error("values buffer has length {got}, group has {expected} elements")]
    SignalLength { got: usize, expected: usize },

    #[error("signal contains a non-finite value at flat index {index}")]
    NonFiniteValue { index: usize },

    #[error("operands belong to different groups (Z_{a_modulus}^{a_dimension} vs Z_{b_modulus}^{b_dimension})")]
    GroupMismatch {
        a_modulus: u64,
        a_dimension: u32,
        b_modulus: u64,
        b_dimension: u32,
    },

    #[error("set must be nonempty for this operation")]
    EmptySet,

    #[error("signal is identically zero")]
    ZeroSignal,

    #[error("exact subset enumeration is limited to sets of size {limit}, got {size}; use the lower-bound mode instead")]
    SubsetEnumerationTooLarge { size: usize, limit: usize },

    #[error("parts overlap at point {point:?}")]
    OverlappingParts { point: Vec<u64> },

    #[error("partition does not cover the required set; point {point:?} is uncovered")]
    PartitionDoesNotCover { point: Vec<u64> },

    #[error("arithmetic progression of length {length} self-intersects modulo {modulus}")]
    ProgressionSelfIntersects { length: usize, modulus: u64 },

    #[error("subset size {k} out of range for a group of {size} elements")]
    SubsetSizeOutOfRange { k: usize, size: usize },

    #[error("energy target {target} is below the attainable floor {floor}")]
    EnergyTargetBelowFloor { target: u64, floor: u64 },

    #[error("alpha must lie in [0, 1], got {alpha}")]
    AlphaOutOfRange { alpha: f64 },

    #[error("regularity exponent must lie in [2, 3], got {alpha}")]
    RegularityExponentOutOfRange { alpha: f64 },

    #[error("beta ({beta}) must exceed alpha ({alpha})")]
    BetaNotAboveAlpha { alpha: f64, beta: f64 },

    #[error("q must exceed 2, got {q}")]
    QOutOfRange { q: f64 },

    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("solver configuration invalid: {reason}")]
    InvalidSolverConfig { reason: String },

    #[error("observed coefficients and missing set must be disjoint and jointly cover the group")]
    MalformedCorruptedSpectrum,

    #[error("support enumeration too expensive: C({n}, {k}) = {count} candidate supports exceeds the work budget {limit}")]
    SupportBudgetExceeded {
        n: usize,
        k: usize,
        count: u128,
        limit: u128,
    },

    #[error("no support of size {k} admits a feasible completion within tolerance {tol}")]
    NoFeasibleSupport { k: usize, tol: f64 },

    #[error("quadruple count exceeds the 64-bit report range")]
    EnergyOverflow,

    #[error("malformed {what}: {reason}")]
    Parse { what: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
