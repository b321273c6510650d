use core::fmt;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A table or vector had the wrong shape for the operation.
    Dimension { expected: usize, found: usize },
    /// A table with zero rows or zero columns.
    EmptyShape,
    /// A probability was negative, NaN or infinite.
    InvalidProbability { index: usize, value: f64 },
    /// Probabilities did not sum to one.
    NotNormalized { sum: f64 },
    /// A count table with no observations.
    NoObservations,
    /// A category outside `0..len` in a sample.
    CategoryOutOfRange { position: usize, category: usize, len: usize },
    /// A sample size of zero was requested.
    ZeroSampleSize,
    /// A known marginal with a zero entry.
    ZeroMarginal { index: usize },
    /// A weight vector that is negative somewhere or does not sum to one.
    InvalidWeights,
    /// Clone counts must all be at least one.
    InvalidCloneCount { index: usize },
    /// Cross-product ratio outside `(0, inf)`.
    InvalidCrossProductRatio(f64),
    /// A 2x2 marginal with an entry of 0 or 1.
    DegenerateMarginal,
    /// A row or column with a positive IPF target but no initial mass.
    InfeasibleSupport { axis: Axis, index: usize },
    /// The variance of the unadjusted estimator is zero.
    DegenerateVariance { row: usize },
    /// An experiment configuration that cannot be run.
    InvalidConfig(&'static str),
}

/// Table axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Axis {
    Row,
    Column,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Row => f.write_str("row"),
            Axis::Column => f.write_str("column"),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyShape => f.write_str("table must have at least one row and one column"),
            Error::InvalidProbability { index, value } => {
                write!(f, "invalid probability {value} at position {index}")
            }
            Error::NotNormalized { sum } => write!(f, "probabilities sum to {sum}, not 1"),
            Error::NoObservations => f.write_str("no observations"),
            Error::CategoryOutOfRange { position, category, len } => write!(
                f,
                "category {category} at position {position} is outside 0..{len}"
            ),
            Error::ZeroSampleSize => f.write_str("sample size must be at least 1"),
            Error::ZeroMarginal { index } => {
                write!(f, "known marginal has a zero entry at position {index}")
            }
            Error::InvalidWeights => {
                f.write_str("weights must be nonnegative and sum to 1")
            }
            Error::InvalidCloneCount { index } => {
                write!(f, "clone count at position {index} must be at least 1")
            }
            Error::InvalidCrossProductRatio(v) => {
                write!(f, "cross-product ratio must be finite and positive, got {v}")
            }
            Error::DegenerateMarginal => {
                f.write_str("2x2 construction needs marginals strictly inside (0, 1)")
            }
            Error::InfeasibleSupport { axis, index } => write!(
                f,
                "{axis} {index} has a positive target but no mass in the initial table"
            ),
            Error::DegenerateVariance { row } => {
                write!(f, "row {row} has zero variance; reduction is undefined")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid experiment configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
