use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid combinatorial pair: {0}")]
    InvalidPair(String),

    #[error("pair is reducible at j = {0}")]
    Reducible(usize),

    #[error("Rauzy class exceeds the cap of {0} vertices")]
    ClassCap(usize),

    #[error("no path between the given pairs")]
    NoPath,

    #[error("lengths do not sum to 1 (sum = {0})")]
    Normalization(f64),

    #[error("incompatible slopes: image lengths sum to {0}, expected 1")]
    IncompatibleSlopes(f64),

    #[error("invalid map definition: {0}")]
    InvalidMap(String),

    #[error("{0} is not a break point (partition endpoint)")]
    NotABreakPoint(f64),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("connection suspected at level {level}: lengths differ by {gap:e}")]
    Connection { level: usize, gap: f64 },

    #[error("point {x} lies outside the interval [{start}, {end})")]
    Domain { x: f64, start: f64, end: f64 },

    #[error("itinerary drift at step {step}: point {x} escapes branch {letter} by {excess:e}")]
    ItineraryDrift {
        step: usize,
        letter: usize,
        x: f64,
        excess: f64,
    },

    #[error("no return to the target interval within {0} iterations")]
    NoReturn(u64),

    #[error("dynamical partition defect: {0}")]
    PartitionDefect(String),

    #[error("vector is not in the required cone: {0}")]
    ConePrecondition(String),

    #[error("no cone contraction observed: {0}")]
    NoContraction(String),

    #[error("path does not close: {0}")]
    NotPeriodic(String),

    #[error("unexpected spectrum: fixed space has dimension {found}, expected {expected}")]
    UnexpectedSpectrum { found: usize, expected: usize },

    #[error("fixed space is not a graph over Ker Omega")]
    Transversality,

    #[error("degenerate basis (Gram determinant {0:e})")]
    DegenerateBasis(f64),

    #[error("affine model rejected at level {0}")]
    ModelRejected(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal identity violated: {0}")]
    IdentityViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
