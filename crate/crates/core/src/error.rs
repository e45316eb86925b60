use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the
/// individual subsystems so callers can map them to exit codes.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("point count out of range: {0}")]
    OutOfRange(String),
    #[error("class outside the validity domain of the cohomology engine: {0}")]
    OutsideValidityDomain(String),
    #[error("reduction did not terminate within the iteration cap")]
    NonTermination,
    #[error("could not realize declared incidences: {0}")]
    IncidenceUnrealizable(String),
    #[error("parameter sits at the singular point of the cubic")]
    PointAtSingularity,
    #[error("duplicate point among the nine parameters")]
    DuplicatePoint,
    #[error("outside the nine-point model: {0}")]
    OutsideModel(String),
    #[error("hereditary check cannot be certified: {0}")]
    Uncertifiable(String),
    #[error("certificate search exceeded the cap ({0})")]
    CapExceeded(usize),
    #[error("malformed generation script: {0}")]
    MalformedScript(String),
    #[error("enumeration box too large: {0} classes (cap {1})")]
    BoxTooLarge(usize, usize),
    #[error("no builtin Cox ring for this weighted surface: {0}")]
    UnsupportedFamily(String),
    #[error("degree bound too small: {0}")]
    DegreeBoundTooSmall(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("no equivariant structure for a non-cyclic stabilizer (assert one to proceed)")]
    NoEquivariantStructure,
    #[error("divisor class is not invariant under the group action")]
    NotInvariant,
    #[error("bundle is not stable under the group action: {0}")]
    NotGStable(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("ambiguous connecting-map rank in a long exact sequence: {0}")]
    AmbiguousRank(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
