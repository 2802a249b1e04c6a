use thiserror::Error;

/// Errors raised by the geometry, enumeration and certification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surface: H^2 = {0} must be even and at least 2")]
    InvalidSurface(String),
    #[error("projection undefined for class {0}: s = 0")]
    UndefinedProjection(String),
    #[error("degenerate central charge (0, 0)")]
    DegenerateCharge,
    #[error("charge ({0}) lies outside the closed upper half-plane")]
    OutsideUpperHalfPlane(String),
    #[error("volume parameter must be positive, got w^2 = {0}")]
    NonPositiveVolume(String),
    #[error("point ({0}) is not strictly above the parabola")]
    BelowParabola(String),
    #[error("class {0} is not a root")]
    NotARoot(String),
    #[error("class {0} has non-positive rank")]
    NonPositiveRank(String),
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),
    #[error("invalid half-integer index: {0}")]
    InvalidIndex(String),
    #[error("precondition violated: {}", .0.join("; "))]
    PreconditionViolation(Vec<String>),
    #[error("classes are proportional; they share a phase everywhere")]
    ProportionalClasses,
    #[error("both classes have s = 0; wall line is underdetermined")]
    UnderdeterminedWall,
    #[error("slope window is empty: lower {lower} exceeds upper {upper}")]
    EmptySlopeWindow { lower: String, upper: String },
    #[error("line does not meet the region above the parabola")]
    LineMissesRegion,
    #[error("reference point ({0}) is not a valid stability point")]
    InvalidReferencePoint(String),
    #[error("class {0} is not a push-forward class (need r = 0, c > 0)")]
    NotPushForward(String),
    #[error("no wall found within bounds")]
    NoWallFound,
    #[error("conflicting witnesses at the same probe height: {0}")]
    ConflictingWitnesses(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("polygon ends at {found}, expected {expected}")]
    EndpointMismatch { expected: String, found: String },
    #[error("comparison undecided at {bits} bits")]
    Undecided { bits: u32 },
    #[error("unsupported radical operation: {0}")]
    UnsupportedRadical(String),
    #[error("case parameter out of range: {0}")]
    CaseParameter(String),
    #[error("wall mismatch: {0}")]
    WallMismatch(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
