use std::fmt;

use crate::geometry::Point;

/// Why a point set failed validation. Indices refer to the x-sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    DuplicatePoint { first: usize, second: usize },
    CollinearTriple { p: usize, q: usize, r: usize },
    DuplicateX { first: usize, second: usize },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::DuplicatePoint { first, second } => {
                write!(f, "duplicate point at indices {first} and {second}")
            }
            ValidationError::CollinearTriple { p, q, r } => {
                write!(f, "collinear triple at indices {p}, {q}, {r}")
            }
            ValidationError::DuplicateX { first, second } => {
                write!(f, "equal x-coordinate at indices {first} and {second}")
            }
        }
    }
}

impl std::error::Error for ValidationError {}

/// Broad error classes; the CLI maps each to its exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or out-of-domain input.
    Input,
    /// A guarantee that should always hold was observed to fail.
    Invariant,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("point set is empty")]
    EmptyInput,
    #[error("invalid point set: {0}")]
    Validation(#[from] ValidationError),
    #[error("vertical pair: {0} and {1} share an x-coordinate")]
    VerticalPair(Box<Point>, Box<Point>),
    #[error("input of size {size} exceeds the exhaustive-search guard of {guard}")]
    SizeGuard { size: usize, guard: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("set is not ({m},{l})-free: {witness}")]
    FreenessViolated { m: usize, l: usize, witness: String },
    #[error("need more than {required} points, got {actual}")]
    NotEnoughPoints { required: String, actual: usize },
    #[error("requested size {size} exceeds the largest ({n},{m})-free size {max}")]
    InfeasibleSize { n: usize, m: usize, size: usize, max: String },
    #[error("sampler exhausted after {attempts} attempts")]
    SamplerExhausted { attempts: usize },
    #[error("degenerate projective frame: {0}")]
    DegenerateFrame(String),
    #[error("point {0} maps to infinity")]
    PointAtInfinity(Box<Point>),
    #[error("correspondence violation: {0}")]
    CorrespondenceViolation(String),
    #[error("two bound forms disagree at n = {n}: {left} vs {right}")]
    IdentityViolation { n: usize, left: String, right: String },
    #[error("proof step failed to produce its structure: {0}")]
    ProofGapWitness(String),
    #[error("construction failed certification: {0}")]
    ConstructionBug(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::ProofGapWitness(_)
            | Error::ConstructionBug(_)
            | Error::IdentityViolation { .. }
            | Error::CorrespondenceViolation(_)
            | Error::DegenerateFrame(_)
            | Error::PointAtInfinity(_) => ErrorClass::Invariant,
            _ => ErrorClass::Input,
        }
    }

    /// Stable machine-readable code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::EmptyInput => "empty_input",
            Error::Validation(ValidationError::DuplicatePoint { .. }) => "duplicate_point",
            Error::Validation(ValidationError::CollinearTriple { .. }) => "collinear_triple",
            Error::Validation(ValidationError::DuplicateX { .. }) => "duplicate_x",
            Error::VerticalPair(..) => "vertical_pair",
            Error::SizeGuard { .. } => "size_guard",
            Error::Domain(_) => "domain",
            Error::FreenessViolated { .. } => "freeness_violated",
            Error::NotEnoughPoints { .. } => "not_enough_points",
            Error::InfeasibleSize { .. } => "infeasible_size",
            Error::SamplerExhausted { .. } => "sampler_exhausted",
            Error::DegenerateFrame(_) => "degenerate_frame",
            Error::PointAtInfinity(_) => "point_at_infinity",
            Error::CorrespondenceViolation(_) => "correspondence_violation",
            Error::IdentityViolation { .. } => "identity_violation",
            Error::ProofGapWitness(_) => "proof_gap_witness",
            Error::ConstructionBug(_) => "construction_bug",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
