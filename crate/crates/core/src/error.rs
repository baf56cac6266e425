use thiserror::Error;

/// Every failure the library can report. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Schema(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unknown element: {0}")]
    UnknownElement(String),
    #[error("poset is not atomic: {0}")]
    NotAtomic(String),
    #[error("poset is not gradable: {0}")]
    NotGradable(String),
    #[error("poset is not locally geometric: {0}")]
    NotLocallyGeometric(String),
    #[error("atomic complex is not acyclic below the top degree: {0}")]
    AcyclicityFailure(String),
    #[error("labels do not match: {0}")]
    LabelMismatch(String),
    #[error("subspace is not contained in the ambient subspace")]
    ContainmentViolation,
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("codimensions must increase strictly along covers: {0}")]
    CodimMonotonicityViolation(String),
    #[error("ring has no Poincare pairing")]
    NoPairing,
    #[error("top degree of the ring is odd")]
    OddTopDegree,
    #[error("support module and Orlik-Solomon algebra live on different posets")]
    PosetMismatch,
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("atom does not have codimension one: {0}")]
    AtomCodimViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Schema(_) => "SchemaError",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::UnknownElement(_) => "UnknownElement",
            Error::NotAtomic(_) => "NotAtomic",
            Error::NotGradable(_) => "NotGradable",
            Error::NotLocallyGeometric(_) => "NotLocallyGeometric",
            Error::AcyclicityFailure(_) => "AcyclicityFailure",
            Error::LabelMismatch(_) => "LabelMismatch",
            Error::ContainmentViolation => "ContainmentViolation",
            Error::SingularPairing => "SingularPairing",
            Error::CodimMonotonicityViolation(_) => "CodimMonotonicityViolation",
            Error::NoPairing => "NoPairing",
            Error::OddTopDegree => "OddTopDegree",
            Error::PosetMismatch => "PosetMismatch",
            Error::NotAutomorphism(_) => "NotAutomorphism",
            Error::AtomCodimViolation(_) => "AtomCodimViolation",
        }
    }

    /// Process exit code: 2 for malformed input, 4 and 5 for the two poset
    /// shape failures, 3 for every other violated invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) | Error::UnknownElement(_) | Error::LabelMismatch(_) => 2,
            Error::NotLocallyGeometric(_) => 4,
            Error::NotGradable(_) => 5,
            _ => 3,
        }
    }
}
