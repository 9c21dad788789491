use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("d(d({gen})) = {value} is nonzero")]
    DSquareNonzero { gen: String, value: String },
    #[error("degree mismatch for {what}: expected {expected}, found {found}")]
    DegreeMismatch { what: String, expected: i32, found: i32 },
    #[error("generator {0} has positive degree in the nonpositive regime")]
    NonpositiveViolation(String),
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("not a chain map: on {gen} the defect d f - f d is {defect}")]
    ChainMapFailure { gen: String, defect: String },
    #[error("presentation is not finite dimensional (bound {0} exceeded)")]
    NotFiniteDimensional(usize),
    #[error("residue ring is not the field of rationals: {0}")]
    ResidueNotField(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
    #[error("truncation not closed: d({escape}) leaves the truncated basis")]
    TruncationNotClosed { escape: String },
    #[error("complex has no closure certificate")]
    NotClosed,
    #[error("element {0} is not a cocycle")]
    NotACocycle(String),
    #[error("no graded-free certificate: {0}")]
    NotFlatCertificate(String),
    #[error("syzygies unavailable: {0}")]
    SyzygyUnavailable(String),
    #[error("lifting obstruction is not exact within truncation: {0}")]
    ObstructionNotExact(String),
    #[error("reduction mismatch: {0}")]
    ReductionMismatch(String),
    #[error("base map is not surjective: {0}")]
    NotSurjectiveBase(String),
    #[error("endomorphism is not idempotent: {0}")]
    NotIdempotent(String),
    #[error("endomorphism is not idempotent modulo the ideal: {0}")]
    NotAlmostIdempotent(String),
    #[error("ideal does not square to zero: {0}")]
    IdealNotSquareZero(String),
    #[error("defect equation not solvable within truncation: {0}")]
    DefectNotSolvable(String),
    #[error("idempotent is not a weak equivalence: {0}")]
    NotTrivialIdempotent(String),
    #[error("not a Maurer-Cartan element: {0}")]
    NotMC(String),
    #[error("coefficient outside the maximal ideal: {0}")]
    CoefficientNotNilpotent(String),
    #[error("operator is not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("ideal differs from the minor ideal: {0}")]
    MinorIdealMismatch(String),
    #[error("unknown example id {0}")]
    UnknownExample(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("unsupported relation: {0}")]
    UnsupportedRelation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
