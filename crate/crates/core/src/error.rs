use thiserror::Error;

/// Errors raised while building, deriving or verifying a quantum group.
///
/// Most verification results are reported as residuals in a
/// [`crate::certificate::Certificate`]; these variants cover the cases where
/// a construction cannot proceed at all.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("block list is empty")]
    EmptyBlockList,
    #[error("block dimension at position {0} is not positive")]
    NonPositiveDim(usize),
    #[error("operands live in different algebras")]
    AlgebraMismatch,
    #[error("bad leg indices ({0}, {1}) for {2} tensor factors")]
    BadLegIndices(usize, usize, usize),
    #[error("not a permutation of {0} legs")]
    BadPermutation(usize),
    #[error("linear system has no solution (residual {residual:.3e})")]
    NoSolution { residual: f64 },

    #[error("no non-zero h satisfies Delta(a)(1 (x) h) = a (x) h")]
    NoSuchH,
    #[error("solution space for h has dimension {0}; h is not unique")]
    AmbiguousH(usize),
    #[error("candidate for h cannot be scaled to a self-adjoint projection (residual {0:.3e})")]
    NormalizationFailure(f64),
    #[error("a h is not proportional to h for basis element {index} (residual {residual:.3e})")]
    CounitInconsistent { index: usize, residual: f64 },
    #[error("Delta(h)(1 (x) a) = 0 has non-zero solutions (rank {rank} < {dim})")]
    InjectivityFailed { rank: usize, dim: usize },
    #[error("antipode equation has no solution for basis element {index} (residual {residual:.3e})")]
    AntipodeUndefined { index: usize, residual: f64 },
    #[error("antipode is not invertible")]
    SingularAntipode,
    #[error("slice map omega -> (id (x) omega)Delta(h) is singular")]
    RSingular,
    #[error("GNS Gram matrix is not positive definite")]
    GramNotPD,
    #[error("dual algebra is not closed (worst residual {0:.3e})")]
    DualNotClosed(f64),

    #[error("table entry ({0}, {1}) is not a point evaluation")]
    NotPointwise(usize, usize),
    #[error("table does not describe a group")]
    NotAGroup,
    #[error("invalid magma table: {0}")]
    InvalidTable(String),

    #[error("structure constants are not associative (residual {0:.3e})")]
    NotAssociative(f64),
    #[error("star operation is not an involutive anti-automorphism (residual {0:.3e})")]
    NotStar(f64),
    #[error("algebra has no unit")]
    NoUnit,
    #[error("trace form is not positive definite")]
    IndefiniteTraceForm,
    #[error("spectrum degenerate after {0} attempts")]
    DegenerateSpectrum(usize),
    #[error("Wedderburn isomorphism residual {0:.3e} exceeds tolerance")]
    IsoResidualTooLarge(f64),

    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short stable identifier used in certificates.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyBlockList => "EmptyBlockList",
            Error::NonPositiveDim(_) => "NonPositiveDim",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::BadLegIndices(..) => "BadLegIndices",
            Error::BadPermutation(_) => "BadPermutation",
            Error::NoSolution { .. } => "NoSolution",
            Error::NoSuchH => "NoSuchH",
            Error::AmbiguousH(_) => "AmbiguousH",
            Error::NormalizationFailure(_) => "NormalizationFailure",
            Error::CounitInconsistent { .. } => "CounitInconsistent",
            Error::InjectivityFailed { .. } => "InjectivityFailed",
            Error::AntipodeUndefined { .. } => "AntipodeUndefined",
            Error::SingularAntipode => "SingularAntipode",
            Error::RSingular => "RSingular",
            Error::GramNotPD => "GramNotPD",
            Error::DualNotClosed(_) => "DualNotClosed",
            Error::NotPointwise(..) => "NotPointwise",
            Error::NotAGroup => "NotAGroup",
            Error::InvalidTable(_) => "InvalidTable",
            Error::NotAssociative(_) => "NotAssociative",
            Error::NotStar(_) => "NotStar",
            Error::NoUnit => "NoUnit",
            Error::IndefiniteTraceForm => "IndefiniteTraceForm",
            Error::DegenerateSpectrum(_) => "DegenerateSpectrum",
            Error::IsoResidualTooLarge(_) => "IsoResidualTooLarge",
            Error::ParseError { .. } => "ParseError",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::Io(_) => "Io",
        }
    }
}

impl Error {
    /// Process exit code for a run that stopped on this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ParseError { .. }
            | Error::ShapeMismatch(_)
            | Error::Io(_)
            | Error::EmptyBlockList
            | Error::NonPositiveDim(_)
            | Error::InvalidTable(_) => 3,
            Error::NoSolution { .. }
            | Error::AlgebraMismatch
            | Error::BadLegIndices(..)
            | Error::BadPermutation(_)
            | Error::DegenerateSpectrum(_)
            | Error::IsoResidualTooLarge(_) => 4,
            _ => 2,
        }
    }

    /// The defining property that the input fails, for errors that are axiom failures.
    pub fn axiom(&self) -> Option<&'static str> {
        Some(match self {
            Error::NoSuchH | Error::AmbiguousH(_) => "there is a unique non-zero h with Delta(a)(1 (x) h) = a (x) h for all a",
            Error::NormalizationFailure(_) => "h is a self-adjoint idempotent",
            Error::CounitInconsistent { .. } => "a h = epsilon(a) h defines the counit",
            Error::InjectivityFailed { .. } => "Delta(h)(1 (x) a) = 0 implies a = 0",
            Error::AntipodeUndefined { .. } => "Delta(h)(a (x) 1) = Delta(h)(1 (x) S(a)) has a solution S(a) for every a",
            Error::SingularAntipode => "the antipode is a bijection",
            Error::RSingular => "the left invariant functional phi exists and is unique",
            Error::GramNotPD => "phi(a* a) > 0 for a != 0",
            Error::DualNotClosed(_) => "the slices (id (x) w)(W) span a *-algebra",
            Error::NotPointwise(..) => "Delta is pointwise multiplication of a binary operation",
            Error::NotAGroup => "the table is a group",
            Error::NotAssociative(_) => "the structure constants are associative",
            Error::NotStar(_) => "the star operation is an involutive anti-automorphism",
            Error::NoUnit => "the algebra is unital",
            Error::IndefiniteTraceForm => "the trace form is positive definite",
            _ => return None,
        })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
