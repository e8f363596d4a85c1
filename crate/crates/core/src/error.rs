use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are deliberately fine-grained: the CLI maps several of them to
/// distinct exit codes, and callers routinely match on `PrecisionExhausted`
/// to decide between retrying and reporting `UNDECIDED`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leading coefficient is zero")]
    LeadingZero,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is reducible: {0}")]
    ReduciblePolynomial(String),
    #[error("precision exhausted at {bits} bits: {context}")]
    PrecisionExhausted { bits: u32, context: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("element has degree {degree} < {field_degree}")]
    DegenerateElement { degree: usize, field_degree: usize },
    #[error("zero element")]
    ZeroElement,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("residual is not a root of unity")]
    TorsionCheckFailed,
    #[error("singular linear system")]
    SingularSystem,
    #[error("units are multiplicatively dependent")]
    DependentUnits,
    #[error("exact equality: the approximated number equals the rational")]
    ExactEquality,
    #[error("target is rational")]
    RationalTarget,
    #[error("p = 0: the reduction to a logarithm is undefined")]
    ZeroP,
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn exhausted(bits: u32, context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            bits,
            context: context.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
