use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range 1..={codim}")]
    IndexOutOfRange { index: usize, codim: usize },
    #[error("codimension mismatch: {0} vs {1}")]
    CodimMismatch(usize, usize),
    #[error("tensor degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("operator index {index} out of range for degree {degree}")]
    OperatorIndex { index: usize, degree: usize },
    #[error("cyclic operator undefined in degree 0")]
    DegreeZero,
    #[error("group-like element is not invertible in the supported class")]
    NotInvertible,
    #[error("invalid group-like: {0}")]
    NotGroupLike(String),
    #[error("singular linear part")]
    Singular,
    #[error("defined only in codimension 1")]
    CodimOneOnly,
    #[error("support leaves the integration box")]
    SupportEscapesBox,
    #[error("quadrature did not converge: drift {0:e}")]
    Quadrature(f64),
    #[error("truncation overflow: degree {got} exceeds cap {cap}")]
    Truncation { got: usize, cap: usize },
    #[error("invalid Lie data: {0}")]
    Lie(String),
    #[error("no consistent scalar; residual {0}")]
    Inconsistent(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
