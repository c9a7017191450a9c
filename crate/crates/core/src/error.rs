use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("{func} evaluated outside its domain at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Failure to parse a scalar expression. Offsets are byte offsets into the source.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{func}` takes 1 argument, found {found} (offset {offset})")]
    Arity {
        func: String,
        found: usize,
        offset: usize,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("{0} has no finite value")]
    NonFinite(String),
}

/// Errors raised while reading a metric document.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("invalid value for `{field}`: {message}")]
    InvalidValue { field: String, message: String },
    #[error("component array has shape {rows}x{cols}, expected {dim}x{dim}")]
    Shape {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("components g[{i}][{j}] and g[{j}][{i}] differ")]
    Asymmetric { i: usize, j: usize },
    #[error("expression `{text}`: {source}")]
    Expression {
        text: String,
        #[source]
        source: ParseError,
    },
    #[error("unknown catalog metric `{0}`")]
    UnknownMetric(String),
    #[error("parameter `{name}` = {value} out of range: {message}")]
    ParameterOutOfRange {
        name: String,
        value: f64,
        message: String,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Errors raised by the numerical engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("point has dimension {found}, metric has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation unsupported in dimension {0}")]
    UnsupportedDimension(usize),
    #[error("metric is not positive definite (minor of size {minor})")]
    NotPositiveDefinite { minor: usize },
    #[error("metric components not symmetric at ({i},{j}): residual {residual:e}")]
    NonSymmetric { i: usize, j: usize, residual: f64 },
    #[error("jets of order {required} needed, got {found}")]
    InsufficientOrder { required: usize, found: usize },
    #[error("curvature symmetry residual {residual:e} exceeds consistency bound")]
    Inconsistent { residual: f64 },
    #[error("point is outside the chart domain: {0}")]
    OutsideDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl From<JetError> for GeomError {
    fn from(e: JetError) -> Self {
        GeomError::Eval(EvalError::Jet(e))
    }
}
