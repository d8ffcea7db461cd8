use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("rule for `{0}` reintroduces a rule variable")]
    RuleCycle(String),
    #[error("duplicate rule for `{0}`")]
    DuplicateRule(String),
    #[error("denominator vanishes at the given assignment")]
    EvalDivisionByZero,
    #[error("parameter `{0}` is not assigned")]
    UnassignedParameter(String),
    #[error("forms live on different coframes")]
    CoframeMismatch,
    #[error("operation requires a homogeneous form")]
    NonHomogeneous,
    #[error("operation requires a real coframe")]
    ComplexCoframe,
    #[error("operation requires a complex coframe")]
    RealCoframe,
    #[error("expected {expected} vectors, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("coframe transformation is singular")]
    SingularTransformation,
    #[error("real identification map is singular or not real")]
    SingularMap,
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("difference of Pontrjagin forms vanishes")]
    ZeroDifference,
    #[error("dT is not proportional to the Pontrjagin difference: {0}")]
    NotProportional(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown identifier `{0}`")]
    UnknownParameter(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
