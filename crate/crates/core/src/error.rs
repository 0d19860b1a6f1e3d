use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("forms live on different coframes")]
    CoframeMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("expected {expected} vectors, got {got}")]
    WrongVectorCount { expected: usize, got: usize },
    #[error("vector has {got} components, coframe dimension is {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("interior product of a 0-form")]
    ZeroDegreeContraction,
    #[error("auxiliary `{0}` has no declared value/differential")]
    UndeclaredAuxiliary(String),
    #[error("form references auxiliary `{0}`; resolve it to its point value first")]
    UnresolvedAuxiliary(String),
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("multi-index {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("structure differential is not integrable: d(D) != 0 for {0}")]
    NotIntegrable(String),
    #[error("generator {0} is a 0-form")]
    ZeroFormGenerator(usize),
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("subspace is not an integral element: generator {generator} is nonzero on basis vectors {indices:?}")]
    NotIntegral { generator: usize, indices: Vec<usize> },
    #[error("vector already lies in the element")]
    NotAnExtension,
    #[error("vector is not in the polar space: generator {generator} contracted with basis vectors {indices:?} gives {value}")]
    NotInPolarSpace {
        generator: usize,
        indices: Vec<usize>,
        value: String,
    },
    #[error("coframe split does not form a basis")]
    InvalidSplit,
    #[error("flag does not match the split: {0}")]
    FlagSplitMismatch(String),
    #[error("generator {generator} has a nonzero pure-independence term at {indices:?}")]
    MalformedExpansion { generator: usize, indices: Vec<usize> },
    #[error("1-forms are linearly dependent")]
    DependentForms,
    #[error("sum of theta_i ^ omega_i is not zero: {0}")]
    NonzeroResidual(String),
    #[error("invalid curvature tensor: {0}")]
    InvalidCurvature(String),
    #[error("threshold violated: {0}")]
    Threshold(String),
    #[error("Newton iteration did not converge after {iters} iterations (residual {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("certification failed: {what}: expected {expected}, got {actual}")]
    Certification {
        what: String,
        expected: String,
        actual: String,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document at {path}: {message}")]
    Document { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
