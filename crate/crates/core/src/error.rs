use thiserror::Error;

/// Failures raised while evaluating expressions or running a program.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("type mismatch in {op}: {detail}")]
    TypeMismatch { op: &'static str, detail: String },
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
    #[error("negative exponent in pow")]
    NegativeExponent,
    #[error("exponent too large: {0}")]
    ExponentTooLarge(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("tuple index {index} out of range for tuple of length {len}")]
    TupleIndex { index: usize, len: usize },
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),
    #[error("table key {0} is not in the table domain")]
    KeyNotInTable(String),
    #[error("bilinear score: {0}")]
    VectorShape(String),
    #[error("enumeration budget exceeded: {needed} words needed, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u64 },
}

/// Static well-formedness violations of a recognizer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("line {line} reads layer {layer}, but only layers below {line} are visible")]
    LayerReference { line: usize, layer: usize },
    #[error("line {line}: {what} may not reference the attended position (j)")]
    JReference { line: usize, what: &'static str },
    #[error("{what} reads i/j/n but the initialization does not provide positions")]
    PositionWithoutInit { what: String },
    #[error("acceptance predicate reads layer {layer} but the program has {depth} layers")]
    AcceptReference { layer: usize, depth: usize },
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate letter {0:?} in alphabet")]
    DuplicateLetter(char),
    #[error("line {line}: separable score declares carrier {carrier}, expected {line}")]
    CarrierMismatch { line: usize, carrier: usize },
    #[error("line {line}: bilinear score reads layer {layer} which is not below the line")]
    BilinearLayer { line: usize, layer: usize },
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
}

/// Failures of the built-in program and oracle library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LibraryError {
    #[error("alphabet needs at least 2 letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("depth bound must be at least 1, got {0}")]
    InvalidDepth(usize),
    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),
}
