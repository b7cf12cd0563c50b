use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("negative quantity at line {line}")]
    NegativeQuantity { line: usize },
    #[error("quantity at or above the infinity sentinel")]
    QuantityOverflow,
    #[error("quantity underflow")]
    QuantityUnderflow,
    #[error("self-loop record at line {line}")]
    SelfLoop { line: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("empty source or sink set")]
    EmptySeedSet,
    #[error("graph contains a directed cycle")]
    CycleDetected,
    #[error("edges do not form a directed path")]
    NotAPath,
    #[error("chain premise violated: {0}")]
    NotAChain(String),
    #[error("simplex iteration cap exceeded")]
    IterationCap,
    #[error("LP oracle is only contracted for up to {max} variables, model has {got}")]
    OracleTooLarge { max: usize, got: usize },
    #[error("no usable path table for the pattern")]
    NoUsableTable,
    #[error("infeasible synthetic spec: {0}")]
    InfeasibleSpec(String),
    #[error("malformed pattern: {0}")]
    BadPattern(String),
    #[error("malformed path table file: {0}")]
    BadTableFile(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}
