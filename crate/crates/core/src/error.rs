use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol {0:?} is not in the machine alphabet")]
    AlphabetMismatch(char),
    #[error("end-marker {0:?} may not be used as an input symbol")]
    ReservedSymbol(char),
    #[error("malformed machine: {0}")]
    Malformed(String),
    #[error("nondeterministic: duplicate transition for {0}")]
    Nondeterministic(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("input violates the bound: {0}")]
    BoundViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("machine file: {0}")]
    Parse(String),
    #[error("step limit of {limit} reached on an input of length {n}")]
    Timeout { n: usize, limit: u64 },
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
