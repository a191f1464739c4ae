use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("instance parse error at line {line}: {msg}")]
    InstanceParse { line: usize, msg: String },
    #[error("unrepresentable symmetry: {0}")]
    UnrepresentableSymmetry(String),
    #[error("symmetry group closure exceeds the bound of {0} elements")]
    GroupTooLarge(usize),
    #[error("oracle bound exceeded: {0}")]
    OracleBoundExceeded(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
