use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension 2 is not supported; d must be an odd prime")]
    EvenPrime,

    #[error("0 has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not unitary (max deviation {max_error:e})")]
    NotUnitary { max_error: f64 },

    #[error("states are not an orthonormal basis (max deviation {max_error:e})")]
    NotOrthonormal { max_error: f64 },

    #[error("target labels are not a bijection onto 0..{0}")]
    NotBijective(usize),

    #[error("invalid basis label `{0}`")]
    InvalidLabel(String),

    #[error("cannot parse operator word: {0}")]
    WordParse(String),

    #[error("line state is not a product state (second singular value {second:e})")]
    FactorizationFailed { second: f64 },
}
