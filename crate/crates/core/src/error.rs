use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is rank deficient (smallest/largest = {ratio:.3e})")]
    RankDeficient { ratio: f64 },
    #[error("SVD did not converge within {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid amplitude sequence: {0}")]
    InvalidSequence(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("resource grid mismatch: {0}")]
    GridMismatch(String),
    #[error("shaping parameter must be positive for the Bayesian GMD precoder (got {0})")]
    DegenerateShaping(f64),
    #[error("precoder consistency check failed: {0}")]
    Consistency(String),
    #[error("exhaustive search over {0} candidates exceeds the limit")]
    SearchSpaceTooLarge(u128),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("protograph parse error at line {line}: {msg}")]
    Protograph { line: usize, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("trial {trial} at {snr_db} dB: {source}")]
    Trial {
        trial: u64,
        snr_db: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
