use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid band: {0}")]
    InvalidBand(String),
    #[error("no admissible modes for (L, R) = ({length}, {bandwidth})")]
    EmptyBand { length: f64, bandwidth: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("aliasing: {points} samples per direction cannot resolve mode index {index}")]
    Aliasing { points: usize, index: i64 },
    #[error("singular multiplier at zero mode")]
    SingularMultiplier,
    #[error("non-band-limited mode (symbol a = {0})")]
    NonBandLimitedMode(f64),
    #[error("field is not band-limited")]
    NotBandLimited,
    #[error("incompatible fields: {0}")]
    Incompatible(String),
    #[error("unknown {kind} '{name}'")]
    UnknownStrategy { kind: &'static str, name: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("nothing to verify")]
    NothingToVerify,
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
