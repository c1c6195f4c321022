use crate::modem::Domain;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {actual}")]
    Size { expected: usize, actual: usize },

    #[error("grid is in the {actual:?} domain, operation requires {expected:?}")]
    Domain { expected: Domain, actual: Domain },

    #[error("cyclic prefix of length {cp_len} exceeds frame length {frame_len}")]
    CyclicPrefix { cp_len: usize, frame_len: usize },

    #[error("delay index {index} is not representable on a frame of {frame_len} samples")]
    UnsupportableDelay { index: usize, frame_len: usize },

    #[error("tap ({delay}, {doppler}) lies outside the declared channel support")]
    TapOutOfRange { delay: usize, doppler: i64 },

    #[error("channel has no energy")]
    DegenerateChannel,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
