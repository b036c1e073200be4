use thiserror::Error;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("wav chunk `{chunk}`: {reason}")]
    Format { chunk: String, reason: String },

    #[error("invalid effect parameter {name} = {value}")]
    Param { name: &'static str, value: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DspError>;
