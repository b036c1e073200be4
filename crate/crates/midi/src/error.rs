use thiserror::Error;

#[derive(Debug, Error)]
pub enum MidiError {
    #[error("{field} value {value} out of range")]
    Field { field: &'static str, value: u32 },

    #[error("midi file: {0}")]
    File(String),

    #[error("midi file truncated while reading {0}")]
    Truncated(&'static str),

    #[error("patch template line {line}: {msg}")]
    Template { line: usize, msg: String },

    #[error("patch needs {needed} quantum bytes, got {got}")]
    NotEnoughBytes { needed: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MidiError>;
