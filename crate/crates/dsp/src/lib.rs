//! Quantum audio effects over mono 16-bit PCM: an additive quantum distortion
//! and a bitcrusher whose depth and decimation are measured, not dialled.

pub mod buffer;
pub mod effects;
pub mod error;
pub mod stream;
pub mod wav;

pub use buffer::{EffectParams, Mode, SampleBuffer, DEFAULT_HOP, DEFAULT_RATE};
pub use effects::{apply_effect, quantize, quantum_distort, qubit_crush, CrushSettings};
pub use error::{DspError, Result};
pub use stream::{FixedBytes, QuantumByteStream, SeededBytes};
pub use wav::{decode_wav, encode_wav, read_wav, write_wav};
