//! Sources of packed quantum bytes for the effects.

use qsim_core::EntanglerSampler;

/// Yields one packed measurement byte per call. The effects pull exactly one
/// byte per hop, at sample indices that are multiples of the hop length.
pub trait QuantumByteStream {
    fn next_byte(&mut self) -> u8;
}

impl<S: QuantumByteStream + ?Sized> QuantumByteStream for &mut S {
    fn next_byte(&mut self) -> u8 {
        (**self).next_byte()
    }
}

/// Cycles through a fixed byte sequence.
#[derive(Debug, Clone)]
pub struct FixedBytes {
    bytes: Vec<u8>,
    pos: usize,
}

impl FixedBytes {
    /// # Panics
    /// If `bytes` is empty.
    pub fn new(bytes: Vec<u8>) -> Self {
        assert!(!bytes.is_empty(), "need at least one byte");
        Self { bytes, pos: 0 }
    }

    pub fn constant(byte: u8) -> Self {
        Self::new(vec![byte])
    }
}

impl QuantumByteStream for FixedBytes {
    fn next_byte(&mut self) -> u8 {
        let b = self.bytes[self.pos];
        self.pos = (self.pos + 1) % self.bytes.len();
        b
    }
}

/// Seeded entangler sampling at a fixed `s`, one fresh byte per call.
#[derive(Debug, Clone)]
pub struct SeededBytes {
    sampler: EntanglerSampler,
    s: f64,
}

impl SeededBytes {
    pub fn new(seed: u64, s: f64) -> Self {
        Self { sampler: EntanglerSampler::seeded(seed), s }
    }

    pub fn with_sampler(sampler: EntanglerSampler, s: f64) -> Self {
        Self { sampler, s }
    }

    pub fn set_s(&mut self, s: f64) {
        self.s = s;
    }
}

impl QuantumByteStream for SeededBytes {
    fn next_byte(&mut self) -> u8 {
        self.sampler.packed_byte(self.s)
    }
}
