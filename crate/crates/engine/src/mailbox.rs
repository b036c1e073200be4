//! Lock-free latest-value cells shared between the path thread and the
//! quantum worker. Writers overwrite; readers take whatever is newest.

use std::sync::atomic::{AtomicU64, Ordering};

/// One byte plus the sequence number of the write that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reading {
    pub byte: u8,
    pub seq: u64,
}

/// Single-slot cell holding `(seq << 8) | byte` in one atomic word.
///
/// Sequence 0 means nothing has been written yet. Sequence numbers are 56 bits
/// wide, which will not wrap in practice.
#[derive(Debug, Default)]
pub struct Mailbox {
    word: AtomicU64,
}

impl Mailbox {
    pub fn new() -> Self {
        Self::default()
    }

    /// Publishes `byte` and returns its sequence number. Lock-free; safe with
    /// several writers.
    pub fn write(&self, byte: u8) -> u64 {
        let mut cur = self.word.load(Ordering::Relaxed);
        loop {
            let seq = (cur >> 8) + 1;
            let next = (seq << 8) | u64::from(byte);
            match self.word.compare_exchange_weak(cur, next, Ordering::Release, Ordering::Relaxed) {
                Ok(_) => return seq,
                Err(actual) => cur = actual,
            }
        }
    }

    /// Newest value, or `None` before the first write. Never blocks.
    pub fn read(&self) -> Option<Reading> {
        let w = self.word.load(Ordering::Acquire);
        let seq = w >> 8;
        (seq != 0).then_some(Reading { byte: w as u8, seq })
    }

    pub fn seq(&self) -> u64 {
        self.word.load(Ordering::Acquire) >> 8
    }
}

/// An `f64` stored as its bit pattern.
#[derive(Debug)]
pub struct ParamCell {
    bits: AtomicU64,
}

impl ParamCell {
    pub fn new(v: f64) -> Self {
        Self { bits: AtomicU64::new(v.to_bits()) }
    }

    pub fn get(&self) -> f64 {
        f64::from_bits(self.bits.load(Ordering::Acquire))
    }

    pub fn set(&self, v: f64) {
        self.bits.store(v.to_bits(), Ordering::Release);
    }
}

/// Performer controls visible to the worker.
#[derive(Debug)]
pub struct Params {
    pub s: ParamCell,
    pub gain: ParamCell,
}

impl Params {
    pub fn new(s: f64, gain: f64) -> Self {
        Self { s: ParamCell::new(s), gain: ParamCell::new(gain) }
    }
}

impl Default for Params {
    fn default() -> Self {
        Self::new(0.5, 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_then_latest() {
        let m = Mailbox::new();
        assert_eq!(m.read(), None);
        assert_eq!(m.write(7), 1);
        assert_eq!(m.write(0xFF), 2);
        assert_eq!(m.read(), Some(Reading { byte: 0xFF, seq: 2 }));
    }

    #[test]
    fn param_roundtrip() {
        let p = ParamCell::new(0.25);
        assert_eq!(p.get(), 0.25);
        p.set(-0.0);
        assert!(p.get().is_sign_negative());
    }
}
