use std::str::FromStr;

use crate::error::{DspError, Result};

pub const DEFAULT_RATE: u32 = 44_100;
pub const DEFAULT_HOP: usize = 64;

/// Mono signed 16-bit PCM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBuffer {
    pub rate: u32,
    pub samples: Vec<i16>,
}

impl SampleBuffer {
    pub fn new(rate: u32, samples: Vec<i16>) -> Self {
        Self { rate, samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Distort,
    QubitCrush,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "distort" => Ok(Mode::Distort),
            "crush" | "qubit-crush" => Ok(Mode::QubitCrush),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// Performer controls: gain, rotation fraction `s` (θ = πs), and how many
/// samples share one quantum byte.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectParams {
    gain: f64,
    s: f64,
    hop: usize,
    mode: Mode,
}

impl EffectParams {
    pub fn new(gain: f64, s: f64, hop: usize, mode: Mode) -> Result<Self> {
        if !gain.is_finite() || !(0.0..=1.0).contains(&gain) {
            return Err(DspError::Param { name: "gain", value: gain });
        }
        if !s.is_finite() {
            return Err(DspError::Param { name: "s", value: s });
        }
        if hop == 0 {
            return Err(DspError::Param { name: "hop", value: 0.0 });
        }
        Ok(Self { gain, s, hop, mode })
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

impl Default for EffectParams {
    fn default() -> Self {
        Self { gain: 0.5, s: 0.5, hop: DEFAULT_HOP, mode: Mode::Distort }
    }
}
