//! The two quantum effects.
//!
//! Both consume one packed byte per hop and hold it for the whole hop.

use crate::buffer::{EffectParams, Mode, SampleBuffer};
use crate::stream::QuantumByteStream;

fn clamp16(v: f64) -> i16 {
    v.round().clamp(f64::from(i16::MIN), f64::from(i16::MAX)) as i16
}

/// Adds a centred quantum offset to every sample:
/// `out = clamp(in + round(gain · (q − 128) · 256))`.
pub fn quantum_distort<Q: QuantumByteStream + ?Sized>(
    buf: &SampleBuffer,
    params: &EffectParams,
    q: &mut Q,
) -> SampleBuffer {
    let mut out = Vec::with_capacity(buf.len());
    for block in buf.samples.chunks(params.hop()) {
        let byte = q.next_byte();
        let offset = (params.gain() * (f64::from(byte) - 128.0) * 256.0).round();
        out.extend(block.iter().map(|&x| clamp16(f64::from(x) + offset)));
    }
    SampleBuffer::new(buf.rate, out)
}

/// Crusher settings decoded from one byte: high nibble → bit depth 1..=16,
/// low nibble → hold length 1..=16 samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrushSettings {
    pub bits: u32,
    pub hold: usize,
}

impl CrushSettings {
    pub fn from_byte(byte: u8) -> Self {
        Self { bits: 1 + u32::from(byte >> 4), hold: 1 + usize::from(byte & 0x0F) }
    }
}

/// Drops the low `16 - bits` bits, rounding toward zero.
pub fn quantize(x: i16, bits: u32) -> i16 {
    debug_assert!((1..=16).contains(&bits));
    let mask = !((1i32 << (16 - bits)) - 1);
    let v = i32::from(x);
    let q = if v >= 0 { v & mask } else { -((-v) & mask) };
    q as i16
}

/// Bitcrusher whose depth and sample-rate reduction come from the quantum
/// byte of each hop. The hold counter restarts at every hop boundary.
/// `gain` crossfades dry (0) to crushed (1).
pub fn qubit_crush<Q: QuantumByteStream + ?Sized>(
    buf: &SampleBuffer,
    params: &EffectParams,
    q: &mut Q,
) -> SampleBuffer {
    let g = params.gain();
    let mut out = Vec::with_capacity(buf.len());
    for block in buf.samples.chunks(params.hop()) {
        let CrushSettings { bits, hold } = CrushSettings::from_byte(q.next_byte());
        for (k, &dry) in block.iter().enumerate() {
            let wet = quantize(block[k - k % hold], bits);
            let y = if g == 0.0 {
                dry
            } else if g == 1.0 {
                wet
            } else {
                clamp16((1.0 - g) * f64::from(dry) + g * f64::from(wet))
            };
            out.push(y);
        }
    }
    SampleBuffer::new(buf.rate, out)
}

/// Dispatches on `params.mode()`.
pub fn apply_effect<Q: QuantumByteStream + ?Sized>(
    buf: &SampleBuffer,
    params: &EffectParams,
    q: &mut Q,
) -> SampleBuffer {
    match params.mode() {
        Mode::Distort => quantum_distort(buf, params, q),
        Mode::QubitCrush => qubit_crush(buf, params, q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::FixedBytes;

    fn ramp(n: usize) -> SampleBuffer {
        SampleBuffer::new(44_100, (0..n).map(|i| (i as i32 * 977 % 65_536 - 32_768) as i16).collect())
    }

    fn params(gain: f64, hop: usize, mode: Mode) -> EffectParams {
        EffectParams::new(gain, 0.5, hop, mode).unwrap()
    }

    #[test]
    fn distort_gain_zero_identity() {
        let b = ramp(1000);
        assert_eq!(quantum_distort(&b, &params(0.0, 64, Mode::Distort), &mut FixedBytes::constant(0xFF)), b);
    }

    #[test]
    fn distort_centre_byte_identity() {
        let b = ramp(1000);
        assert_eq!(quantum_distort(&b, &params(0.9, 64, Mode::Distort), &mut FixedBytes::constant(128)), b);
    }

    #[test]
    fn distort_clamps() {
        let b = SampleBuffer::new(8000, vec![1000, -1000]);
        let out = quantum_distort(&b, &params(1.0, 64, Mode::Distort), &mut FixedBytes::constant(0xFF));
        // 1000 + 127 * 256 = 33512 -> clamp
        assert_eq!(out.samples, vec![32_767, 31_512]);
        let out = quantum_distort(&b, &params(1.0, 64, Mode::Distort), &mut FixedBytes::constant(0x00));
        assert_eq!(out.samples, vec![-31_768, -32_768]);
    }

    #[test]
    fn distort_hop_updates() {
        let b = SampleBuffer::new(8000, vec![0; 6]);
        let out = quantum_distort(&b, &params(1.0, 2, Mode::Distort), &mut FixedBytes::new(vec![129, 130, 127]));
        assert_eq!(out.samples, vec![256, 256, 512, 512, -256, -256]);
    }

    #[test]
    fn crush_settings_from_nibbles() {
        assert_eq!(CrushSettings::from_byte(0xFF), CrushSettings { bits: 16, hold: 16 });
        assert_eq!(CrushSettings::from_byte(0xF0), CrushSettings { bits: 16, hold: 1 });
        assert_eq!(CrushSettings::from_byte(0x00), CrushSettings { bits: 1, hold: 1 });
    }

    #[test]
    fn quantize_toward_zero() {
        assert_eq!(quantize(12_345, 16), 12_345);
        assert_eq!(quantize(-32_768, 16), -32_768);
        assert_eq!(quantize(0x7FFF, 1), 0);
        assert_eq!(quantize(-0x7FFF, 1), 0);
        assert_eq!(quantize(-32_768, 1), -32_768);
        assert_eq!(quantize(0x1234, 8), 0x1200);
        assert_eq!(quantize(-0x1234, 8), -0x1200);
    }

    #[test]
    fn crush_neutral_identity() {
        let b = ramp(1000);
        assert_eq!(qubit_crush(&b, &params(1.0, 64, Mode::QubitCrush), &mut FixedBytes::constant(0xF0)), b);
        assert_eq!(qubit_crush(&b, &params(0.0, 64, Mode::QubitCrush), &mut FixedBytes::constant(0x03)), b);
    }

    #[test]
    fn crush_staircase() {
        let b = ramp(64);
        let out = qubit_crush(&b, &params(1.0, 64, Mode::QubitCrush), &mut FixedBytes::constant(0xFF));
        for (n, y) in out.samples.iter().enumerate() {
            assert_eq!(*y, b.samples[n - n % 16]);
        }
    }

    #[test]
    fn crush_half_gain_mixes() {
        let b = SampleBuffer::new(8000, vec![1001, 3]);
        let out = qubit_crush(&b, &params(0.5, 64, Mode::QubitCrush), &mut FixedBytes::constant(0x01));
        // bits 1 -> wet is 0 for small values, hold 2 -> both wet samples from 1001
        assert_eq!(out.samples, vec![501, 2]);
    }
}
