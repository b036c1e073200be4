//! Quantum accompaniment: every player note on the listen channel spawns a
//! "q-note", the player's note shifted by a quantum-derived interval.
//!
//! The shift for note `k` is measured with the entangler parameter set by note
//! `k-1` (`s = note / 63`), so the previous note always seeds the next shift.
//! At most one q-note sounds at a time; it is released by the next player note
//! or after `qnote_ttl_ms`, whichever comes first.

use qsim_core::EntanglerSampler;
use rand::Rng;

use crate::message::MidiMessage;

/// Largest upward shift in semitones.
pub const MAX_SHIFT: u8 = 24;

/// Anything that can hand out one packed measurement byte for a given `s`.
pub trait QuantumSource {
    fn packed_byte(&mut self, s: f64) -> u8;
}

impl<R: Rng> QuantumSource for EntanglerSampler<R> {
    fn packed_byte(&mut self, s: f64) -> u8 {
        EntanglerSampler::packed_byte(self, s)
    }
}

impl<Q: QuantumSource + ?Sized> QuantumSource for &mut Q {
    fn packed_byte(&mut self, s: f64) -> u8 {
        (**self).packed_byte(s)
    }
}

impl<Q: QuantumSource + ?Sized> QuantumSource for Box<Q> {
    fn packed_byte(&mut self, s: f64) -> u8 {
        (**self).packed_byte(s)
    }
}

/// Entangler input for a MIDI note: `note / 63`, so 0..=127 covers `0 <= s <= 2`.
pub fn note_to_s(note: u8) -> f64 {
    f64::from(note) / 63.0
}

/// Maps a packed byte monotonically onto 0..=24 semitones.
pub fn shift_from_packed(packed: u8) -> u8 {
    (f64::from(MAX_SHIFT) * f64::from(packed) / 255.0).round() as u8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccompanimentConfig {
    pub listen_channel: u8,
    pub qnote_channel: u8,
    pub qnote_ttl_ms: u64,
}

impl Default for AccompanimentConfig {
    fn default() -> Self {
        Self { listen_channel: 0, qnote_channel: 0, qnote_ttl_ms: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActiveQNote {
    pub channel: u8,
    pub note: u8,
    pub off_deadline: u64,
}

#[derive(Debug, Clone)]
pub struct Accompanist<Q> {
    config: AccompanimentConfig,
    source: Q,
    active: Option<ActiveQNote>,
    next_s: f64,
    last_packed: Option<u8>,
}

impl<Q: QuantumSource> Accompanist<Q> {
    pub fn new(config: AccompanimentConfig, source: Q) -> Self {
        Self { config, source, active: None, next_s: 0.0, last_packed: None }
    }

    pub fn config(&self) -> &AccompanimentConfig {
        &self.config
    }

    pub fn active(&self) -> Option<ActiveQNote> {
        self.active
    }

    /// Entangler input the next q-note will be measured with.
    pub fn next_s(&self) -> f64 {
        self.next_s
    }

    /// Packed byte behind the most recent q-note.
    pub fn last_packed(&self) -> Option<u8> {
        self.last_packed
    }

    pub fn source_mut(&mut self) -> &mut Q {
        &mut self.source
    }

    fn release(&mut self) -> Option<MidiMessage> {
        self.active.take().map(|q| MidiMessage::note_off(q.channel, q.note))
    }

    /// Passes `msg` through (always first in the output) and, for a player
    /// NoteOn on the listen channel, replaces the sounding q-note.
    pub fn process_message(&mut self, msg: &MidiMessage, now: u64) -> Vec<MidiMessage> {
        let mut out = vec![msg.clone()];
        if let MidiMessage::NoteOn { channel, note, velocity } = *msg {
            if channel == self.config.listen_channel && velocity > 0 {
                out.extend(self.release());
                let packed = self.source.packed_byte(self.next_s);
                self.last_packed = Some(packed);
                let qnote = (u16::from(note) + u16::from(shift_from_packed(packed))).min(127) as u8;
                out.push(MidiMessage::note_on(self.config.qnote_channel, qnote, velocity));
                self.next_s = note_to_s(note);
                self.active = Some(ActiveQNote {
                    channel: self.config.qnote_channel,
                    note: qnote,
                    off_deadline: now + self.config.qnote_ttl_ms,
                });
            }
        }
        out
    }

    /// Releases the q-note once `now` reaches its deadline.
    pub fn tick(&mut self, now: u64) -> Vec<MidiMessage> {
        match self.active {
            Some(q) if now >= q.off_deadline => self.release().into_iter().collect(),
            _ => Vec::new(),
        }
    }

    /// Releases any sounding q-note immediately.
    pub fn flush(&mut self) -> Vec<MidiMessage> {
        self.release().into_iter().collect()
    }
}
