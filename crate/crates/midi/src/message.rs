//! Decoded MIDI messages and their canonical wire bytes.

use crate::error::{MidiError, Result};

pub const NOTE_OFF: u8 = 0x80;
pub const NOTE_ON: u8 = 0x90;
pub const CONTROL_CHANGE: u8 = 0xB0;
pub const PITCH_BEND: u8 = 0xE0;
pub const SYSEX_START: u8 = 0xF0;
pub const SYSEX_END: u8 = 0xF7;

/// One MIDI message.
///
/// A NoteOn with velocity 0 is a NoteOff; the parser always produces the
/// `NoteOff` form and [`MidiMessage::normalized`] converts hand-built values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MidiMessage {
    NoteOff {
        channel: u8,
        note: u8,
        velocity: u8,
    },
    NoteOn {
        channel: u8,
        note: u8,
        velocity: u8,
    },
    ControlChange {
        channel: u8,
        controller: u8,
        value: u8,
    },
    /// 14-bit value, 0x2000 is centre.
    PitchBend {
        channel: u8,
        value: u16,
    },
    /// Payload between the 0xF0 / 0xF7 framing bytes.
    SysEx(Vec<u8>),
    /// Anything else, kept as its complete wire bytes (status first).
    Other(Vec<u8>),
}

impl MidiMessage {
    pub fn note_on(channel: u8, note: u8, velocity: u8) -> Self {
        MidiMessage::NoteOn { channel, note, velocity }.normalized()
    }

    pub fn note_off(channel: u8, note: u8) -> Self {
        MidiMessage::NoteOff { channel, note, velocity: 0 }
    }

    pub fn normalized(self) -> Self {
        match self {
            MidiMessage::NoteOn { channel, note, velocity: 0 } => MidiMessage::NoteOff { channel, note, velocity: 0 },
            m => m,
        }
    }

    pub fn channel(&self) -> Option<u8> {
        match self {
            MidiMessage::NoteOff { channel, .. }
            | MidiMessage::NoteOn { channel, .. }
            | MidiMessage::ControlChange { channel, .. }
            | MidiMessage::PitchBend { channel, .. } => Some(*channel),
            MidiMessage::Other(b) if (0x80..0xF0).contains(b.first().unwrap_or(&0)) => Some(b[0] & 0x0F),
            _ => None,
        }
    }

    /// Decodes a complete channel-voice message from its status and data bytes.
    pub(crate) fn from_channel_bytes(status: u8, data: &[u8]) -> Self {
        let channel = status & 0x0F;
        match (status & 0xF0, data) {
            (NOTE_OFF, [note, velocity]) => MidiMessage::NoteOff { channel, note: *note, velocity: *velocity },
            (NOTE_ON, [note, velocity]) => MidiMessage::note_on(channel, *note, *velocity),
            (CONTROL_CHANGE, [controller, value]) => {
                MidiMessage::ControlChange { channel, controller: *controller, value: *value }
            }
            (PITCH_BEND, [lsb, msb]) => {
                MidiMessage::PitchBend { channel, value: u16::from(*lsb) | (u16::from(*msb) << 7) }
            }
            _ => {
                let mut raw = Vec::with_capacity(1 + data.len());
                raw.push(status);
                raw.extend_from_slice(data);
                MidiMessage::Other(raw)
            }
        }
    }

    /// Canonical bytes: full status byte every time, SysEx framed by F0…F7.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        fn ch(c: u8) -> Result<u8> {
            if c < 16 {
                Ok(c)
            } else {
                Err(MidiError::Field { field: "channel", value: u32::from(c) })
            }
        }
        fn d(field: &'static str, v: u8) -> Result<u8> {
            if v < 0x80 {
                Ok(v)
            } else {
                Err(MidiError::Field { field, value: u32::from(v) })
            }
        }
        Ok(match self {
            MidiMessage::NoteOff { channel, note, velocity } => {
                vec![NOTE_OFF | ch(*channel)?, d("note", *note)?, d("velocity", *velocity)?]
            }
            MidiMessage::NoteOn { channel, note, velocity: 0 } => vec![NOTE_OFF | ch(*channel)?, d("note", *note)?, 0],
            MidiMessage::NoteOn { channel, note, velocity } => {
                vec![NOTE_ON | ch(*channel)?, d("note", *note)?, d("velocity", *velocity)?]
            }
            MidiMessage::ControlChange { channel, controller, value } => {
                vec![CONTROL_CHANGE | ch(*channel)?, d("controller", *controller)?, d("value", *value)?]
            }
            MidiMessage::PitchBend { channel, value } => {
                if *value > 0x3FFF {
                    return Err(MidiError::Field { field: "pitch bend", value: u32::from(*value) });
                }
                vec![PITCH_BEND | ch(*channel)?, (value & 0x7F) as u8, (value >> 7) as u8]
            }
            MidiMessage::SysEx(payload) => {
                let mut out = Vec::with_capacity(payload.len() + 2);
                out.push(SYSEX_START);
                for &b in payload {
                    out.push(d("sysex payload", b)?);
                }
                out.push(SYSEX_END);
                out
            }
            MidiMessage::Other(raw) => {
                match raw.split_first() {
                    Some((&s, rest)) if s >= 0x80 && s != SYSEX_START && s != SYSEX_END => {
                        if let Some(&bad) = rest.iter().find(|&&b| b >= 0x80) {
                            return Err(MidiError::Field { field: "data byte", value: u32::from(bad) });
                        }
                    }
                    _ => {
                        return Err(MidiError::Field {
                            field: "status",
                            value: raw.first().copied().map_or(0, u32::from),
                        })
                    }
                }
                raw.clone()
            }
        })
    }
}

/// Serializes one message; see [`MidiMessage::to_bytes`].
pub fn serialize(msg: &MidiMessage) -> Result<Vec<u8>> {
    msg.to_bytes()
}

/// Number of data bytes following a status byte.
pub(crate) fn data_len(status: u8) -> usize {
    match status {
        0x80..=0xBF | 0xE0..=0xEF => 2,
        0xC0..=0xDF => 1,
        0xF1 | 0xF3 => 1,
        0xF2 => 2,
        _ => 0,
    }
}
