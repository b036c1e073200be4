//! Incremental MIDI byte-stream decoder.
//!
//! Handles running status, SysEx framing and interleaved real-time bytes.
//! Malformed spans never abort decoding; they are reported as [`Diagnostic`]s and
//! the parser resynchronises on the next status byte.

use crate::message::{data_len, MidiMessage, SYSEX_END, SYSEX_START};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// Data byte with no status in effect.
    StrayData,
    /// Message cut short by a new status byte or end of input.
    Incomplete,
    /// SysEx interrupted before its 0xF7.
    UnterminatedSysEx,
    /// 0xF7 outside a SysEx.
    StrayEndOfExclusive,
}

/// A span of input bytes that produced no message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub offset: usize,
    pub len: usize,
    pub reason: SkipReason,
}

#[derive(Debug, Default, Clone)]
pub struct StreamParser {
    offset: usize,
    status: Option<u8>,
    partial_start: Option<usize>,
    data: Vec<u8>,
    sysex: Option<(usize, Vec<u8>)>,
    diagnostics: Vec<Diagnostic>,
}

/// Messages plus whatever was skipped along the way.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Parsed {
    pub messages: Vec<MidiMessage>,
    pub diagnostics: Vec<Diagnostic>,
}

impl StreamParser {
    pub fn new() -> Self {
        Self::default()
    }

    fn skip(&mut self, offset: usize, len: usize, reason: SkipReason) {
        if let Some(last) = self.diagnostics.last_mut() {
            if reason == SkipReason::StrayData && last.reason == reason && last.offset + last.len == offset {
                last.len += len;
                return;
            }
        }
        self.diagnostics.push(Diagnostic { offset, len, reason });
    }

    fn abandon_partial(&mut self) {
        if let Some(start) = self.partial_start.take() {
            self.skip(start, self.offset - start, SkipReason::Incomplete);
            self.data.clear();
        }
    }

    fn abandon_sysex(&mut self) {
        if let Some((start, _)) = self.sysex.take() {
            self.skip(start, self.offset - start, SkipReason::UnterminatedSysEx);
        }
    }

    /// Feeds one byte, returning a message when one completes.
    pub fn push(&mut self, byte: u8) -> Option<MidiMessage> {
        let out = self.step(byte);
        self.offset += 1;
        out
    }

    fn step(&mut self, byte: u8) -> Option<MidiMessage> {
        if byte >= 0xF8 {
            // real-time: may appear anywhere and leaves all state untouched
            return Some(MidiMessage::Other(vec![byte]));
        }
        if byte < 0x80 {
            if let Some((_, payload)) = self.sysex.as_mut() {
                payload.push(byte);
                return None;
            }
            let Some(status) = self.status else {
                self.skip(self.offset, 1, SkipReason::StrayData);
                return None;
            };
            self.partial_start.get_or_insert(self.offset);
            self.data.push(byte);
            if self.data.len() < data_len(status) {
                return None;
            }
            let msg = MidiMessage::from_channel_bytes(status, &self.data);
            self.data.clear();
            self.partial_start = None;
            if status >= 0xF0 {
                self.status = None;
            }
            return Some(msg);
        }
        match byte {
            SYSEX_END => match self.sysex.take() {
                Some((_, payload)) => Some(MidiMessage::SysEx(payload)),
                None => {
                    self.skip(self.offset, 1, SkipReason::StrayEndOfExclusive);
                    None
                }
            },
            _ => {
                self.abandon_sysex();
                self.abandon_partial();
                if byte == SYSEX_START {
                    self.status = None;
                    self.sysex = Some((self.offset, Vec::new()));
                    return None;
                }
                if data_len(byte) == 0 {
                    // tune request and undefined system common bytes
                    self.status = None;
                    return Some(MidiMessage::Other(vec![byte]));
                }
                self.status = Some(byte);
                self.partial_start = Some(self.offset);
                None
            }
        }
    }

    /// Flushes any partial message at end of input.
    pub fn finish(&mut self) -> Vec<Diagnostic> {
        self.abandon_sysex();
        self.abandon_partial();
        std::mem::take(&mut self.diagnostics)
    }

    /// Diagnostics gathered so far.
    pub fn take_diagnostics(&mut self) -> Vec<Diagnostic> {
        std::mem::take(&mut self.diagnostics)
    }
}

/// Decodes a complete byte buffer.
pub fn parse_stream(bytes: &[u8]) -> Parsed {
    let mut p = StreamParser::new();
    let messages = bytes.iter().filter_map(|&b| p.push(b)).collect();
    Parsed { messages, diagnostics: p.finish() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn note_on_channel_one() {
        let p = parse_stream(&[0x91, 0x3C, 0x60]);
        assert_eq!(p.messages, vec![MidiMessage::NoteOn { channel: 1, note: 60, velocity: 96 }]);
        assert!(p.diagnostics.is_empty());
    }

    #[test]
    fn zero_velocity_is_note_off() {
        let p = parse_stream(&[0x90, 0x3C, 0x00]);
        assert_eq!(p.messages, vec![MidiMessage::NoteOff { channel: 0, note: 60, velocity: 0 }]);
    }

    #[test]
    fn running_status() {
        let p = parse_stream(&[0x90, 0x3C, 0x60, 0x40, 0x60]);
        assert_eq!(p.messages, vec![MidiMessage::note_on(0, 60, 96), MidiMessage::note_on(0, 64, 96)]);
    }

    #[test]
    fn realtime_inside_message_keeps_state() {
        let p = parse_stream(&[0x90, 0x3C, 0xF8, 0x60, 0x40, 0xFE, 0x60]);
        assert_eq!(
            p.messages,
            vec![
                MidiMessage::Other(vec![0xF8]),
                MidiMessage::note_on(0, 60, 96),
                MidiMessage::Other(vec![0xFE]),
                MidiMessage::note_on(0, 64, 96),
            ]
        );
    }

    #[test]
    fn leading_garbage_resyncs() {
        let p = parse_stream(&[0x12, 0x34, 0x56, 0xB0, 0x07, 0x64]);
        assert_eq!(p.messages, vec![MidiMessage::ControlChange { channel: 0, controller: 7, value: 100 }]);
        assert_eq!(p.diagnostics, vec![Diagnostic { offset: 0, len: 3, reason: SkipReason::StrayData }]);
    }

    #[test]
    fn truncated_message_reported() {
        let p = parse_stream(&[0x90, 0x3C, 0x80, 0x3C, 0x00]);
        assert_eq!(p.messages, vec![MidiMessage::note_off(0, 60)]);
        assert_eq!(p.diagnostics, vec![Diagnostic { offset: 0, len: 2, reason: SkipReason::Incomplete }]);
        let p = parse_stream(&[0x90, 0x3C]);
        assert!(p.messages.is_empty());
        assert_eq!(p.diagnostics[0].reason, SkipReason::Incomplete);
    }

    #[test]
    fn sysex_framing() {
        let p = parse_stream(&[0xF0, 0x43, 0x01, 0xF7, 0xF7]);
        assert_eq!(p.messages, vec![MidiMessage::SysEx(vec![0x43, 0x01])]);
        assert_eq!(p.diagnostics[0].reason, SkipReason::StrayEndOfExclusive);
        let p = parse_stream(&[0xF0, 0x43, 0x91, 0x3C, 0x60]);
        assert_eq!(p.messages, vec![MidiMessage::note_on(1, 60, 96)]);
        assert_eq!(p.diagnostics, vec![Diagnostic { offset: 0, len: 2, reason: SkipReason::UnterminatedSysEx }]);
    }

    #[test]
    fn system_common_clears_running_status() {
        let p = parse_stream(&[0x90, 0x3C, 0x60, 0xF3, 0x02, 0x40, 0x60]);
        assert_eq!(p.messages, vec![MidiMessage::note_on(0, 60, 96), MidiMessage::Other(vec![0xF3, 0x02])]);
        assert_eq!(p.diagnostics[0].reason, SkipReason::StrayData);
    }

    #[test]
    fn two_byte_channel_messages() {
        let p = parse_stream(&[0xC5, 0x10, 0x11]);
        assert_eq!(p.messages, vec![MidiMessage::Other(vec![0xC5, 0x10]), MidiMessage::Other(vec![0xC5, 0x11])]);
    }
}
