//! Standard MIDI File (format 0/1) reading and writing, plus tick ↔ millisecond
//! conversion driven by the file's tempo events.

use std::path::Path;

use crate::error::{MidiError, Result};
use crate::message::{data_len, MidiMessage, SYSEX_END, SYSEX_START};

pub const META_END_OF_TRACK: u8 = 0x2F;
pub const META_TEMPO: u8 = 0x51;
const DEFAULT_TEMPO_US: u32 = 500_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    Midi(MidiMessage),
    Meta {
        kind: u8,
        data: Vec<u8>,
    },
    /// SysEx packet that is not a single complete F0…F7 message (continuations,
    /// escapes). `lead` is 0xF0 or 0xF7.
    RawSysEx {
        lead: u8,
        data: Vec<u8>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackEvent {
    pub delta: u32,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Track {
    pub events: Vec<TrackEvent>,
}

/// Time base from the header's division word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Division {
    TicksPerQuarter(u16),
    /// Frames per second and ticks per frame.
    Smpte {
        fps: u8,
        ticks_per_frame: u8,
    },
}

impl Division {
    fn from_word(w: u16) -> Result<Self> {
        if w & 0x8000 == 0 {
            if w == 0 {
                return Err(MidiError::File("division of zero ticks".into()));
            }
            Ok(Division::TicksPerQuarter(w))
        } else {
            let fps = (-((w >> 8) as u8 as i8)) as u8;
            let tpf = (w & 0xFF) as u8;
            if fps == 0 || tpf == 0 {
                return Err(MidiError::File("bad SMPTE division".into()));
            }
            Ok(Division::Smpte { fps, ticks_per_frame: tpf })
        }
    }

    fn to_word(self) -> u16 {
        match self {
            Division::TicksPerQuarter(t) => t,
            Division::Smpte { fps, ticks_per_frame } => {
                (u16::from((-(fps as i8)) as u8) << 8) | u16::from(ticks_per_frame)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smf {
    pub format: u16,
    pub division: Division,
    pub tracks: Vec<Track>,
}

/// An event with its absolute tick, after merging tracks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedEvent {
    pub tick: u64,
    pub kind: EventKind,
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(MidiError::Truncated(what));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16> {
        let b = self.take(2, what)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn vlq(&mut self, what: &'static str) -> Result<u32> {
        let mut v: u32 = 0;
        for _ in 0..4 {
            let b = self.u8(what)?;
            v = (v << 7) | u32::from(b & 0x7F);
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(MidiError::File(format!("variable-length quantity too long in {what}")))
    }

    fn done(&self) -> bool {
        self.pos >= self.buf.len()
    }
}

fn write_vlq(out: &mut Vec<u8>, mut v: u32) {
    let mut stack = [0u8; 5];
    let mut n = 0;
    loop {
        stack[n] = (v & 0x7F) as u8;
        n += 1;
        v >>= 7;
        if v == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        out.push(stack[i] | if i > 0 { 0x80 } else { 0 });
    }
}

fn parse_track(data: &[u8]) -> Result<Track> {
    let mut r = Reader { buf: data, pos: 0 };
    let mut events = Vec::new();
    let mut running: Option<u8> = None;
    while !r.done() {
        let delta = r.vlq("event delta")?;
        let first = r.u8("event status")?;
        let kind = match first {
            0xFF => {
                running = None;
                let kind = r.u8("meta type")?;
                let len = r.vlq("meta length")? as usize;
                let data = r.take(len, "meta data")?.to_vec();
                EventKind::Meta { kind, data }
            }
            SYSEX_START | SYSEX_END => {
                running = None;
                let len = r.vlq("sysex length")? as usize;
                let data = r.take(len, "sysex data")?.to_vec();
                match data.split_last() {
                    Some((&SYSEX_END, body)) if first == SYSEX_START && body.iter().all(|&b| b < 0x80) => {
                        EventKind::Midi(MidiMessage::SysEx(body.to_vec()))
                    }
                    _ => EventKind::RawSysEx { lead: first, data },
                }
            }
            _ => {
                let (status, mut pending) = if first & 0x80 != 0 {
                    (first, Vec::new())
                } else {
                    let s = running.ok_or_else(|| MidiError::File("data byte without running status".into()))?;
                    (s, vec![first])
                };
                if status >= 0xF0 {
                    return Err(MidiError::File(format!("unexpected status 0x{status:02X} in track")));
                }
                running = Some(status);
                while pending.len() < data_len(status) {
                    let b = r.u8("channel message data")?;
                    if b & 0x80 != 0 {
                        return Err(MidiError::File(format!("status byte 0x{b:02X} inside message data")));
                    }
                    pending.push(b);
                }
                EventKind::Midi(MidiMessage::from_channel_bytes(status, &pending))
            }
        };
        events.push(TrackEvent { delta, kind });
    }
    Ok(Track { events })
}

impl Smf {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if r.take(4, "header id")? != b"MThd" {
            return Err(MidiError::File("missing MThd header".into()));
        }
        let len = r.u32("header length")? as usize;
        if len < 6 {
            return Err(MidiError::File(format!("header length {len}")));
        }
        let format = r.u16("format")?;
        let ntracks = r.u16("track count")?;
        let division = Division::from_word(r.u16("division")?)?;
        r.take(len - 6, "header padding")?;
        if format > 1 {
            return Err(MidiError::File(format!("format {format} not supported")));
        }
        let mut tracks = Vec::with_capacity(ntracks as usize);
        while tracks.len() < ntracks as usize {
            let id = r.take(4, "chunk id")?;
            let clen = r.u32("chunk length")? as usize;
            let body = r.take(clen, "chunk body")?;
            if id == b"MTrk" {
                tracks.push(parse_track(body)?);
            }
        }
        Ok(Smf { format, division, tracks })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read(path)?)
    }

    /// Serializes without running status; each track gets an end-of-track
    /// meta event if it lacks one.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.extend_from_slice(b"MThd");
        out.extend_from_slice(&6u32.to_be_bytes());
        out.extend_from_slice(&self.format.to_be_bytes());
        out.extend_from_slice(&(self.tracks.len() as u16).to_be_bytes());
        out.extend_from_slice(&self.division.to_word().to_be_bytes());
        for track in &self.tracks {
            let mut body = Vec::new();
            let mut ended = false;
            for ev in &track.events {
                if ended {
                    return Err(MidiError::File("event after end of track".into()));
                }
                write_vlq(&mut body, ev.delta);
                match &ev.kind {
                    EventKind::Midi(MidiMessage::SysEx(payload)) => {
                        body.push(SYSEX_START);
                        write_vlq(&mut body, payload.len() as u32 + 1);
                        body.extend_from_slice(&MidiMessage::SysEx(payload.clone()).to_bytes()?[1..]);
                    }
                    EventKind::Midi(m) => {
                        let bytes = m.to_bytes()?;
                        if bytes[0] >= 0xF0 {
                            return Err(MidiError::File(format!("system message 0x{:02X} cannot be stored", bytes[0])));
                        }
                        body.extend_from_slice(&bytes);
                    }
                    EventKind::Meta { kind, data } => {
                        body.push(0xFF);
                        body.push(*kind);
                        write_vlq(&mut body, data.len() as u32);
                        body.extend_from_slice(data);
                        ended = *kind == META_END_OF_TRACK;
                    }
                    EventKind::RawSysEx { lead, data } => {
                        body.push(*lead);
                        write_vlq(&mut body, data.len() as u32);
                        body.extend_from_slice(data);
                    }
                }
            }
            if !ended {
                body.extend_from_slice(&[0x00, 0xFF, META_END_OF_TRACK, 0x00]);
            }
            out.extend_from_slice(b"MTrk");
            out.extend_from_slice(&(body.len() as u32).to_be_bytes());
            out.extend_from_slice(&body);
        }
        Ok(out)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    /// All tracks merged onto one absolute-tick timeline, stable by track order.
    /// End-of-track markers are dropped.
    pub fn merged(&self) -> Vec<TimedEvent> {
        let mut all = Vec::new();
        for (ti, track) in self.tracks.iter().enumerate() {
            let mut tick = 0u64;
            for (ei, ev) in track.events.iter().enumerate() {
                tick += u64::from(ev.delta);
                if matches!(ev.kind, EventKind::Meta { kind: META_END_OF_TRACK, .. }) {
                    continue;
                }
                all.push((tick, ti, ei, ev.kind.clone()));
            }
        }
        all.sort_by_key(|(tick, ti, ei, _)| (*tick, *ti, *ei));
        all.into_iter().map(|(tick, _, _, kind)| TimedEvent { tick, kind }).collect()
    }

    /// Single-track format-0 file from absolute-tick events (must be sorted).
    pub fn from_timeline(division: Division, events: &[TimedEvent]) -> Self {
        let mut last = 0u64;
        let mut track = Track::default();
        for ev in events {
            debug_assert!(ev.tick >= last);
            track.events.push(TrackEvent { delta: (ev.tick - last) as u32, kind: ev.kind.clone() });
            last = ev.tick;
        }
        Smf { format: 0, division, tracks: vec![track] }
    }
}

/// Piecewise-linear tick → millisecond map from tempo meta events.
///
/// Time is tracked exactly in units of `1 / scale` microseconds, where `scale`
/// is the ticks-per-quarter (or SMPTE ticks-per-second) of the file.
#[derive(Debug, Clone)]
pub struct TempoMap {
    scale: u128,
    /// (start tick, start time, time per tick), both times in scaled units
    segments: Vec<(u64, u128, u128)>,
}

impl TempoMap {
    pub fn new(division: Division, timeline: &[TimedEvent]) -> Self {
        match division {
            Division::Smpte { fps, ticks_per_frame } => {
                TempoMap { scale: u128::from(fps) * u128::from(ticks_per_frame), segments: vec![(0, 0, 1_000_000)] }
            }
            Division::TicksPerQuarter(tpq) => {
                let mut segments = vec![(0u64, 0u128, u128::from(DEFAULT_TEMPO_US))];
                for ev in timeline {
                    if let EventKind::Meta { kind: META_TEMPO, data } = &ev.kind {
                        if data.len() != 3 {
                            continue;
                        }
                        let tempo = u32::from_be_bytes([0, data[0], data[1], data[2]]);
                        let &(t0, start, rate) = segments.last().expect("non-empty");
                        let at = start + u128::from(ev.tick - t0) * rate;
                        if t0 == ev.tick {
                            segments.pop();
                        }
                        segments.push((ev.tick, at, u128::from(tempo.max(1))));
                    }
                }
                TempoMap { scale: u128::from(tpq), segments }
            }
        }
    }

    fn scaled(&self, tick: u64) -> u128 {
        let idx = self.segments.partition_point(|s| s.0 <= tick) - 1;
        let (t0, start, rate) = self.segments[idx];
        start + u128::from(tick - t0) * rate
    }

    /// Whole milliseconds elapsed at `tick` (floored).
    pub fn ms_at(&self, tick: u64) -> u64 {
        (self.scaled(tick) / (1000 * self.scale)) as u64
    }

    /// Largest tick that falls at or before `ms` milliseconds.
    pub fn last_tick_at(&self, ms: u64) -> u64 {
        let target = u128::from(ms) * 1000 * self.scale;
        let idx = self.segments.partition_point(|s| s.1 <= target).max(1) - 1;
        let (t0, start, rate) = self.segments[idx];
        t0 + ((target.saturating_sub(start)) / rate) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Smf {
        Smf {
            format: 1,
            division: Division::TicksPerQuarter(480),
            tracks: vec![
                Track {
                    events: vec![
                        TrackEvent {
                            delta: 0,
                            kind: EventKind::Meta { kind: META_TEMPO, data: vec![0x07, 0xA1, 0x20] },
                        },
                        TrackEvent { delta: 0, kind: EventKind::Meta { kind: META_END_OF_TRACK, data: vec![] } },
                    ],
                },
                Track {
                    events: vec![
                        TrackEvent { delta: 0, kind: EventKind::Midi(MidiMessage::note_on(0, 60, 96)) },
                        TrackEvent { delta: 480, kind: EventKind::Midi(MidiMessage::note_off(0, 60)) },
                        TrackEvent { delta: 200, kind: EventKind::Midi(MidiMessage::SysEx(vec![0x43, 0x10])) },
                        TrackEvent { delta: 0, kind: EventKind::Meta { kind: META_END_OF_TRACK, data: vec![] } },
                    ],
                },
            ],
        }
    }

    #[test]
    fn file_round_trip() {
        let smf = sample();
        let bytes = smf.to_bytes().unwrap();
        assert_eq!(Smf::parse(&bytes).unwrap(), smf);
    }

    #[test]
    fn running_status_in_track() {
        // note on, then a running-status note on with velocity 0
        let body = [0x00, 0x90, 0x3C, 0x40, 0x60, 0x3C, 0x00, 0x00, 0xFF, 0x2F, 0x00];
        let mut bytes = b"MThd\0\0\0\x06\0\0\0\x01\x01\xE0MTrk".to_vec();
        bytes.extend_from_slice(&(body.len() as u32).to_be_bytes());
        bytes.extend_from_slice(&body);
        let smf = Smf::parse(&bytes).unwrap();
        let ev = &smf.tracks[0].events;
        assert_eq!(ev[1], TrackEvent { delta: 0x60, kind: EventKind::Midi(MidiMessage::note_off(0, 60)) });
    }

    #[test]
    fn truncation_is_an_error() {
        let bytes = sample().to_bytes().unwrap();
        assert!(matches!(Smf::parse(&bytes[..bytes.len() - 3]), Err(MidiError::Truncated(_))));
        assert!(Smf::parse(b"RIFF").is_err());
    }

    #[test]
    fn vlq_encoding() {
        for (v, enc) in [
            (0u32, vec![0x00]),
            (0x7F, vec![0x7F]),
            (0x80, vec![0x81, 0x00]),
            (0x0FFF_FFFF, vec![0xFF, 0xFF, 0xFF, 0x7F]),
        ] {
            let mut out = Vec::new();
            write_vlq(&mut out, v);
            assert_eq!(out, enc);
            assert_eq!(Reader { buf: &enc, pos: 0 }.vlq("t").unwrap(), v);
        }
    }

    #[test]
    fn tempo_map() {
        let smf = sample();
        let tl = smf.merged();
        let map = TempoMap::new(smf.division, &tl);
        // 500000 µs per quarter at 480 tpq
        assert_eq!(map.ms_at(480), 500);
        assert_eq!(map.last_tick_at(500), 480);
        assert_eq!(map.ms_at(map.last_tick_at(2500)), 2500);
        for ms in [0u64, 1, 7, 999, 1234, 2000] {
            let t = map.last_tick_at(ms);
            let target = u128::from(ms) * 1000 * 480;
            assert!(map.scaled(t) <= target && map.scaled(t + 1) > target);
        }
    }

    #[test]
    fn tempo_change_midway() {
        let tl =
            vec![TimedEvent { tick: 480, kind: EventKind::Meta { kind: META_TEMPO, data: vec![0x0F, 0x42, 0x40] } }];
        let map = TempoMap::new(Division::TicksPerQuarter(480), &tl);
        assert_eq!(map.ms_at(480), 500);
        assert_eq!(map.ms_at(960), 1500);
        assert_eq!(map.last_tick_at(1500), 960);
    }

    #[test]
    fn merge_orders_by_tick_then_track() {
        let tl = sample().merged();
        assert!(matches!(tl[0].kind, EventKind::Meta { kind: META_TEMPO, .. }));
        assert_eq!(tl.len(), 4);
        assert_eq!(tl.last().unwrap().tick, 680);
    }
}
