//! The live-instrument protocol: JSON text frames in, JSON text frames out.
//!
//! A [`Session`] is a plain state machine driven by frames and a millisecond
//! clock supplied by the caller. It owns its own seeded sampler, so the same
//! seed and the same client script always produce the same server transcript.

use qsim_core::{entangler_state, EntanglerSampler, DEFAULT_RESOLUTION};
use qsim_midi::{generate_patch, AccompanimentConfig, Accompanist, MidiMessage, PatchTemplate, QuantumSource};
use serde::{Deserialize, Serialize};

/// Client → server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "t", deny_unknown_fields)]
pub enum ClientFrame {
    #[serde(rename = "noteOn")]
    NoteOn { note: u8, vel: u8 },
    #[serde(rename = "noteOff")]
    NoteOff { note: u8 },
    #[serde(rename = "setS")]
    SetS { s: f64 },
    #[serde(rename = "setGain")]
    SetGain { g: f64 },
    #[serde(rename = "patch")]
    Patch,
}

/// Server → client.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "t")]
pub enum ServerFrame {
    #[serde(rename = "qnote")]
    QNote {
        note: u8,
        vel: u8,
        #[serde(rename = "ttlMs")]
        ttl_ms: u64,
    },
    #[serde(rename = "probs")]
    Probs { p: [f64; 4] },
    #[serde(rename = "qbyte")]
    QByte { v: u8 },
    #[serde(rename = "sysex")]
    SysEx { bytes: Vec<u8> },
    #[serde(rename = "err")]
    Err { msg: String },
}

impl ServerFrame {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server frames always serialize")
    }

    fn err(msg: impl Into<String>) -> Self {
        ServerFrame::Err { msg: msg.into() }
    }
}

#[derive(Debug, Clone)]
pub struct SessionConfig {
    /// `None` draws a fresh seed from OS entropy for every session.
    pub seed: Option<u64>,
    pub resolution: usize,
    pub accompaniment: AccompanimentConfig,
    pub initial_s: f64,
    pub initial_gain: f64,
    /// Interval of unsolicited `probs` frames; at most 1000 so the client sees
    /// at least one per second.
    pub heartbeat_ms: u64,
    pub template: PatchTemplate,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            seed: None,
            resolution: DEFAULT_RESOLUTION,
            accompaniment: AccompanimentConfig::default(),
            initial_s: 0.5,
            initial_gain: 0.5,
            heartbeat_ms: 1000,
            template: PatchTemplate::builtin(),
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.resolution < 4 {
            return Err(format!("resolution {} is below the 4 outcomes", self.resolution));
        }
        if self.accompaniment.listen_channel > 15 || self.accompaniment.qnote_channel > 15 {
            return Err("MIDI channels are 0..=15".into());
        }
        check_s(self.initial_s)?;
        check_gain(self.initial_gain)?;
        if !(1..=1000).contains(&self.heartbeat_ms) {
            return Err(format!("heartbeat {} ms is outside 1..=1000", self.heartbeat_ms));
        }
        Ok(())
    }
}

fn check_s(s: f64) -> Result<(), String> {
    if s.is_finite() && (0.0..=2.0).contains(&s) {
        Ok(())
    } else {
        Err(format!("s = {s} is outside 0..=2"))
    }
}

fn check_gain(g: f64) -> Result<(), String> {
    if g.is_finite() && (0.0..=1.0).contains(&g) {
        Ok(())
    } else {
        Err(format!("gain = {g} is outside 0..=1"))
    }
}

fn check_7bit(name: &str, v: u8) -> Result<(), String> {
    if v < 0x80 {
        Ok(())
    } else {
        Err(format!("{name} {v} is not a 7-bit value"))
    }
}

#[derive(Debug)]
pub struct Session {
    acc: Accompanist<EntanglerSampler>,
    template: PatchTemplate,
    s: f64,
    gain: f64,
    heartbeat_ms: u64,
    last_probs: Option<u64>,
}

impl Session {
    pub fn new(config: &SessionConfig) -> Result<Self, String> {
        config.validate()?;
        let sampler = match config.seed {
            Some(seed) => EntanglerSampler::seeded(seed),
            None => EntanglerSampler::from_entropy(),
        }
        .with_resolution(config.resolution)
        .map_err(|e| e.to_string())?;
        Ok(Self {
            acc: Accompanist::new(config.accompaniment, sampler),
            template: config.template.clone(),
            s: config.initial_s,
            gain: config.initial_gain,
            heartbeat_ms: config.heartbeat_ms,
            last_probs: None,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    fn probs(&mut self, now: u64) -> ServerFrame {
        self.last_probs = Some(now);
        let p = entangler_state(self.s).probabilities();
        ServerFrame::Probs { p: [p[0], p[1], p[2], p[3]] }
    }

    /// Frames to send as soon as the connection opens.
    pub fn open(&mut self, now: u64) -> Vec<ServerFrame> {
        vec![self.probs(now)]
    }

    /// Heartbeat: a `probs` frame whenever `heartbeat_ms` has passed since the
    /// last one. Also retires an expired q-note.
    pub fn tick(&mut self, now: u64) -> Vec<ServerFrame> {
        self.acc.tick(now);
        match self.last_probs {
            Some(t) if now.saturating_sub(t) < self.heartbeat_ms => Vec::new(),
            _ => vec![self.probs(now)],
        }
    }

    /// Parses one text frame. Anything unparseable is answered with an `err`
    /// frame; the session carries on.
    pub fn handle_text(&mut self, text: &str, now: u64) -> Vec<ServerFrame> {
        match serde_json::from_str::<ClientFrame>(text) {
            Ok(frame) => self.handle(frame, now),
            Err(e) => vec![ServerFrame::err(format!("bad frame: {e}"))],
        }
    }

    pub fn handle(&mut self, frame: ClientFrame, now: u64) -> Vec<ServerFrame> {
        self.acc.tick(now);
        match self.apply(frame, now) {
            Ok(out) => out,
            Err(msg) => vec![ServerFrame::err(msg)],
        }
    }

    fn apply(&mut self, frame: ClientFrame, now: u64) -> Result<Vec<ServerFrame>, String> {
        let channel = self.acc.config().listen_channel;
        match frame {
            ClientFrame::NoteOn { note, vel } => {
                check_7bit("note", note)?;
                check_7bit("velocity", vel)?;
                let msg = MidiMessage::note_on(channel, note, vel);
                let mut out = Vec::new();
                for m in self.acc.process_message(&msg, now).into_iter().skip(1) {
                    if let MidiMessage::NoteOn { note, velocity, .. } = m {
                        let v = self.acc.last_packed().expect("a q-note implies a packed byte");
                        out.push(ServerFrame::QByte { v });
                        out.push(ServerFrame::QNote { note, vel: velocity, ttl_ms: self.acc.config().qnote_ttl_ms });
                    }
                }
                Ok(out)
            }
            ClientFrame::NoteOff { note } => {
                check_7bit("note", note)?;
                self.acc.process_message(&MidiMessage::note_off(channel, note), now);
                Ok(Vec::new())
            }
            ClientFrame::SetS { s } => {
                check_s(s)?;
                self.s = s;
                Ok(vec![self.probs(now)])
            }
            ClientFrame::SetGain { g } => {
                check_gain(g)?;
                self.gain = g;
                Ok(vec![self.probs(now)])
            }
            ClientFrame::Patch => {
                let s = self.s;
                let src = self.acc.source_mut();
                let qbytes: Vec<u8> =
                    (0..self.template.mutable_count()).map(|_| QuantumSource::packed_byte(src, s)).collect();
                let msg = generate_patch(&self.template, &qbytes).map_err(|e| e.to_string())?;
                let bytes = msg.to_bytes().map_err(|e| e.to_string())?;
                Ok(vec![ServerFrame::SysEx { bytes }])
            }
        }
    }
}
