//! SysEx patch templates and quantum patch generation.
//!
//! A template is a line-oriented key/value file:
//!
//! ```text
//! # comments start with '#'
//! name   = generic-4op
//! header = 43 00 7F 1C
//! osc1.level = 0 127 fixed
//! osc2.ratio = 6 0x10 mutable
//! ```
//!
//! Field lines read `osc<N>.<param> = <offset> <value> <fixed|mutable>` where the
//! offset counts bytes after the header. Oscillator 1 must stay fixed: changing
//! the main oscillator too far tends to produce inaudible patches.

use std::path::Path;

use crate::error::{MidiError, Result};
use crate::message::MidiMessage;

pub const OSCILLATORS: u8 = 4;

const BUILTIN: &str = include_str!("../data/generic_4op.patch");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchField {
    pub oscillator: u8,
    pub name: String,
    pub offset: usize,
    pub value: u8,
    pub mutable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchTemplate {
    pub name: String,
    pub header: Vec<u8>,
    pub fields: Vec<PatchField>,
}

fn parse_byte(tok: &str) -> Option<u8> {
    let v = match tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")) {
        Some(hex) => u8::from_str_radix(hex, 16).ok()?,
        None => tok.parse().ok()?,
    };
    (v < 0x80).then_some(v)
}

impl PatchTemplate {
    /// The template shipped in `data/generic_4op.patch`.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled template parses")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::new();
        let mut header = None;
        let mut fields: Vec<PatchField> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| MidiError::Template { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => name = value.to_string(),
                "header" => {
                    let bytes = value
                        .split_whitespace()
                        .map(|t| u8::from_str_radix(t, 16).ok().filter(|b| *b < 0x80))
                        .collect::<Option<Vec<u8>>>()
                        .ok_or_else(|| err("header must be 7-bit hex bytes".into()))?;
                    header = Some(bytes);
                }
                _ => {
                    let (osc, param) = key
                        .strip_prefix("osc")
                        .and_then(|r| r.split_once('.'))
                        .ok_or_else(|| err(format!("unknown key `{key}`")))?;
                    let oscillator: u8 = osc
                        .parse()
                        .ok()
                        .filter(|o| (1..=OSCILLATORS).contains(o))
                        .ok_or_else(|| err(format!("oscillator `{osc}` not in 1..=4")))?;
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    let [offset, val, flag] = parts[..] else {
                        return Err(err("expected `<offset> <value> <fixed|mutable>`".into()));
                    };
                    let offset: usize = offset.parse().map_err(|_| err(format!("bad offset `{offset}`")))?;
                    let value = parse_byte(val).ok_or_else(|| err(format!("value `{val}` is not a 7-bit byte")))?;
                    let mutable = match flag {
                        "mutable" => true,
                        "fixed" => false,
                        _ => return Err(err(format!("flag `{flag}` is neither fixed nor mutable"))),
                    };
                    if mutable && oscillator == 1 {
                        return Err(err("oscillator 1 fields must be fixed".into()));
                    }
                    if fields.iter().any(|f| f.offset == offset) {
                        return Err(err(format!("offset {offset} used twice")));
                    }
                    fields.push(PatchField { oscillator, name: param.to_string(), offset, value, mutable });
                }
            }
        }
        let header = header.ok_or(MidiError::Template { line: 0, msg: "missing header".into() })?;
        fields.sort_by_key(|f| f.offset);
        Ok(Self { name, header, fields })
    }

    pub fn mutable_count(&self) -> usize {
        self.fields.iter().filter(|f| f.mutable).count()
    }

    fn body_len(&self) -> usize {
        self.fields.iter().map(|f| f.offset + 1).max().unwrap_or(0)
    }

    /// Template values as they would be sent unchanged.
    pub fn body(&self) -> Vec<u8> {
        let mut body = vec![0u8; self.body_len()];
        for f in &self.fields {
            body[f.offset] = f.value;
        }
        body
    }
}

/// Fills the template's mutable fields, in offset order, from `qbytes` masked to
/// 7 bits and returns the framed SysEx message. Fixed fields keep their values.
pub fn generate_patch(template: &PatchTemplate, qbytes: &[u8]) -> Result<MidiMessage> {
    let needed = template.mutable_count();
    if qbytes.len() < needed {
        return Err(MidiError::NotEnoughBytes { needed, got: qbytes.len() });
    }
    let mut body = template.body();
    for (f, q) in template.fields.iter().filter(|f| f.mutable).zip(qbytes) {
        body[f.offset] = q & 0x7F;
    }
    let mut payload = template.header.clone();
    payload.extend_from_slice(&body);
    Ok(MidiMessage::SysEx(payload))
}
