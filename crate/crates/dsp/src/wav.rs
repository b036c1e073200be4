//! Minimal RIFF/WAVE reader and writer for 16-bit PCM.

use std::path::Path;

use crate::buffer::SampleBuffer;
use crate::error::{DspError, Result};

const FORMAT_PCM: u16 = 1;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

fn format_err(chunk: &str, reason: impl Into<String>) -> DspError {
    DspError::Format { chunk: chunk.to_string(), reason: reason.into() }
}

fn le16(b: &[u8]) -> u16 {
    u16::from_le_bytes([b[0], b[1]])
}

fn le32(b: &[u8]) -> u32 {
    u32::from_le_bytes([b[0], b[1], b[2], b[3]])
}

struct Fmt {
    channels: u16,
    rate: u32,
}

fn parse_fmt(body: &[u8]) -> Result<Fmt> {
    if body.len() < 16 {
        return Err(format_err("fmt ", format!("chunk is {} bytes, need 16", body.len())));
    }
    let mut tag = le16(&body[0..]);
    let channels = le16(&body[2..]);
    let rate = le32(&body[4..]);
    let bits = le16(&body[14..]);
    if tag == FORMAT_EXTENSIBLE {
        if body.len() < 26 {
            return Err(format_err("fmt ", "extensible header too short"));
        }
        tag = le16(&body[24..]);
    }
    if tag != FORMAT_PCM {
        return Err(format_err("fmt ", format!("format tag {tag:#06x} is not PCM")));
    }
    if bits != 16 {
        return Err(format_err("fmt ", format!("{bits}-bit samples, only 16-bit supported")));
    }
    if channels == 0 || channels > 2 {
        return Err(format_err("fmt ", format!("{channels} channels, expected 1 or 2")));
    }
    if rate == 0 {
        return Err(format_err("fmt ", "sample rate of zero"));
    }
    Ok(Fmt { channels, rate })
}

/// Decodes a WAV image; stereo is averaged down to mono.
pub fn decode_wav(bytes: &[u8]) -> Result<SampleBuffer> {
    if bytes.len() < 12 {
        return Err(format_err("RIFF", "truncated header"));
    }
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(format_err("RIFF", "missing RIFF/WAVE signature"));
    }
    let mut pos = 12;
    let mut fmt = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let len = le32(&bytes[pos + 4..]) as usize;
        let name = String::from_utf8_lossy(id).into_owned();
        let body_start = pos + 8;
        let Some(body) = bytes.get(body_start..body_start + len) else {
            return Err(format_err(
                &name,
                format!("chunk claims {len} bytes, only {} remain", bytes.len() - body_start),
            ));
        };
        match id {
            b"fmt " => fmt = Some(parse_fmt(body)?),
            b"data" => {
                let f = fmt.ok_or_else(|| format_err("data", "data chunk before fmt chunk"))?;
                let frame = 2 * f.channels as usize;
                if body.len() % frame != 0 {
                    return Err(format_err("data", format!("{} bytes is not a whole number of frames", body.len())));
                }
                let samples = body
                    .chunks_exact(frame)
                    .map(|fr| {
                        if f.channels == 1 {
                            i16::from_le_bytes([fr[0], fr[1]])
                        } else {
                            let l = i32::from(i16::from_le_bytes([fr[0], fr[1]]));
                            let r = i32::from(i16::from_le_bytes([fr[2], fr[3]]));
                            ((l + r) / 2) as i16
                        }
                    })
                    .collect();
                return Ok(SampleBuffer::new(f.rate, samples));
            }
            _ => {}
        }
        pos = body_start + len + (len & 1);
    }
    Err(if fmt.is_none() { format_err("fmt ", "missing fmt chunk") } else { format_err("data", "missing data chunk") })
}

/// Encodes a mono 16-bit PCM WAV image.
pub fn encode_wav(buf: &SampleBuffer) -> Vec<u8> {
    let data_len = (buf.samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&buf.rate.to_le_bytes());
    out.extend_from_slice(&(buf.rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for s in &buf.samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    out
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<SampleBuffer> {
    decode_wav(&std::fs::read(path)?)
}

pub fn write_wav(buf: &SampleBuffer, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_wav(buf))?;
    Ok(())
}
