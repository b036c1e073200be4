//! Regenerates a small set of example outputs:
//!
//! ```text
//! cargo run -p qsim-engine --example demo -- [OUT_DIR] [SEED]
//! ```
//!
//! Writes a test tone, its distorted and crushed versions, a short melody with
//! quantum accompaniment, and a quantum patch.

use std::f64::consts::TAU;
use std::fs;
use std::path::PathBuf;

use qsim_core::EntanglerSampler;
use qsim_dsp::{apply_effect, write_wav, EffectParams, Mode, SampleBuffer, SeededBytes};
use qsim_midi::{
    accompany_smf, generate_patch, AccompanimentConfig, Accompanist, Division, EventKind, MidiMessage, PatchTemplate,
    Smf, Track, TrackEvent,
};

fn tone(rate: u32, secs: f64) -> SampleBuffer {
    let n = (f64::from(rate) * secs) as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / f64::from(rate);
            let env = (1.0 - t / secs).max(0.0);
            (env * 14_000.0 * ((TAU * 110.0 * t).sin() + 0.4 * (TAU * 220.0 * t).sin())) as i16
        })
        .collect();
    SampleBuffer::new(rate, samples)
}

fn melody() -> Smf {
    let notes = [60u8, 62, 64, 65, 67, 69, 71, 72];
    let mut events = Vec::new();
    for (k, n) in notes.iter().enumerate() {
        let gap = if k == 4 { 2400 } else { 0 };
        events.push(TrackEvent { delta: gap, kind: EventKind::Midi(MidiMessage::note_on(0, *n, 96)) });
        events.push(TrackEvent { delta: 360, kind: EventKind::Midi(MidiMessage::note_off(0, *n)) });
    }
    Smf { format: 0, division: Division::TicksPerQuarter(480), tracks: vec![Track { events }] }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "demo-out".into()));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    fs::create_dir_all(&out)?;

    let dry = tone(44_100, 2.0);
    write_wav(&dry, out.join("tone.wav"))?;
    for (name, mode, gain, s) in
        [("distorted.wav", Mode::Distort, 0.15, 0.5), ("crushed.wav", Mode::QubitCrush, 1.0, 0.5)]
    {
        let params = EffectParams::new(gain, s, 256, mode)?;
        write_wav(&apply_effect(&dry, &params, &mut SeededBytes::new(seed, s)), out.join(name))?;
    }

    let input = melody();
    input.write(out.join("melody.mid"))?;
    let mut acc = Accompanist::new(AccompanimentConfig::default(), EntanglerSampler::seeded(seed));
    accompany_smf(&input, &mut acc).write(out.join("melody_accompanied.mid"))?;

    let template = PatchTemplate::builtin();
    let mut sampler = EntanglerSampler::seeded(seed);
    let qbytes: Vec<u8> = (0..template.mutable_count()).map(|_| sampler.packed_byte(0.5)).collect();
    fs::write(out.join("patch.syx"), generate_patch(&template, &qbytes)?.to_bytes()?)?;

    println!("wrote demo files to {}", out.display());
    Ok(())
}
