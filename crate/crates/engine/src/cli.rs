//! Command-line front end.

use std::fs;
use std::io::{self, Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qsim_core::{build_distribution, Circuit, EntanglerSampler, Scalar, Statevector, DEFAULT_RESOLUTION};
use qsim_dsp::{apply_effect, read_wav, write_wav, EffectParams, Mode, SeededBytes, DEFAULT_HOP};
use qsim_midi::{
    accompany_smf, generate_patch, serialize, AccompanimentConfig, Accompanist, PatchTemplate, Smf, StreamParser,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::live::LiveBytes;
use crate::mailbox::{Mailbox, Params};
use crate::session::SessionConfig;
use crate::worker::{Worker, WorkerConfig};

#[derive(Debug, Parser)]
#[command(name = "qsim", version, about = "Quantum circuit simulator and quantum music instruments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve |0…0⟩ through a circuit and print the final statevector.
    Simulate(SimulateArgs),
    /// Sample measurements and print a histogram.
    Measure(MeasureArgs),
    /// Add quantum accompaniment to a MIDI file (or a raw MIDI byte stream with --live).
    Midi(MidiArgs),
    /// Write a quantum-generated SysEx patch.
    Patch(PatchArgs),
    /// Quantum distortion, WAV to WAV.
    Distort(EffectArgs),
    /// Qubit crusher, WAV to WAV.
    Crush(EffectArgs),
    /// Serve the live-instrument WebSocket protocol.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Circuit text file; stdin when omitted or `-`.
    pub file: Option<PathBuf>,
    /// Inline circuit, slices separated by `;` or `/` (e.g. "H,I;C,X").
    #[arg(short = 'e', long, conflicts_with = "file")]
    pub circuit: Option<String>,
    /// Expected width; required when the circuit has no slices.
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Single precision.
    #[arg(long)]
    pub f32: bool,
    /// Accepted for uniformity; simulation is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    /// Entangler rotation fraction (θ = πs).
    #[arg(long, conflicts_with = "circuit")]
    pub s: Option<f64>,
    /// Measure the output of a circuit file instead of the entangler.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct MidiArgs {
    /// Input: a standard MIDI file, or raw MIDI bytes with --live (`-` for stdin).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output: a format-0 MIDI file, or raw MIDI bytes with --live (`-` for stdout).
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub listen_channel: u8,
    #[arg(long, default_value_t = 0)]
    pub qnote_channel: u8,
    #[arg(long, default_value_t = 2000)]
    pub ttl_ms: u64,
    /// Stream mode: wall-clock time, bytes from a background quantum worker.
    #[arg(long)]
    pub live: bool,
}

#[derive(Debug, Args)]
pub struct PatchArgs {
    /// Patch template file; the built-in four-operator template when omitted.
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EffectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub gain: f64,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Samples per quantum byte.
    #[arg(long, default_value_t = DEFAULT_HOP)]
    pub hop: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8765)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub heartbeat_ms: u64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>> {
    match path {
        Some(p) if p != Path::new("-") => fs::read(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).context("reading stdin")?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Path, bytes: &[u8], out: &mut dyn Write) -> Result<()> {
    if path == Path::new("-") {
        out.write_all(bytes)?;
        Ok(())
    } else {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
    }
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| rand::rng().random())
}

fn simulate_with<T: Scalar>(text: &str, qubits: Option<usize>, out: &mut dyn Write) -> Result<()> {
    let circuit = Circuit::<T>::parse(text, qubits)?;
    let state = Statevector::<T>::zero(circuit.n_qubits())?.evolve(&circuit)?;
    writeln!(out, "# index bits re im prob")?;
    write!(out, "{state}")?;
    Ok(())
}

fn simulate(args: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let text = match args.circuit {
        Some(inline) => inline.replace([';', '/'], "\n"),
        None => String::from_utf8(read_input(args.file.as_deref())?).context("circuit text is not UTF-8")?,
    };
    if args.f32 {
        simulate_with::<f32>(&text, args.qubits, out)
    } else {
        simulate_with::<f64>(&text, args.qubits, out)
    }
}

fn measure(args: MeasureArgs, out: &mut dyn Write) -> Result<()> {
    let seed = seed_or_entropy(args.seed);
    let (n_qubits, counts) = match (&args.circuit, args.s) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let circuit = Circuit::<f64>::parse(&text, None)?;
            let state = Statevector::zero(circuit.n_qubits())?.evolve(&circuit)?;
            let dist = build_distribution(&state.probabilities(), args.resolution)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut counts = vec![0usize; dist.outcomes()];
            for _ in 0..args.shots {
                counts[dist.sample(&mut rng)] += 1;
            }
            (circuit.n_qubits(), counts)
        }
        (None, s) => {
            let s = s.unwrap_or(0.5);
            if !s.is_finite() {
                bail!("s must be finite");
            }
            let mut sampler = EntanglerSampler::seeded(seed).with_resolution(args.resolution)?;
            let mut counts = vec![0usize; 4];
            for _ in 0..args.shots {
                counts[usize::from(sampler.measure(s))] += 1;
            }
            (2, counts)
        }
    };
    for (k, c) in counts.iter().enumerate() {
        let freq = if args.shots == 0 { 0.0 } else { *c as f64 / args.shots as f64 };
        writeln!(out, "{k:0n_qubits$b} {c} {freq:.4}")?;
    }
    Ok(())
}

fn accompaniment_config(args: &MidiArgs) -> Result<AccompanimentConfig> {
    if args.listen_channel > 15 || args.qnote_channel > 15 {
        bail!("MIDI channels are 0..=15");
    }
    Ok(AccompanimentConfig {
        listen_channel: args.listen_channel,
        qnote_channel: args.qnote_channel,
        qnote_ttl_ms: args.ttl_ms,
    })
}

fn midi(args: MidiArgs, out: &mut dyn Write) -> Result<()> {
    let config = accompaniment_config(&args)?;
    let input = read_input(Some(&args.input))?;
    if args.live {
        return midi_live(&args, config, &input, out);
    }
    let smf = Smf::parse(&input)?;
    let mut acc = Accompanist::new(config, EntanglerSampler::seeded(seed_or_entropy(args.seed)));
    let bytes = accompany_smf(&smf, &mut acc).to_bytes()?;
    write_output(&args.output, &bytes, out)
}

fn midi_live(args: &MidiArgs, config: AccompanimentConfig, input: &[u8], out: &mut dyn Write) -> Result<()> {
    let mailbox = Arc::new(Mailbox::new());
    let params = Arc::new(Params::default());
    let worker = Worker::spawn(
        Arc::clone(&params),
        Arc::clone(&mailbox),
        WorkerConfig { seed: args.seed, ..WorkerConfig::default() },
    )?;
    let mut acc = Accompanist::new(config, LiveBytes::new(Arc::clone(&mailbox), params, 0));
    let mut parser = StreamParser::new();
    let start = Instant::now();
    let mut bytes = Vec::with_capacity(input.len() * 2);
    for &b in input {
        let now = start.elapsed().as_millis() as u64;
        for m in acc.tick(now) {
            bytes.extend(serialize(&m)?);
        }
        if let Some(msg) = parser.push(b) {
            for m in acc.process_message(&msg, now) {
                bytes.extend(serialize(&m)?);
            }
        }
    }
    for m in acc.flush() {
        bytes.extend(serialize(&m)?);
    }
    for d in parser.finish() {
        log::warn!("skipped {} byte(s) at offset {}: {:?}", d.len, d.offset, d.reason);
    }
    worker.stop();
    write_output(&args.output, &bytes, out)
}

fn patch(args: PatchArgs, out: &mut dyn Write) -> Result<()> {
    let template = match &args.template {
        Some(p) => PatchTemplate::load(p).with_context(|| format!("loading {}", p.display()))?,
        None => PatchTemplate::builtin(),
    };
    if !args.s.is_finite() {
        bail!("s must be finite");
    }
    let mut sampler = EntanglerSampler::seeded(seed_or_entropy(args.seed));
    let qbytes: Vec<u8> = (0..template.mutable_count()).map(|_| sampler.packed_byte(args.s)).collect();
    let bytes = generate_patch(&template, &qbytes)?.to_bytes()?;
    fs::write(&args.output, &bytes).with_context(|| format!("writing {}", args.output.display()))?;
    writeln!(out, "{}: {} bytes, {} quantum fields", args.output.display(), bytes.len(), qbytes.len())?;
    Ok(())
}

fn effect(args: EffectArgs, mode: Mode) -> Result<()> {
    let params = EffectParams::new(args.gain, args.s, args.hop, mode)?;
    let input = read_wav(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let mut bytes = SeededBytes::new(seed_or_entropy(args.seed), args.s);
    let output = apply_effect(&input, &params, &mut bytes);
    write_wav(&output, &args.output).with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}

fn serve(args: ServeArgs, out: &mut dyn Write) -> Result<()> {
    let config = SessionConfig {
        seed: args.seed,
        resolution: args.resolution,
        heartbeat_ms: args.heartbeat_ms,
        ..SessionConfig::default()
    };
    config.validate().map_err(anyhow::Error::msg)?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async {
        let server = crate::server::Server::bind(SocketAddr::new(args.host, args.port), config).await?;
        writeln!(out, "listening on ws://{}", server.local_addr()?)?;
        out.flush()?;
        server.run().await?;
        Ok(())
    })
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a, out),
        Command::Measure(a) => measure(a, out),
        Command::Midi(a) => midi(a, out),
        Command::Patch(a) => patch(a, out),
        Command::Distort(a) => effect(a, Mode::Distort),
        Command::Crush(a) => effect(a, Mode::QubitCrush),
        Command::Serve(a) => serve(a, out),
    }
}
