//! MIDI side of the quantum instruments: wire-format decoding, standard MIDI
//! files, the q-note accompanist and quantum SysEx patch generation.

pub mod accompany;
pub mod error;
pub mod message;
pub mod parser;
pub mod patch;
pub mod render;
pub mod smf;

pub use accompany::{note_to_s, shift_from_packed, AccompanimentConfig, Accompanist, ActiveQNote, QuantumSource};
pub use error::{MidiError, Result};
pub use message::{serialize, MidiMessage};
pub use parser::{parse_stream, Diagnostic, Parsed, SkipReason, StreamParser};
pub use patch::{generate_patch, PatchField, PatchTemplate};
pub use render::{accompany_smf, accompany_timeline, Origin, RenderedEvent};
pub use smf::{Division, EventKind, Smf, TempoMap, TimedEvent, Track, TrackEvent};
