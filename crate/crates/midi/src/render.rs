//! Offline accompaniment over a MIDI file, with a virtual clock taken from the
//! file's delta times and tempo map.

use crate::accompany::{Accompanist, QuantumSource};
use crate::smf::{EventKind, Smf, TempoMap, TimedEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Copied from the input file.
    Input,
    /// Generated q-note on/off.
    QNote,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedEvent {
    pub event: TimedEvent,
    pub origin: Origin,
    /// Virtual time in whole milliseconds.
    pub ms: u64,
}

/// Runs every input event through `acc` in time order. Q-note releases are
/// placed at the last tick not later than their deadline. Returns the merged
/// single-track timeline with provenance.
pub fn accompany_timeline<Q: QuantumSource>(input: &Smf, acc: &mut Accompanist<Q>) -> Vec<RenderedEvent> {
    let timeline = input.merged();
    let tempo = TempoMap::new(input.division, &timeline);
    let mut out = Vec::with_capacity(timeline.len() * 2);

    let release_due = |acc: &mut Accompanist<Q>, out: &mut Vec<RenderedEvent>, before_ms: Option<u64>| {
        if let Some(q) = acc.active() {
            if before_ms.is_none_or(|t| q.off_deadline <= t) {
                let tick = tempo.last_tick_at(q.off_deadline);
                for m in acc.tick(q.off_deadline) {
                    out.push(RenderedEvent {
                        event: TimedEvent { tick, kind: EventKind::Midi(m) },
                        origin: Origin::QNote,
                        ms: tempo.ms_at(tick),
                    });
                }
            }
        }
    };

    for ev in timeline {
        let now = tempo.ms_at(ev.tick);
        release_due(acc, &mut out, Some(now));
        match &ev.kind {
            EventKind::Midi(msg) => {
                for (i, m) in acc.process_message(msg, now).into_iter().enumerate() {
                    out.push(RenderedEvent {
                        event: TimedEvent { tick: ev.tick, kind: EventKind::Midi(m) },
                        origin: if i == 0 { Origin::Input } else { Origin::QNote },
                        ms: now,
                    });
                }
            }
            _ => out.push(RenderedEvent { event: ev.clone(), origin: Origin::Input, ms: now }),
        }
    }
    release_due(acc, &mut out, None);
    out
}

/// [`accompany_timeline`] written back as a format-0 file.
pub fn accompany_smf<Q: QuantumSource>(input: &Smf, acc: &mut Accompanist<Q>) -> Smf {
    let events: Vec<TimedEvent> = accompany_timeline(input, acc).into_iter().map(|r| r.event).collect();
    Smf::from_timeline(input.division, &events)
}
