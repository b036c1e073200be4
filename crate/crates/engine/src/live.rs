//! Path-side views of the mailbox. They never compute anything quantum: each
//! request returns the newest published byte, or repeats the previous one if the
//! worker has not produced since.

use std::sync::Arc;

use qsim_dsp::QuantumByteStream;
use qsim_midi::QuantumSource;

use crate::mailbox::{Mailbox, Params};

/// Zero-order hold over a [`Mailbox`].
#[derive(Debug)]
pub struct LiveBytes {
    mailbox: Arc<Mailbox>,
    params: Arc<Params>,
    last: u8,
    last_seq: u64,
    fresh: u64,
    held: u64,
}

impl LiveBytes {
    /// `initial` is returned until the worker's first write.
    pub fn new(mailbox: Arc<Mailbox>, params: Arc<Params>, initial: u8) -> Self {
        Self { mailbox, params, last: initial, last_seq: 0, fresh: 0, held: 0 }
    }

    fn latest(&mut self) -> u8 {
        match self.mailbox.read() {
            Some(r) if r.seq != self.last_seq => {
                self.last = r.byte;
                self.last_seq = r.seq;
                self.fresh += 1;
            }
            _ => self.held += 1,
        }
        self.last
    }

    /// Requests answered with a newly published byte.
    pub fn fresh_reads(&self) -> u64 {
        self.fresh
    }

    /// Requests answered by repeating the held byte.
    pub fn held_reads(&self) -> u64 {
        self.held
    }

    pub fn last_seq(&self) -> u64 {
        self.last_seq
    }
}

impl QuantumByteStream for LiveBytes {
    fn next_byte(&mut self) -> u8 {
        self.latest()
    }
}

impl QuantumSource for LiveBytes {
    /// Hands `s` to the worker for future productions and returns the newest
    /// byte right away.
    fn packed_byte(&mut self, s: f64) -> u8 {
        self.params.s.set(s);
        self.latest()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_until_fresh() {
        let mb = Arc::new(Mailbox::new());
        let mut live = LiveBytes::new(Arc::clone(&mb), Arc::new(Params::default()), 0x55);
        assert_eq!(live.next_byte(), 0x55);
        mb.write(0x12);
        assert_eq!(live.next_byte(), 0x12);
        assert_eq!(live.next_byte(), 0x12);
        assert_eq!((live.fresh_reads(), live.held_reads()), (1, 2));
    }

    #[test]
    fn midi_request_updates_s() {
        let params = Arc::new(Params::default());
        let mut live = LiveBytes::new(Arc::new(Mailbox::new()), Arc::clone(&params), 0);
        live.packed_byte(1.25);
        assert_eq!(params.s.get(), 1.25);
    }
}
