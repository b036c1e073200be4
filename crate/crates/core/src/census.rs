//! Instrumentation hook counting live operator matrices.
//!
//! Every [`Operator`](crate::Operator) registers itself here on construction and
//! unregisters on drop. Counts are kept per dimension and per thread, so a test
//! can `reset()`, run `evolve`, then read the high-water mark for `2^n`.

use std::cell::Cell;

use crate::operator::MAX_DIM;

const SLOTS: usize = MAX_DIM.trailing_zeros() as usize + 1;

thread_local! {
    static LIVE: [Cell<usize>; SLOTS] = Default::default();
    static PEAK: [Cell<usize>; SLOTS] = Default::default();
}

fn slot(dim: usize) -> usize {
    dim.trailing_zeros() as usize
}

pub(crate) fn register(dim: usize) {
    let s = slot(dim);
    let now = LIVE.with(|l| {
        let v = l[s].get() + 1;
        l[s].set(v);
        v
    });
    PEAK.with(|p| {
        if now > p[s].get() {
            p[s].set(now);
        }
    });
}

pub(crate) fn unregister(dim: usize) {
    let s = slot(dim);
    LIVE.with(|l| l[s].set(l[s].get().saturating_sub(1)));
}

/// Resets the high-water marks to the current live counts.
pub fn reset() {
    LIVE.with(|l| {
        PEAK.with(|p| {
            for (pk, lv) in p.iter().zip(l.iter()) {
                pk.set(lv.get());
            }
        })
    });
}

/// Operator matrices of dimension `dim` currently alive on this thread.
pub fn live(dim: usize) -> usize {
    LIVE.with(|l| l[slot(dim)].get())
}

/// Highest simultaneous count of `dim`-sized operators since the last [`reset`].
pub fn peak(dim: usize) -> usize {
    PEAK.with(|p| p[slot(dim)].get())
}
