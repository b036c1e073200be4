use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use qsim_engine::{Mailbox, ParamCell};

#[test]
fn fast_writer_slow_reader() {
    let mb = Arc::new(Mailbox::new());
    let completed = Arc::new(AtomicU64::new(0));
    let done = Arc::new(AtomicBool::new(false));

    let writer = {
        let (mb, completed, done) = (Arc::clone(&mb), Arc::clone(&completed), Arc::clone(&done));
        thread::spawn(move || {
            for i in 0..200_000u64 {
                let seq = mb.write((i % 251) as u8);
                completed.store(seq, Ordering::Release);
            }
            done.store(true, Ordering::Release);
        })
    };

    let mut last = 0;
    let mut reads = 0u64;
    let mut worst = Duration::ZERO;
    loop {
        let finished = done.load(Ordering::Acquire);
        let floor = completed.load(Ordering::Acquire);
        let t = Instant::now();
        let r = mb.read();
        worst = worst.max(t.elapsed());
        if let Some(r) = r {
            assert!(r.seq >= floor, "stale read: seq {} after write {} completed", r.seq, floor);
            assert!(r.seq >= last, "sequence went backwards");
            assert_eq!(u64::from(r.byte), (r.seq - 1) % 251, "byte does not belong to its sequence number");
            last = r.seq;
        }
        reads += 1;
        if finished {
            break;
        }
        if reads.is_multiple_of(64) {
            thread::sleep(Duration::from_micros(50));
        }
    }
    writer.join().unwrap();
    assert_eq!(mb.read().unwrap().seq, 200_000);
    // a read is one atomic load; anything near a millisecond means it waited
    assert!(worst < Duration::from_millis(5), "slowest read took {worst:?}");
}

#[test]
fn concurrent_writers_never_lose_a_sequence_number() {
    let mb = Arc::new(Mailbox::new());
    let handles: Vec<_> = (0..4)
        .map(|w| {
            let mb = Arc::clone(&mb);
            thread::spawn(move || {
                let mut seqs = Vec::with_capacity(10_000);
                for _ in 0..10_000 {
                    seqs.push(mb.write(w));
                }
                seqs
            })
        })
        .collect();
    let mut all: Vec<u64> = handles.into_iter().flat_map(|h| h.join().unwrap()).collect();
    all.sort_unstable();
    assert_eq!(all, (1..=40_000).collect::<Vec<_>>());
}

#[test]
fn param_cell_is_never_torn() {
    let cell = Arc::new(ParamCell::new(0.0));
    let stop = Arc::new(AtomicBool::new(false));
    let writer = {
        let (cell, stop) = (Arc::clone(&cell), Arc::clone(&stop));
        thread::spawn(move || {
            let mut flip = false;
            while !stop.load(Ordering::Relaxed) {
                cell.set(if flip { 1.75 } else { -0.125 });
                flip = !flip;
            }
        })
    };
    for _ in 0..100_000 {
        let v = cell.get();
        assert!(v == 0.0 || v == 1.75 || v == -0.125, "torn value {v}");
    }
    stop.store(true, Ordering::Relaxed);
    writer.join().unwrap();
}
