use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use qsim_core::EntanglerSampler;
use qsim_engine::{Mailbox, Params, Worker, WorkerConfig};

fn pairs(byte: u8) -> [u8; 4] {
    [byte >> 6, (byte >> 4) & 3, (byte >> 2) & 3, byte & 3]
}

fn collect(s: f64, seed: u64, n: usize) -> Vec<u8> {
    let mb = Arc::new(Mailbox::new());
    let worker = Worker::spawn(
        Arc::new(Params::new(s, 0.5)),
        Arc::clone(&mb),
        WorkerConfig { seed: Some(seed), ..WorkerConfig::default() },
    )
    .unwrap();
    let mut out = Vec::new();
    let mut last = 0;
    let deadline = Instant::now() + Duration::from_secs(20);
    while out.len() < n && Instant::now() < deadline {
        if let Some(r) = mb.read() {
            if r.seq != last {
                last = r.seq;
                out.push(r.byte);
            }
        }
        thread::yield_now();
    }
    worker.stop();
    assert_eq!(out.len(), n, "worker produced too little");
    out
}

#[test]
fn bell_setting_gives_correlated_pairs() {
    for b in collect(0.0, 5, 300) {
        assert!(pairs(b).iter().all(|p| *p == 0b00 || *p == 0b11), "{b:08b}");
    }
}

#[test]
fn full_rotation_gives_anticorrelated_pairs() {
    for b in collect(1.0, 6, 300) {
        assert!(pairs(b).iter().all(|p| *p == 0b01 || *p == 0b10), "{b:08b}");
    }
}

#[test]
fn seeded_worker_reproduces_the_sampler_sequence() {
    // whatever the reader manages to catch must sit at the right place in the
    // seeded sequence
    let mb = Arc::new(Mailbox::new());
    let worker = Worker::spawn(
        Arc::new(Params::new(0.3, 0.5)),
        Arc::clone(&mb),
        WorkerConfig { seed: Some(42), min_period: Duration::from_millis(1), ..WorkerConfig::default() },
    )
    .unwrap();
    let mut seen = Vec::new();
    let start = Instant::now();
    while seen.len() < 40 && start.elapsed() < Duration::from_secs(20) {
        if let Some(r) = mb.read() {
            if seen.last().is_none_or(|&(s, _)| s != r.seq) {
                seen.push((r.seq, r.byte));
            }
        }
        thread::sleep(Duration::from_micros(200));
    }
    worker.stop();
    let max_seq = seen.iter().map(|x| x.0).max().unwrap() as usize;
    let mut reference = EntanglerSampler::seeded(42);
    let expected: Vec<u8> = (0..max_seq).map(|_| reference.packed_byte(0.3)).collect();
    for (seq, byte) in seen {
        assert_eq!(expected[seq as usize - 1], byte, "seq {seq}");
    }
}

#[test]
fn follows_parameter_changes() {
    let mb = Arc::new(Mailbox::new());
    let params = Arc::new(Params::new(0.0, 0.5));
    let worker =
        Worker::spawn(Arc::clone(&params), Arc::clone(&mb), WorkerConfig { seed: Some(1), ..WorkerConfig::default() })
            .unwrap();
    params.s.set(1.0);
    let start = Instant::now();
    let fence = loop {
        let seq = mb.seq();
        if seq > 0 || start.elapsed() > Duration::from_secs(5) {
            break seq;
        }
        thread::yield_now();
    };
    // skip one extra production in case the worker read s just before the change
    while mb.seq() < fence + 2 && start.elapsed() < Duration::from_secs(10) {
        thread::yield_now();
    }
    for _ in 0..50 {
        let b = mb.read().unwrap().byte;
        assert!(pairs(b).iter().all(|p| *p == 1 || *p == 2), "{b:08b}");
        thread::sleep(Duration::from_micros(100));
    }
    worker.stop();
}

#[test]
fn rejects_bad_resolution() {
    let r = Worker::spawn(
        Arc::new(Params::default()),
        Arc::new(Mailbox::new()),
        WorkerConfig { resolution: 2, ..WorkerConfig::default() },
    );
    assert!(r.is_err());
}
