//! The quantum worker: a dedicated thread that keeps simulating the entangler at
//! the current `s` and publishes packed bytes to a [`Mailbox`].

use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use qsim_core::{EntanglerSampler, DEFAULT_RESOLUTION};

use crate::mailbox::{Mailbox, Params};

#[derive(Debug, Clone, Copy)]
pub struct WorkerConfig {
    /// `None` seeds from OS entropy.
    pub seed: Option<u64>,
    pub resolution: usize,
    /// Each production is followed by a sleep of `(slowdown - 1)` times its
    /// own duration. 1 means uncapped.
    pub slowdown: u32,
    /// Lower bound on the time between two productions.
    pub min_period: Duration,
}

impl Default for WorkerConfig {
    fn default() -> Self {
        Self { seed: None, resolution: DEFAULT_RESOLUTION, slowdown: 1, min_period: Duration::ZERO }
    }
}

/// Handle to a running worker; stops and joins it on drop.
#[derive(Debug)]
pub struct Worker {
    stop: Arc<AtomicBool>,
    restarts: Arc<AtomicU64>,
    thread: Option<JoinHandle<()>>,
}

fn sampler(config: &WorkerConfig, generation: u64) -> EntanglerSampler {
    let base = match config.seed {
        Some(seed) => EntanglerSampler::seeded(seed.wrapping_add(generation)),
        None => EntanglerSampler::from_entropy(),
    };
    base.with_resolution(config.resolution).expect("resolution checked at spawn")
}

fn run(params: &Params, mailbox: &Mailbox, config: &WorkerConfig, stop: &AtomicBool, generation: u64) {
    let mut sampler = sampler(config, generation);
    while !stop.load(Ordering::Relaxed) {
        let started = Instant::now();
        let s = params.s.get();
        // a non-finite s is ignored; readers keep the last good byte
        if s.is_finite() {
            mailbox.write(sampler.packed_byte(s));
        }
        let spent = started.elapsed();
        let mut pause = spent * config.slowdown.saturating_sub(1);
        if spent + pause < config.min_period {
            pause = config.min_period - spent;
        }
        if pause.is_zero() {
            thread::yield_now();
        } else {
            thread::sleep(pause);
        }
    }
}

impl Worker {
    pub fn spawn(params: Arc<Params>, mailbox: Arc<Mailbox>, config: WorkerConfig) -> qsim_core::Result<Self> {
        if config.resolution < 4 {
            return Err(qsim_core::QsimError::Resolution { resolution: config.resolution, outcomes: 4 });
        }
        let stop = Arc::new(AtomicBool::new(false));
        let restarts = Arc::new(AtomicU64::new(0));
        let thread = {
            let stop = Arc::clone(&stop);
            let restarts = Arc::clone(&restarts);
            thread::Builder::new()
                .name("quantum-worker".into())
                .spawn(move || {
                    let mut generation = 0;
                    while !stop.load(Ordering::Relaxed) {
                        let result = panic::catch_unwind(AssertUnwindSafe(|| {
                            run(&params, &mailbox, &config, &stop, generation)
                        }));
                        if result.is_err() {
                            generation += 1;
                            restarts.fetch_add(1, Ordering::Relaxed);
                            log::error!("quantum worker faulted; restarting (restart #{generation})");
                        }
                    }
                })
                .expect("spawn quantum worker")
        };
        Ok(Self { stop, restarts, thread: Some(thread) })
    }

    pub fn restarts(&self) -> u64 {
        self.restarts.load(Ordering::Relaxed)
    }

    pub fn stop(mut self) {
        self.halt();
    }

    fn halt(&mut self) {
        self.stop.store(true, Ordering::Relaxed);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for Worker {
    fn drop(&mut self) {
        self.halt();
    }
}
