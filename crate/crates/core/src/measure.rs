//! Bucketed measurement sampling.
//!
//! A probability vector is laid out as an array of `R` buckets where outcome `j`
//! owns `⌊R·p_j⌋` consecutive slots. Picking one bucket uniformly at random is
//! then a measurement. Slots left over by the floors are handed out one at a time
//! to outcomes in descending probability order (lowest index first on ties), so
//! every outcome ends with `⌊R·p_j⌋` or `⌊R·p_j⌋ + 1` buckets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entangler::entangler_state;
use crate::error::{QsimError, Result};
use crate::scalar::Scalar;

pub const DEFAULT_RESOLUTION: usize = 100;

const SUM_TOLERANCE: f64 = 1e-6;

/// Snap window for `R·p` values sitting just under an integer, so that a
/// probability a rounding step under 0.5 still fills 50 of 100 buckets.
pub const FLOOR_SNAP: f64 = 1e-9;

/// `⌊R·p⌋` with round-off snapping; see [`FLOOR_SNAP`].
pub fn bucket_floor(resolution: usize, p: f64) -> usize {
    let scaled = resolution as f64 * p;
    let fl = scaled.floor();
    let fl = if scaled - fl > 1.0 - FLOOR_SNAP { fl + 1.0 } else { fl };
    fl.max(0.0) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    outcomes: usize,
    buckets: Vec<u8>,
}

impl OutcomeDistribution {
    pub fn resolution(&self) -> usize {
        self.buckets.len()
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn buckets(&self) -> &[u8] {
        &self.buckets
    }

    /// Buckets owned by each outcome.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.outcomes];
        for &b in &self.buckets {
            c[b as usize] += 1;
        }
        c
    }

    /// Outcome stored in bucket `index` (0-based).
    pub fn outcome_at(&self, index: usize) -> usize {
        self.buckets[index] as usize
    }

    /// Draws a bucket uniformly and returns its outcome.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.outcome_at(rng.random_range(0..self.buckets.len()))
    }
}

/// Lays out `probs` over `resolution` buckets.
pub fn build_distribution<T: Scalar>(probs: &[T], resolution: usize) -> Result<OutcomeDistribution> {
    let n = probs.len();
    if n == 0 || n > 256 {
        return Err(QsimError::InvalidProbabilities(format!("{n} outcomes")));
    }
    if resolution < n {
        return Err(QsimError::Resolution { resolution, outcomes: n });
    }
    let mut p = Vec::with_capacity(n);
    for (i, v) in probs.iter().enumerate() {
        let v = v.to_f64().unwrap_or(f64::NAN);
        if !v.is_finite() || v < -SUM_TOLERANCE {
            return Err(QsimError::InvalidProbabilities(format!("p[{i}] = {v}")));
        }
        p.push(v.max(0.0));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(QsimError::InvalidProbabilities(format!("sum {total} is not 1")));
    }

    let counts: Vec<usize> = p.iter().map(|&v| bucket_floor(resolution, v)).collect();
    let filled: usize = counts.iter().sum();
    if filled > resolution {
        return Err(QsimError::InvalidProbabilities(format!("{filled} buckets exceed resolution {resolution}")));
    }

    let mut buckets = Vec::with_capacity(resolution);
    for (j, &c) in counts.iter().enumerate() {
        buckets.extend(std::iter::repeat_n(j as u8, c));
    }

    let mut order: Vec<usize> = (0..n).filter(|&j| p[j] > 0.0).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
    for j in order.iter().cycle().take(resolution - filled) {
        buckets.push(*j as u8);
    }
    Ok(OutcomeDistribution { outcomes: n, buckets })
}

/// Packs four 2-bit outcomes MSB-first: the first outcome lands in bits 7..6.
pub fn pack_outcomes(outcomes: &[u8; 4]) -> Result<u8> {
    outcomes.iter().try_fold(0u8, |acc, &o| if o > 3 { Err(QsimError::OutcomeRange(o)) } else { Ok((acc << 2) | o) })
}

/// Entangler → distribution → four samples → packed byte.
///
/// The distribution for the most recent `s` is cached.
#[derive(Debug, Clone)]
pub struct EntanglerSampler<R = ChaCha8Rng> {
    rng: R,
    resolution: usize,
    cached: Option<(u64, OutcomeDistribution)>,
}

impl EntanglerSampler<ChaCha8Rng> {
    pub fn seeded(seed: u64) -> Self {
        Self::new(ChaCha8Rng::seed_from_u64(seed), DEFAULT_RESOLUTION).expect("default resolution is valid")
    }

    /// Seeds from OS entropy.
    pub fn from_entropy() -> Self {
        Self::new(ChaCha8Rng::from_os_rng(), DEFAULT_RESOLUTION).expect("default resolution is valid")
    }
}

impl<R: Rng> EntanglerSampler<R> {
    pub fn new(rng: R, resolution: usize) -> Result<Self> {
        if resolution < 4 {
            return Err(QsimError::Resolution { resolution, outcomes: 4 });
        }
        Ok(Self { rng, resolution, cached: None })
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self> {
        if resolution < 4 {
            return Err(QsimError::Resolution { resolution, outcomes: 4 });
        }
        self.resolution = resolution;
        self.cached = None;
        Ok(self)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn distribution(&mut self, s: f64) -> &OutcomeDistribution {
        let key = s.to_bits();
        if self.cached.as_ref().map(|(k, _)| *k) != Some(key) {
            let probs = entangler_state(s).probabilities();
            let dist = build_distribution(&probs, self.resolution).expect("entangler probabilities are valid");
            self.cached = Some((key, dist));
        }
        &self.cached.as_ref().expect("just filled").1
    }

    /// One two-bit measurement of the entangler at `s`.
    pub fn measure(&mut self, s: f64) -> u8 {
        self.distribution(s);
        let dist = &self.cached.as_ref().expect("filled above").1;
        dist.sample(&mut self.rng) as u8
    }

    pub fn packed_byte(&mut self, s: f64) -> u8 {
        let outs = [self.measure(s), self.measure(s), self.measure(s), self.measure(s)];
        pack_outcomes(&outs).expect("two-qubit outcomes fit in two bits")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_distribution_blocks() {
        let d = build_distribution(&[0.5, 0.0, 0.0, 0.5], 100).unwrap();
        assert_eq!(d.counts(), vec![50, 0, 0, 50]);
        assert!(d.buckets()[..50].iter().all(|&b| b == 0));
        assert!(d.buckets()[50..].iter().all(|&b| b == 3));
    }

    #[test]
    fn certain_outcome() {
        let d = build_distribution(&[1.0, 0.0, 0.0, 0.0], 100).unwrap();
        assert_eq!(d.counts(), vec![100, 0, 0, 0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..1000).all(|_| d.sample(&mut rng) == 0));
    }

    #[test]
    fn thirds_leftover_goes_to_first() {
        let t = 1.0 / 3.0;
        let d = build_distribution(&[t, t, t, 0.0], 100).unwrap();
        assert_eq!(d.counts(), vec![34, 33, 33, 0]);
        assert_eq!(d.buckets()[99], 0);
    }

    #[test]
    fn leftovers_spread_one_each() {
        let d = build_distribution(&[0.255, 0.255, 0.245, 0.245], 100).unwrap();
        assert_eq!(d.counts(), vec![26, 26, 24, 24]);
    }

    #[test]
    fn rounding_noise_is_snapped() {
        let p = 0.5 - f64::EPSILON / 2.0;
        assert!(100.0 * p < 50.0);
        let d = build_distribution(&[p, 0.0, 0.0, p], 100).unwrap();
        assert_eq!(d.counts(), vec![50, 0, 0, 50]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(build_distribution(&[0.25; 4], 3), Err(QsimError::Resolution { resolution: 3, outcomes: 4 })));
        assert!(build_distribution(&[0.5, 0.6], 100).is_err());
        assert!(build_distribution(&[f64::NAN, 1.0], 100).is_err());
        assert!(build_distribution::<f64>(&[], 100).is_err());
    }

    #[test]
    fn bell_samples_only_correlated_outcomes() {
        let d = build_distribution(&[0.5, 0.0, 0.0, 0.5], 100).unwrap();
        for i in 0..100 {
            assert!(matches!(d.outcome_at(i), 0 | 3));
        }
    }

    #[test]
    fn packing() {
        assert_eq!(pack_outcomes(&[3, 3, 3, 3]).unwrap(), 0xFF);
        assert_eq!(pack_outcomes(&[0, 0, 0, 0]).unwrap(), 0x00);
        assert_eq!(pack_outcomes(&[1, 2, 3, 0]).unwrap(), 0x6C);
        assert_eq!(pack_outcomes(&[0, 4, 0, 0]).unwrap_err(), QsimError::OutcomeRange(4));
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = EntanglerSampler::seeded(42);
        let mut b = EntanglerSampler::seeded(42);
        let xs: Vec<u8> = (0..64).map(|_| a.packed_byte(0.3)).collect();
        let ys: Vec<u8> = (0..64).map(|_| b.packed_byte(0.3)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn sampler_bell_bit_pairs() {
        let mut s = EntanglerSampler::seeded(7);
        for _ in 0..200 {
            let b = s.packed_byte(0.0);
            for k in 0..4 {
                assert!(matches!((b >> (2 * k)) & 3, 0 | 3));
            }
            let b = s.packed_byte(1.0);
            for k in 0..4 {
                assert!(matches!((b >> (2 * k)) & 3, 1 | 2));
            }
        }
    }
}
