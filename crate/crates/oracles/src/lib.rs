//! Brute-force references for the test suites.
//!
//! Nothing in here calls the simulator's operator construction, bucket layout or
//! effect code; only the plain data types (circuits, slots) are shared.

use qsim_core::{Circuit, Complex, Gate, Slice, Slot};
use rand::Rng;

pub type C64 = Complex<f64>;
pub type Dense = Vec<Vec<C64>>;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Gate matrices written out independently of `Gate::matrix`.
pub fn gate_matrix(g: &Gate<f64>) -> [[C64; 2]; 2] {
    let r = 0.5f64.sqrt();
    match *g {
        Gate::I => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
        Gate::X => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        Gate::Y => [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        Gate::Z => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
        Gate::H => [[c(r, 0.), c(r, 0.)], [c(r, 0.), c(-r, 0.)]],
        Gate::S => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 1.)]],
        Gate::T => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(r, r)]],
        Gate::Rx(t) => {
            let (sn, cs) = (t / 2.0).sin_cos();
            [[c(cs, 0.), c(0., -sn)], [c(0., -sn), c(cs, 0.)]]
        }
    }
}

/// Slice unitary built column by column from the action on each basis state.
pub fn slice_unitary(slice: &Slice<f64>, n: usize) -> Dense {
    let dim = 1 << n;
    let mut u = vec![vec![c(0., 0.); dim]; dim];
    let control = slice.slots.iter().position(|s| matches!(s, Slot::Control));
    let swaps: Vec<usize> =
        slice.slots.iter().enumerate().filter(|(_, s)| matches!(s, Slot::Swap)).map(|(w, _)| w).collect();
    for col in 0..dim {
        if swaps.len() == 2 {
            let (a, b) = (swaps[0], swaps[1]);
            let mut row = col;
            if ((col >> a) & 1) != ((col >> b) & 1) {
                row ^= (1 << a) | (1 << b);
            }
            u[row][col] = c(1., 0.);
            continue;
        }
        if let Some(cw) = control {
            if (col >> cw) & 1 == 0 {
                u[col][col] = c(1., 0.);
                continue;
            }
        }
        // product state: every non-control wire applies its gate
        for (row, out) in u.iter_mut().enumerate() {
            let mut amp = c(1., 0.);
            for w in 0..n {
                let (ib, ob) = ((col >> w) & 1, (row >> w) & 1);
                let m = match slice.slots[w] {
                    Slot::Gate(g) => gate_matrix(&g),
                    Slot::Control => {
                        if ib != ob {
                            amp = c(0., 0.);
                        }
                        continue;
                    }
                    Slot::Swap => unreachable!(),
                };
                amp *= m[ob][ib];
            }
            out[col] = amp;
        }
    }
    u
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0., 0.); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Whole-circuit unitary by naive multiplication of slice unitaries.
pub fn circuit_unitary(circuit: &Circuit<f64>) -> Dense {
    let n = circuit.n_qubits();
    let dim = 1 << n;
    let mut u: Dense = (0..dim).map(|i| (0..dim).map(|j| c(if i == j { 1. } else { 0. }, 0.)).collect()).collect();
    for s in circuit.slices() {
        u = matmul(&slice_unitary(s, n), &u);
    }
    u
}

pub fn apply(u: &Dense, v: &[C64]) -> Vec<C64> {
    u.iter().map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum()).collect()
}

fn random_gate<R: Rng>(rng: &mut R, allow_identity: bool) -> Gate<f64> {
    let lo = if allow_identity { 0 } else { 1 };
    match rng.random_range(lo..8) {
        0 => Gate::I,
        1 => Gate::X,
        2 => Gate::Y,
        3 => Gate::Z,
        4 => Gate::H,
        5 => Gate::S,
        6 => Gate::T,
        _ => Gate::Rx(rng.random_range(-10.0..10.0)),
    }
}

/// Random well-formed slice over the full gate set.
pub fn random_slice<R: Rng>(rng: &mut R, n: usize) -> Slice<f64> {
    let kind = if n >= 2 { rng.random_range(0..3) } else { 0 };
    match kind {
        1 => {
            let control = rng.random_range(0..n);
            let mut target = rng.random_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            Slice::controlled(n, control, target, random_gate(rng, false))
        }
        2 => {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            Slice::swap(n, a, b)
        }
        _ => Slice::new((0..n).map(|_| Slot::Gate(random_gate(rng, true))).collect()),
    }
}

pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, slices: usize) -> Circuit<f64> {
    let s = (0..slices).map(|_| random_slice(rng, n)).collect();
    Circuit::from_slices(n, s).expect("random slices are well formed")
}

/// Bucket counts by direct counting: outcome `j` gets the largest `k` with
/// `k <= R·p_j + snap`, then leftovers are dealt round-robin over outcomes ranked
/// by (probability desc, index asc), zero-probability outcomes excluded.
pub fn brute_force_counts(probs: &[f64], resolution: usize, snap: f64) -> Vec<usize> {
    let mut counts: Vec<usize> = probs
        .iter()
        .map(|&p| {
            let mut k = 0usize;
            while (k + 1) as f64 <= resolution as f64 * p + snap {
                k += 1;
            }
            k
        })
        .collect();
    let filled: usize = counts.iter().sum();
    let mut ranked: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..probs.len()).filter(|&j| probs[j] > 0.0).collect();
    while !remaining.is_empty() {
        let mut best = 0;
        for (pos, &j) in remaining.iter().enumerate() {
            let b = remaining[best];
            if probs[j] > probs[b] || (probs[j] == probs[b] && j < b) {
                best = pos;
            }
        }
        ranked.push(remaining.remove(best));
    }
    for m in 0..resolution.saturating_sub(filled) {
        counts[ranked[m % ranked.len()]] += 1;
    }
    counts
}

/// Classical bitcrusher: keep the top `bits` of each 16-bit sample (toward zero),
/// and hold every `hold`-th sample, counting from the start of the buffer.
pub fn classical_bitcrush(samples: &[i16], bits: u32, hold: usize) -> Vec<i16> {
    let step = (1u32 << (16 - bits)) as f64;
    samples
        .iter()
        .enumerate()
        .map(|(n, _)| {
            let x = samples[n - n % hold] as f64;
            ((x / step).trunc() * step) as i16
        })
        .collect()
}
