//! Statevectors and circuit evolution.

use std::fmt;

use num_complex::Complex;

use crate::circuit::{slice_operator, Circuit, MAX_QUBITS};
use crate::error::{QsimError, Result};
use crate::scalar::Scalar;

/// Unit-norm vector of `2^n` complex amplitudes, `1 <= n <= 4`.
///
/// Basis index bit `w` is the state of wire `w`, so index 1 is `|01⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector<T: Scalar> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> Statevector<T> {
    /// `|0…0⟩` on `n_qubits` wires.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(QsimError::QubitCount(n_qubits));
        }
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(QsimError::InvalidState(format!("basis index {index} out of range")));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amps })
    }

    /// Checks length, finiteness and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(QsimError::InvalidState(format!("length {dim} is not 2^n with n >= 1")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(QsimError::QubitCount(n_qubits));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QsimError::InvalidState("non-finite amplitude".into()));
        }
        let norm = amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if (norm - T::one()).abs() > T::tolerance() {
            return Err(QsimError::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Born-rule probabilities `|a_i|^2`.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Basis label, wire `n-1` first: index 1 of a 2-qubit state is `01`.
    pub fn bitstring(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.n_qubits)
    }

    /// Runs `circuit` starting from this state.
    pub fn evolve(&self, circuit: &Circuit<T>) -> Result<Self> {
        evolve(circuit, self)
    }
}

/// Multiplies the state by each slice operator in turn.
///
/// Operators are built one slice at a time and dropped before the next, so at
/// most three full-size matrices are live at once (two while a controlled slice
/// is being assembled); see [`crate::census`].
pub fn evolve<T: Scalar>(circuit: &Circuit<T>, initial: &Statevector<T>) -> Result<Statevector<T>> {
    if circuit.n_qubits() != initial.n_qubits {
        return Err(QsimError::QubitMismatch { expected: circuit.n_qubits(), got: initial.n_qubits });
    }
    let mut amps = initial.amps.clone();
    for slice in circuit.slices() {
        let op = slice_operator(slice, circuit.n_qubits())?;
        amps = op.apply(&amps);
    }
    Ok(Statevector { n_qubits: initial.n_qubits, amps })
}

/// `index bitstring re im prob` rows.
impl<T: Scalar> fmt::Display for Statevector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(f, "{i} {} {:.12} {:.12} {:.12}", self.bitstring(i), a.re, a.im, a.norm_sqr())?;
        }
        Ok(())
    }
}
