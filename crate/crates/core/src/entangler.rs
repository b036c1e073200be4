//! The two-qubit parameterised entangler: `H(w0) ∥ Rx(πs)(w1)`, then `CNOT(w0 → w1)`.
//!
//! As `s` sweeps 0 → 1 the output moves from `|Φ⁺⟩` to `|Ψ⁺⟩` (up to a relative
//! phase of `-i`); the map is 2-periodic in `s`.

use num_complex::Complex;

use crate::circuit::{Circuit, Slice};
use crate::gate::{Gate, Slot};
use crate::scalar::Scalar;
use crate::state::Statevector;

/// Rotation angle for a normalised performer input.
pub fn theta<T: Scalar>(s: T) -> T {
    T::PI() * s
}

/// The explicit two-slice circuit.
pub fn entangler_circuit<T: Scalar>(s: T) -> Circuit<T> {
    let prep = Slice::new(vec![Slot::Gate(Gate::H), Slot::Gate(Gate::Rx(theta(s)))]);
    let cnot = Slice::controlled(2, 0, 1, Gate::X);
    Circuit::from_slices(2, vec![prep, cnot]).expect("entangler circuit is well formed")
}

/// Closed-form output of [`entangler_circuit`] on `|00⟩`:
/// `(c, -iσ, -iσ, c)` with `c = cos(πs/2)/√2`, `σ = sin(πs/2)/√2`.
///
/// # Panics
/// If `s` is not finite.
pub fn entangler_state<T: Scalar>(s: T) -> Statevector<T> {
    assert!(s.is_finite(), "entangler input must be finite");
    let half = theta(s) / T::lit(2.0);
    let c = half.cos() * T::FRAC_1_SQRT_2();
    let sig = half.sin() * T::FRAC_1_SQRT_2();
    let amps = vec![
        Complex::new(c, T::zero()),
        Complex::new(T::zero(), -sig),
        Complex::new(T::zero(), -sig),
        Complex::new(c, T::zero()),
    ];
    Statevector::from_amplitudes(amps).expect("closed form is unit norm")
}
