//! Single-qubit gates and the per-wire slot markers of a slice.

use std::fmt;

use num_complex::Complex;

use crate::scalar::Scalar;

/// 2×2 complex matrix, row-major.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

/// A fixed single-qubit gate, or an X rotation by an angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate<T> {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rx(T),
}

impl<T: Scalar> Gate<T> {
    pub fn matrix(&self) -> Mat2<T> {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        match *self {
            Gate::I => [[one, z], [z, one]],
            Gate::X => [[z, one], [one, z]],
            Gate::Y => [[z, -i], [i, z]],
            Gate::Z => [[one, z], [z, -one]],
            Gate::H => {
                let r = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
                [[r, r], [r, -r]]
            }
            Gate::S => [[one, z], [z, i]],
            Gate::T => [[one, z], [z, Complex::from_polar(T::one(), T::FRAC_PI_4())]],
            Gate::Rx(theta) => {
                let half = theta / T::lit(2.0);
                let c = Complex::new(half.cos(), T::zero());
                let s = Complex::new(T::zero(), -half.sin());
                [[c, s], [s, c]]
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Gate::I)
    }
}

/// One wire position inside a slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slot<T> {
    Gate(Gate<T>),
    /// Control dot; the slice's single non-identity gate becomes its target.
    Control,
    /// One end of a SWAP; a slice holds exactly two of these.
    Swap,
}

impl<T> Slot<T> {
    pub const IDENTITY: Slot<T> = Slot::Gate(Gate::I);
}

impl<T: Scalar> fmt::Display for Slot<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Gate(Gate::I) => f.write_str("I"),
            Slot::Gate(Gate::X) => f.write_str("X"),
            Slot::Gate(Gate::Y) => f.write_str("Y"),
            Slot::Gate(Gate::Z) => f.write_str("Z"),
            Slot::Gate(Gate::H) => f.write_str("H"),
            Slot::Gate(Gate::S) => f.write_str("S"),
            Slot::Gate(Gate::T) => f.write_str("T"),
            // `{:?}` keeps the shortest round-tripping representation
            Slot::Gate(Gate::Rx(a)) => write!(f, "RX({a:?})"),
            Slot::Control => f.write_str("C"),
            Slot::Swap => f.write_str("SW"),
        }
    }
}
