//! Slice-based statevector simulator for up to four qubits and fourteen slices.
//!
//! Circuits are columns of per-wire gate slots. Each slice is turned into a full
//! operator matrix on demand, applied to the statevector, and dropped. Measurements
//! are drawn from a fixed-resolution bucket array built from the Born-rule
//! probabilities.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` / `*32`
//! aliases below pin the precision.

pub mod census;
pub mod circuit;
pub mod entangler;
pub mod error;
pub mod gate;
pub mod measure;
pub mod operator;
pub mod scalar;
pub mod state;

pub use circuit::{slice_operator, Circuit, Slice, SliceKind, MAX_QUBITS, MAX_SLICES};
pub use entangler::{entangler_circuit, entangler_state, theta};
pub use error::{QsimError, Result};
pub use gate::{Gate, Mat2, Slot};
pub use measure::{build_distribution, pack_outcomes, EntanglerSampler, OutcomeDistribution, DEFAULT_RESOLUTION};
pub use num_complex::Complex;
pub use operator::{tensor_product, Operator, MAX_DIM};
pub use scalar::Scalar;
pub use state::{evolve, Statevector};

pub type Circuit64 = Circuit<f64>;
pub type Slice64 = Slice<f64>;
pub type Gate64 = Gate<f64>;
pub type Operator64 = Operator<f64>;
pub type Statevector64 = Statevector<f64>;

pub type Circuit32 = Circuit<f32>;
pub type Slice32 = Slice<f32>;
pub type Gate32 = Gate<f32>;
pub type Operator32 = Operator<f32>;
pub type Statevector32 = Statevector<f32>;
