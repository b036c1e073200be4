//! Circuits as columns of slices, and per-slice operator construction.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{QsimError, Result};
use crate::gate::{Gate, Mat2, Slot};
use crate::operator::Operator;
use crate::scalar::Scalar;

pub const MAX_QUBITS: usize = 4;
pub const MAX_SLICES: usize = 14;

/// Structural reading of a validated slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceKind<T> {
    Plain,
    Controlled { control: usize, target: usize, gate: Gate<T> },
    Swap(usize, usize),
}

/// One column of a circuit. `slots[w]` sits on wire `w`; wire 0 is the top wire
/// and the least significant bit of a basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice<T> {
    pub slots: Vec<Slot<T>>,
}

impl<T: Scalar> Slice<T> {
    pub fn new(slots: Vec<Slot<T>>) -> Self {
        Self { slots }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { slots: vec![Slot::IDENTITY; n_qubits] }
    }

    /// Single gate on `wire`, identity elsewhere.
    pub fn single(n_qubits: usize, wire: usize, gate: Gate<T>) -> Self {
        let mut s = Self::identity(n_qubits);
        s.slots[wire] = Slot::Gate(gate);
        s
    }

    pub fn controlled(n_qubits: usize, control: usize, target: usize, gate: Gate<T>) -> Self {
        let mut s = Self::identity(n_qubits);
        s.slots[control] = Slot::Control;
        s.slots[target] = Slot::Gate(gate);
        s
    }

    pub fn swap(n_qubits: usize, a: usize, b: usize) -> Self {
        let mut s = Self::identity(n_qubits);
        s.slots[a] = Slot::Swap;
        s.slots[b] = Slot::Swap;
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.slots.len()
    }

    pub fn kind(&self) -> Result<SliceKind<T>> {
        let mut controls = Vec::new();
        let mut swaps = Vec::new();
        let mut gates = Vec::new();
        for (w, slot) in self.slots.iter().enumerate() {
            match slot {
                Slot::Control => controls.push(w),
                Slot::Swap => swaps.push(w),
                Slot::Gate(g) if !g.is_identity() => gates.push((w, *g)),
                Slot::Gate(_) => {}
            }
        }
        if let Some(g) = gates.iter().find_map(|(_, g)| match g {
            Gate::Rx(a) if !a.is_finite() => Some(*a),
            _ => None,
        }) {
            return Err(QsimError::MalformedSlice(format!("non-finite rotation angle {g}")));
        }
        match (controls.len(), swaps.len()) {
            (0, 0) => Ok(SliceKind::Plain),
            (1, 0) => match gates.as_slice() {
                [(target, gate)] => Ok(SliceKind::Controlled { control: controls[0], target: *target, gate: *gate }),
                [] => Err(QsimError::MalformedSlice("control without target".into())),
                _ => Err(QsimError::MalformedSlice("control with more than one target gate".into())),
            },
            (0, 2) if gates.is_empty() => Ok(SliceKind::Swap(swaps[0], swaps[1])),
            (0, 2) => Err(QsimError::MalformedSlice("swap slice carries extra gates".into())),
            (0, k) => Err(QsimError::MalformedSlice(format!("{k} swap markers, expected 2"))),
            (c, 0) => Err(QsimError::MalformedSlice(format!("{c} controls in one slice"))),
            _ => Err(QsimError::MalformedSlice("control mixed with swap".into())),
        }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(QsimError::QubitCount(n))
    }
}

/// `f(n-1) ⊗ … ⊗ f(0)`: bottom wire leftmost.
fn kron_chain<T: Scalar>(n: usize, f: impl Fn(usize) -> Mat2<T>) -> Result<Operator<T>> {
    let mut acc = Operator::from_mat2(&f(n - 1));
    for w in (0..n - 1).rev() {
        acc = acc.tensor_mat2(&f(w))?;
    }
    Ok(acc)
}

fn projector<T: Scalar>(bit: usize) -> Mat2<T> {
    let z = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    if bit == 0 {
        [[one, z], [z, z]]
    } else {
        [[z, z], [z, one]]
    }
}

/// Full `2^n × 2^n` operator of one slice.
///
/// Plain slices are the tensor product of their gates. A controlled slice is
/// `P0(control) ⊗ I… + P1(control) ⊗ G(target) …` expanded across whatever wire
/// positions the control and target occupy. A swap slice is the permutation
/// exchanging the two marked wires.
pub fn slice_operator<T: Scalar>(slice: &Slice<T>, n_qubits: usize) -> Result<Operator<T>> {
    check_qubits(n_qubits)?;
    if slice.n_qubits() != n_qubits {
        return Err(QsimError::QubitMismatch { expected: n_qubits, got: slice.n_qubits() });
    }
    let id = Gate::<T>::I.matrix();
    match slice.kind()? {
        SliceKind::Plain => kron_chain(n_qubits, |w| match slice.slots[w] {
            Slot::Gate(g) => g.matrix(),
            _ => unreachable!("plain slice holds only gates"),
        }),
        SliceKind::Controlled { control, target, gate } => {
            let mut off = kron_chain(n_qubits, |w| if w == control { projector(0) } else { id })?;
            let gm = gate.matrix();
            let on = kron_chain(n_qubits, |w| {
                if w == control {
                    projector(1)
                } else if w == target {
                    gm
                } else {
                    id
                }
            })?;
            off.add_assign(&on);
            Ok(off)
        }
        SliceKind::Swap(a, b) => {
            let dim = 1usize << n_qubits;
            let mut m = Operator::zeros(dim)?;
            for i in 0..dim {
                let (ba, bb) = ((i >> a) & 1, (i >> b) & 1);
                let j = (i & !(1 << a) & !(1 << b)) | (ba << b) | (bb << a);
                m.set(j, i, Complex::new(T::one(), T::zero()));
            }
            Ok(m)
        }
    }
}

/// A gate program of at most 14 slices over 1..=4 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    slices: Vec<Slice<T>>,
}

impl<T: Scalar> Circuit<T> {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        Ok(Self { n_qubits, slices: Vec::new() })
    }

    pub fn from_slices(n_qubits: usize, slices: Vec<Slice<T>>) -> Result<Self> {
        let mut c = Self::new(n_qubits)?;
        for s in slices {
            c.push(s)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, slice: Slice<T>) -> Result<&mut Self> {
        if self.slices.len() == MAX_SLICES {
            return Err(QsimError::TooManySlices(MAX_SLICES + 1));
        }
        if slice.n_qubits() != self.n_qubits {
            return Err(QsimError::QubitMismatch { expected: self.n_qubits, got: slice.n_qubits() });
        }
        slice.kind()?;
        self.slices.push(slice);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn slices(&self) -> &[Slice<T>] {
        &self.slices
    }

    /// Parses the line-per-slice text format. `qubits` fixes the width when the
    /// text holds no slices; otherwise it must agree with the lines.
    pub fn parse(text: &str, qubits: Option<usize>) -> Result<Self> {
        let mut n = qubits;
        let mut slices = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let slots = line
                .split(',')
                .map(|tok| parse_slot::<T>(tok.trim()))
                .collect::<std::result::Result<Vec<_>, String>>()
                .map_err(|msg| QsimError::Parse { line: line_no, msg })?;
            match n {
                Some(k) if k != slots.len() => {
                    return Err(QsimError::Parse { line: line_no, msg: format!("{} slots, expected {k}", slots.len()) })
                }
                _ => n = Some(slots.len()),
            }
            let slice = Slice::new(slots);
            slice.kind().map_err(|e| QsimError::Parse { line: line_no, msg: e.to_string() })?;
            slices.push(slice);
        }
        let n = n.ok_or_else(|| QsimError::Parse { line: 0, msg: "empty circuit and no qubit count".into() })?;
        if slices.len() > MAX_SLICES {
            return Err(QsimError::TooManySlices(slices.len()));
        }
        Self::from_slices(n, slices)
    }
}

fn parse_slot<T: Scalar>(tok: &str) -> std::result::Result<Slot<T>, String> {
    let upper = tok.to_ascii_uppercase();
    let slot = match upper.as_str() {
        "I" => Slot::Gate(Gate::I),
        "X" => Slot::Gate(Gate::X),
        "Y" => Slot::Gate(Gate::Y),
        "Z" => Slot::Gate(Gate::Z),
        "H" => Slot::Gate(Gate::H),
        "S" => Slot::Gate(Gate::S),
        "T" => Slot::Gate(Gate::T),
        "C" => Slot::Control,
        "SW" => Slot::Swap,
        _ => {
            let inner = upper
                .strip_prefix("RX(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("unknown gate token `{tok}`"))?;
            let angle = f64::from_str(inner.trim()).map_err(|_| format!("bad angle in `{tok}`"))?;
            if !angle.is_finite() {
                return Err(format!("non-finite angle in `{tok}`"));
            }
            Slot::Gate(Gate::Rx(T::lit(angle)))
        }
    };
    Ok(slot)
}

impl<T: Scalar> fmt::Display for Circuit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.slices {
            let toks: Vec<String> = s.slots.iter().map(|t| t.to_string()).collect();
            writeln!(f, "{}", toks.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_errors() {
        let two_controls = Slice::<f64>::new(vec![Slot::Control, Slot::Control, Slot::Gate(Gate::X)]);
        assert!(matches!(slice_operator(&two_controls, 3), Err(QsimError::MalformedSlice(_))));
        let lone_control = Slice::<f64>::new(vec![Slot::Control, Slot::IDENTITY]);
        assert!(matches!(slice_operator(&lone_control, 2), Err(QsimError::MalformedSlice(_))));
        let one_swap = Slice::<f64>::new(vec![Slot::Swap, Slot::IDENTITY]);
        assert!(one_swap.kind().is_err());
        let mixed = Slice::<f64>::new(vec![Slot::Control, Slot::Swap, Slot::Swap]);
        assert!(mixed.kind().is_err());
        assert!(matches!(slice_operator(&Slice::<f64>::identity(2), 3), Err(QsimError::QubitMismatch { .. })));
        assert!(matches!(slice_operator(&Slice::<f64>::identity(5), 5), Err(QsimError::QubitCount(5))));
    }

    #[test]
    fn controlled_target_above_control() {
        // control on wire 1, X on wire 0: flips bit 0 when bit 1 is set
        let op = slice_operator(&Slice::<f64>::controlled(2, 1, 0, Gate::X), 2).unwrap();
        let expect = [0usize, 1, 3, 2];
        for (col, row) in expect.iter().enumerate() {
            assert!((op.get(*row, col).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn swap_permutes_wires() {
        let op = slice_operator(&Slice::<f64>::swap(3, 0, 2), 3).unwrap();
        // |001> (wire0 set) -> |100>
        assert_eq!(op.get(4, 1).re, 1.0);
        assert_eq!(op.get(2, 2).re, 1.0);
        assert!(op.is_unitary());
    }

    #[test]
    fn slice_limit() {
        let mut c = Circuit::<f64>::new(1).unwrap();
        for _ in 0..MAX_SLICES {
            c.push(Slice::single(1, 0, Gate::H)).unwrap();
        }
        assert_eq!(c.push(Slice::identity(1)).unwrap_err(), QsimError::TooManySlices(15));
    }

    #[test]
    fn text_round_trip() {
        let text = "H,RX(0.5),I\nC,X,I\nSW,I,SW\n";
        let c = Circuit::<f64>::parse(text, None).unwrap();
        assert_eq!(c.n_qubits(), 3);
        assert_eq!(c.to_string(), text);
        assert_eq!(Circuit::<f64>::parse(&c.to_string(), None).unwrap(), c);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = Circuit::<f64>::parse("H,I\n# note\nC,C\n", None).unwrap_err();
        assert!(matches!(err, QsimError::Parse { line: 3, .. }), "{err}");
        assert!(matches!(Circuit::<f64>::parse("H,I\nH\n", None), Err(QsimError::Parse { line: 2, .. })));
        assert!(Circuit::<f64>::parse("Q,I", None).is_err());
        assert!(Circuit::<f64>::parse("", None).is_err());
        assert_eq!(Circuit::<f64>::parse("", Some(2)).unwrap().slices().len(), 0);
    }
}
