//! Dense square operator matrices of capacity 16×16 (four qubits).

use num_complex::Complex;

use crate::census;
use crate::error::{QsimError, Result};
use crate::gate::Mat2;
use crate::scalar::Scalar;

/// Largest supported operator dimension.
pub const MAX_DIM: usize = 16;

/// Row-major complex matrix of power-of-two dimension.
#[derive(Debug, PartialEq)]
pub struct Operator<T: Scalar> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> Operator<T> {
    fn alloc(dim: usize, data: Vec<Complex<T>>) -> Self {
        census::register(dim);
        Self { dim, data }
    }

    fn check_dim(dim: usize) -> Result<()> {
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QsimError::NotPowerOfTwo(dim));
        }
        if dim > MAX_DIM {
            return Err(QsimError::Capacity { dim, max: MAX_DIM });
        }
        Ok(())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::check_dim(dim)?;
        Ok(Self::alloc(dim, vec![Complex::new(T::zero(), T::zero()); dim * dim]))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Ok(m)
    }

    pub fn from_mat2(m: &Mat2<T>) -> Self {
        Self::alloc(2, vec![m[0][0], m[0][1], m[1][0], m[1][1]])
    }

    /// Builds an operator from row-major entries.
    pub fn from_rows(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        Self::check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(QsimError::InvalidState(format!("{} entries for a {dim}x{dim} operator", data.len())));
        }
        Ok(Self::alloc(dim, data))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex<T>) {
        self.data[row * self.dim + col] = v;
    }

    /// Kronecker product `self ⊗ rhs`.
    ///
    /// The left factor acts on the higher-indexed (lower-drawn) wires, so
    /// `I ⊗ H` applies `H` to wire 0, the least significant bit.
    pub fn tensor_product(&self, rhs: &Operator<T>) -> Result<Operator<T>> {
        let dim = self.dim * rhs.dim;
        if dim > MAX_DIM {
            return Err(QsimError::Capacity { dim, max: MAX_DIM });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..self.dim {
            for k in 0..rhs.dim {
                for j in 0..self.dim {
                    let a = self.get(i, j);
                    for l in 0..rhs.dim {
                        data.push(a * rhs.get(k, l));
                    }
                }
            }
        }
        Ok(Self::alloc(dim, data))
    }

    /// `self ⊗ m` for a single-qubit factor, without materialising `m` as an operator.
    pub(crate) fn tensor_mat2(&self, m: &Mat2<T>) -> Result<Operator<T>> {
        let dim = self.dim * 2;
        if dim > MAX_DIM {
            return Err(QsimError::Capacity { dim, max: MAX_DIM });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..self.dim {
            for row in m {
                for j in 0..self.dim {
                    let a = self.get(i, j);
                    data.push(a * row[0]);
                    data.push(a * row[1]);
                }
            }
        }
        Ok(Self::alloc(dim, data))
    }

    pub(crate) fn add_assign(&mut self, rhs: &Operator<T>) {
        debug_assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += *b;
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.dim, "vector length must match operator dimension");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, x)| acc + a * x))
            .collect()
    }

    /// Largest entry-wise deviation of `U·U†` from the identity.
    pub fn unitarity_error(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    acc += self.get(i, k) * self.get(j, k).conj();
                }
                if i == j {
                    acc -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() <= T::tolerance()
    }
}

impl<T: Scalar> Clone for Operator<T> {
    fn clone(&self) -> Self {
        Self::alloc(self.dim, self.data.clone())
    }
}

impl<T: Scalar> Drop for Operator<T> {
    fn drop(&mut self) {
        census::unregister(self.dim);
    }
}

/// Kronecker product of two operators; see [`Operator::tensor_product`].
pub fn tensor_product<T: Scalar>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    a.tensor_product(b)
}
