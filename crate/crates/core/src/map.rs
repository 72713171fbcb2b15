//! Small dense square matrices acting on a few two-level degrees of freedom.

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};
use num_traits::Zero;

/// Row-major complex square matrix. Dimension is `2^k` for a map on `k` degrees of freedom.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMap<T> {
    dim: usize,
    entries: Vec<C<T>>,
}

impl<T: Real> LocalMap<T> {
    pub fn new(dim: usize, entries: Vec<C<T>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| re(x)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = re(T::one());
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C::zero(); dim * dim],
        }
    }

    /// `|v⟩⟨v|`
    pub fn projector(v: &[C<T>]) -> Self {
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                entries.push(*a * b.conj());
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C<T>) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        debug_assert_eq!(v.len(), self.dim);
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(m, x)| *m * *x).sum())
            .collect()
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` acts on the more significant factor.
    pub fn kron(&self, rhs: &Self) -> Self {
        let n = self.dim * rhs.dim;
        let mut out = Self::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..rhs.dim {
                    for l in 0..rhs.dim {
                        out.set(i * rhs.dim + k, j * rhs.dim + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Largest entrywise deviation of `self† self` from the identity.
    pub fn unitarity_defect(&self) -> T {
        let gram = self
            .adjoint()
            .compose(self)
            .expect("square matrices of equal size");
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((gram.get(i, j) - re(target)).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }
}
