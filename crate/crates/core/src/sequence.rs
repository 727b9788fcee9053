//! Embedding sequences and the transport order parameter.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ordered, non-empty list of equal-dimension finite vectors.
///
/// Kernels treat a sequence as the uniform empirical distribution over its
/// vectors; order only matters once positional encoding is appended.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSequence<T> {
    vectors: Vec<Vec<T>>,
    dim: usize,
}

impl<T: Scalar> EmbeddingSequence<T> {
    pub fn new(vectors: Vec<Vec<T>>) -> Result<Self> {
        let first = vectors
            .first()
            .ok_or_else(|| Error::invalid("sequence must contain at least one vector"))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::invalid("vectors must have dimension >= 1"));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::invalid(format!(
                    "vector {i} has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid(format!("vector {i} has a non-finite entry")));
            }
        }
        Ok(Self { vectors, dim })
    }

    /// Builds a one-dimensional sequence from scalars.
    pub fn from_scalars(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&v| vec![v]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<T>> {
        self.vectors
    }

    /// Arithmetic mean of the vectors.
    ///
    /// Each coordinate is summed in ascending order, so the result is exactly
    /// invariant to the order of the vectors.
    pub fn mean(&self) -> Vec<T> {
        let n = T::of_usize(self.len());
        let mut column = Vec::with_capacity(self.len());
        (0..self.dim)
            .map(|c| {
                column.clear();
                column.extend(self.vectors.iter().map(|v| v[c]));
                crate::ot1d::sort_in_place(&mut column);
                column.iter().fold(T::zero(), |acc, &x| acc + x) / n
            })
            .collect()
    }

    /// Reorders the vectors; `order[i]` is the source index of the new i-th vector.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::invalid("permutation length differs from sequence length"));
        }
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid("order is not a permutation"));
            }
        }
        Ok(Self {
            vectors: order.iter().map(|&i| self.vectors[i].clone()).collect(),
            dim: self.dim,
        })
    }

    pub fn reversed(&self) -> Self {
        let mut vectors = self.vectors.clone();
        vectors.reverse();
        Self { vectors, dim: self.dim }
    }
}

pub(crate) fn ensure_same_dim<T: Scalar>(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::invalid(format!(
            "sequence dimensions differ: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    Ok(())
}

/// Transport order `p >= 1`; costs are `|a - b|^p`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct OrderParameter<T>(T);

impl<T: Scalar> OrderParameter<T> {
    pub fn new(p: T) -> Result<Self> {
        if !(p >= T::one()) || !p.is_finite() {
            return Err(Error::invalid(format!("order p must be finite and >= 1, got {p}")));
        }
        Ok(Self(p))
    }

    pub fn two() -> Self {
        Self(T::of(2.0))
    }

    pub fn get(self) -> T {
        self.0
    }

    /// `|d|^p` with exact fast paths for p = 1 and p = 2.
    #[inline]
    pub(crate) fn cost(self, d: T) -> T {
        let a = d.abs();
        if self.0 == T::one() {
            a
        } else if self.0 == T::of(2.0) {
            a * a
        } else {
            a.powf(self.0)
        }
    }
}

impl<T: Scalar> Default for OrderParameter<T> {
    fn default() -> Self {
        Self::two()
    }
}
