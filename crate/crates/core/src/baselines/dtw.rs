//! Dynamic time warping and its soft-min relaxation.
//!
//! Both use the half squared Euclidean cost `c(i, j) = ½‖x_i - y_j‖²` and the
//! moves down, right and diagonal, with `r(1,1) = c(1,1)`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::{ensure_same_dim, EmbeddingSequence};

/// Dense N×M pairwise cost table.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    /// `scale · ‖x_i - y_j‖²` for every pair.
    pub fn squared_euclidean(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>, scale: T) -> Result<Self> {
        ensure_same_dim(x, y)?;
        let (rows, cols) = (x.len(), y.len());
        let mut entries = Vec::with_capacity(rows * cols);
        for a in x.vectors() {
            for b in y.vectors() {
                let sq = a.iter().zip(b).fold(T::zero(), |acc, (&u, &v)| acc + (u - v) * (u - v));
                entries.push(scale * sq);
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// The DTW cost `½‖x_i - y_j‖²`.
    pub fn half_squared(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>) -> Result<Self> {
        Self::squared_euclidean(x, y, T::of(0.5))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.cols + j]
    }
}

/// Minimum total cost over monotone alignments of `x` and `y`.
pub fn dtw<T: Scalar>(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>) -> Result<T> {
    let c = CostMatrix::half_squared(x, y)?;
    Ok(accumulate(&c, |a, b, d| a.min(b).min(d)))
}

/// Soft-DTW with smoothing `gamma_s > 0`: the min of [`dtw`] replaced by
/// `-γ log Σ exp(-v/γ)`, computed after subtracting the smallest argument.
pub fn soft_dtw<T: Scalar>(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>, gamma_s: T) -> Result<T> {
    if !(gamma_s > T::zero()) || !gamma_s.is_finite() {
        return Err(Error::invalid(format!("soft-DTW smoothing must be > 0, got {gamma_s}")));
    }
    let c = CostMatrix::half_squared(x, y)?;
    Ok(accumulate(&c, |a, b, d| softmin3(a, b, d, gamma_s)))
}

fn softmin3<T: Scalar>(a: T, b: T, c: T, gamma: T) -> T {
    let m = a.min(b).min(c);
    if m.is_infinite() {
        return m;
    }
    let s = (-(a - m) / gamma).exp() + (-(b - m) / gamma).exp() + (-(c - m) / gamma).exp();
    m - gamma * s.ln()
}

fn accumulate<T: Scalar>(c: &CostMatrix<T>, combine: impl Fn(T, T, T) -> T) -> T {
    let (n, m) = (c.rows, c.cols);
    let inf = T::infinity();
    // r has a border row and column of +inf; r[0][0] = 0 so r(1,1) = c(1,1)
    let w = m + 1;
    let mut r = vec![inf; (n + 1) * w];
    r[0] = T::zero();
    for i in 1..=n {
        for j in 1..=m {
            let best = combine(r[(i - 1) * w + j], r[i * w + j - 1], r[(i - 1) * w + j - 1]);
            r[i * w + j] = c.get(i - 1, j - 1) + best;
        }
    }
    r[n * w + m]
}
