use crate::error::{Error, Result};
use crate::projection::{dot, norm};
use crate::scalar::Scalar;
use crate::sequence::{ensure_same_dim, EmbeddingSequence};

/// Cosine similarity between the mean vectors of `x` and `y`.
///
/// Mean pooling discards order, so the value is invariant to permuting either
/// sequence.
pub fn cosine_meanpool<T: Scalar>(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>) -> Result<T> {
    ensure_same_dim(x, y)?;
    let (mx, my) = (x.mean(), y.mean());
    let (nx, ny) = (norm(&mx), norm(&my));
    if nx == T::zero() || ny == T::zero() {
        return Err(Error::degenerate("mean-pooled vector has zero norm"));
    }
    Ok((dot(&mx, &my) / (nx * ny)).max(-T::one()).min(T::one()))
}
