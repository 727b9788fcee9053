use crate::baselines::{min_cost_assignment, min_cost_transport, CostMatrix};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::sequence::EmbeddingSequence;

/// Exact squared-Euclidean Wasserstein cost between the uniform empirical
/// measures over `x` and `y`.
///
/// Equal lengths reduce to an assignment problem, `(1/N)·min_σ Σ ‖x_i - y_σ(i)‖²`.
/// Unequal lengths are solved as a min-cost flow with row masses `1/N` and
/// column masses `1/M`.
pub fn exact_wasserstein<T: Scalar>(x: &EmbeddingSequence<T>, y: &EmbeddingSequence<T>) -> Result<T> {
    let c = CostMatrix::squared_euclidean(x, y, T::one())?;
    let rows: Vec<Vec<T>> = (0..c.rows)
        .map(|i| (0..c.cols).map(|j| c.get(i, j)).collect())
        .collect();
    if c.rows == c.cols {
        let (total, _) = min_cost_assignment(&rows)?;
        Ok(total / T::of_usize(c.rows))
    } else {
        min_cost_transport(&rows)
    }
}
