//! Square assignment problem by the shortest augmenting path method with
//! dual potentials, O(n³).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimizes `Σ_i cost[i][assign[i]]` over permutations.
///
/// Returns the optimal total and `assign`, where row `i` is matched to column
/// `assign[i]`.
pub fn min_cost_assignment<T: Scalar>(cost: &[Vec<T>]) -> Result<(T, Vec<usize>)> {
    let n = cost.len();
    if n == 0 {
        return Err(Error::invalid("assignment needs a non-empty cost matrix"));
    }
    if cost.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("assignment cost matrix must be square"));
    }
    if cost.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::invalid("assignment costs must be finite"));
    }

    let inf = T::infinity();
    // 1-based indices; column 0 is the virtual start of each augmenting path
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] = u[row_of[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assign = vec![0usize; n];
    for j in 1..=n {
        assign[row_of[j] - 1] = j - 1;
    }
    // recompute from the matching rather than the duals to avoid drift
    let total = assign
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &j)| acc + cost[i][j]);
    Ok((total, assign))
}
