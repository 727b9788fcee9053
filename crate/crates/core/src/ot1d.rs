//! Closed-form Wasserstein cost between one-dimensional empirical distributions.
//!
//! For uniform empirical measures over `a` (N atoms) and `b` (M atoms) the
//! cost is the integral over `z in [0, 1]` of `|Fa^-1(z) - Fb^-1(z)|^p`. Both
//! quantile functions are step functions, so the integral is an exact sum over
//! the merged breakpoint grid `{i/N} ∪ {j/M}`. Breakpoints are tracked as
//! integers over the common denominator `N*M` and the weighted terms are summed
//! in ascending order, which makes the result exactly invariant under swapping
//! the arguments or negating both.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::OrderParameter;

/// `W_p^p` between the uniform empirical distributions over `a` and `b`.
///
/// When `a.len() == b.len()` this is `(1/N) Σ |a_(i) - b_(i)|^p` over sorted order.
pub fn wasserstein_1d<T: Scalar>(a: &[T], b: &[T], p: OrderParameter<T>) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("wasserstein_1d needs non-empty inputs"));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::invalid("wasserstein_1d inputs must be finite"));
    }
    Ok(wasserstein_1d_sorted(&sorted(a), &sorted(b), p))
}

/// Stable ascending sort; equal values keep their original index order.
pub(crate) fn sorted<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut s = v.to_vec();
    sort_in_place(&mut s);
    s
}

pub(crate) fn sort_in_place<T: Scalar>(v: &mut [T]) {
    v.sort_by(|x, y| x.partial_cmp(y).expect("finite values are totally ordered"));
}

/// Same as [`wasserstein_1d`] for inputs already sorted ascending and non-empty.
pub(crate) fn wasserstein_1d_sorted<T: Scalar>(a: &[T], b: &[T], p: OrderParameter<T>) -> T {
    let (n, m) = (a.len(), b.len());
    let mut terms: Vec<T> = Vec::with_capacity(n + m);
    // each atom of `a` holds m units of mass, each atom of `b` holds n
    let (mut i, mut j) = (0usize, 0usize);
    let (mut left_a, mut left_b) = (m, n);
    while i < n && j < m {
        let seg = left_a.min(left_b);
        terms.push(T::of_usize(seg) * p.cost(a[i] - b[j]));
        left_a -= seg;
        left_b -= seg;
        if left_a == 0 {
            i += 1;
            left_a = m;
        }
        if left_b == 0 {
            j += 1;
            left_b = n;
        }
    }
    sort_in_place(&mut terms);
    let total = terms.into_iter().fold(T::zero(), |acc, t| acc + t);
    total / (T::of_usize(n) * T::of_usize(m))
}
