//! Synthetic sequences for studies and demos.

use std::ops::RangeInclusive;

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;
use crate::sequence::EmbeddingSequence;

/// `count` Gaussian random walks in `R^d` with unit step variance.
///
/// Each walk starts at the origin and its first vector is the first step, so
/// a walk of length 1 is a single standard normal draw. Lengths are uniform
/// over `lengths`.
pub fn gen_synthetic<T: Scalar>(
    seed: u64,
    count: usize,
    d: usize,
    lengths: RangeInclusive<usize>,
) -> Result<Vec<EmbeddingSequence<T>>> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    if d == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    if lengths.is_empty() || *lengths.start() == 0 {
        return Err(Error::invalid(format!(
            "length range {}..={} must be non-empty and start at >= 1",
            lengths.start(),
            lengths.end()
        )));
    }
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let len = rng.random_range(lengths.clone());
            let mut pos = vec![0.0f64; d];
            let vectors = (0..len)
                .map(|_| {
                    for p in pos.iter_mut() {
                        *p += rng.sample::<f64, _>(StandardNormal);
                    }
                    pos.iter().map(|&v| T::of(v)).collect()
                })
                .collect();
            EmbeddingSequence::new(vectors)
        })
        .collect()
}

/// Adds independent `N(0, sigma²)` noise to every entry.
pub fn jitter<T: Scalar>(seq: &EmbeddingSequence<T>, sigma: f64, seed: u64) -> Result<EmbeddingSequence<T>> {
    let mut rng = rng_from_seed(seed);
    let vectors = seq
        .vectors()
        .iter()
        .map(|v| {
            v.iter()
                .map(|&x| x + T::of(sigma * rng.sample::<f64, _>(StandardNormal)))
                .collect()
        })
        .collect();
    EmbeddingSequence::new(vectors)
}
