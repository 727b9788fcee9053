//! Random directions on the unit sphere and projection of sequences onto them.

use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;
use crate::sequence::EmbeddingSequence;

/// `count` unit directions in `R^dim`, regenerated bit-for-bit from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet<T> {
    directions: Vec<Vec<T>>,
    dim: usize,
    seed: u64,
}

impl<T: Scalar> ProjectionSet<T> {
    /// Wraps explicit directions. Each must have unit norm.
    pub fn from_directions(directions: Vec<Vec<T>>, seed: u64) -> Result<Self> {
        let dim = directions
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("projection set needs at least one direction"))?;
        if dim == 0 {
            return Err(Error::invalid("directions must have dimension >= 1"));
        }
        let tol = T::epsilon().sqrt();
        for d in &directions {
            if d.len() != dim {
                return Err(Error::invalid("directions have mixed dimensions"));
            }
            if (norm(d) - T::one()).abs() > tol {
                return Err(Error::invalid("direction is not unit length"));
            }
        }
        Ok(Self { directions, dim, seed })
    }

    pub fn directions(&self) -> &[Vec<T>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws `count` directions uniformly on `S^{dim-1}`.
///
/// Each direction is a standard Gaussian vector scaled to unit length; a draw
/// with zero norm is discarded and redrawn.
pub fn sample_projections<T: Scalar>(dim: usize, count: usize, seed: u64) -> Result<ProjectionSet<T>> {
    if dim == 0 {
        return Err(Error::invalid("projection dimension must be >= 1"));
    }
    if count == 0 {
        return Err(Error::invalid("projection count must be >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    let mut directions = Vec::with_capacity(count);
    while directions.len() < count {
        let v: Vec<T> = (0..dim).map(|_| T::of(rng.sample::<f64, _>(StandardNormal))).collect();
        let n = norm(&v);
        if n == T::zero() || !n.is_finite() {
            continue;
        }
        directions.push(v.into_iter().map(|x| x / n).collect());
    }
    Ok(ProjectionSet { directions, dim, seed })
}

/// Inner products of every vector in `seq` with `direction`.
pub fn project_sequence<T: Scalar>(seq: &EmbeddingSequence<T>, direction: &[T]) -> Result<Vec<T>> {
    if direction.len() != seq.dim() {
        return Err(Error::invalid(format!(
            "direction has dimension {}, sequence has {}",
            direction.len(),
            seq.dim()
        )));
    }
    Ok(seq.vectors().iter().map(|v| dot(v, direction)).collect())
}

#[inline]
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Scalar>(v: &[T]) -> T {
    dot(v, v).sqrt()
}
