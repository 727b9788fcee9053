//! Positional augmentation and the temporal-similarity score.
//!
//! Each vector `z^n` of a sequence becomes `concat(z^n, β·pos(n))`, so the
//! sliced transport cost sees where a vector sits in the sequence as well as
//! what it is. Projecting an augmented vector onto `ψ = concat(ψ1, ψ2)` splits
//! into a feature part `ψ1·z` and a position part `ψ2·pos`, and the per-pair
//! squared difference expands into `K1² + 2·K1·K2 + K2²`
//! (see [`decompose_projection`]).
//!
//! Position indices are 1-based; position `n` is fed to the encoders as
//! `n - 1`, so the first vector always sits at angle zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{usw_rbf_hat, KernelConfig};
use crate::ot1d::wasserstein_1d;
use crate::projection::{dot, ProjectionSet};
use crate::scalar::Scalar;
use crate::sequence::{ensure_same_dim, EmbeddingSequence, OrderParameter};

/// Position span that normalized positions are stretched onto.
pub const NORMALIZED_SPAN: usize = 100;
pub const DEFAULT_BASE: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeMode {
    None,
    Absolute,
    Rotary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionalConfig<T> {
    pub mode: PeMode,
    /// Encoding width; must be even.
    pub k: usize,
    /// Multiplier on the encoding block.
    pub beta: T,
    pub base: T,
    /// Map positions of every sequence onto `0..=NORMALIZED_SPAN-1`.
    pub normalize_positions: bool,
}

impl<T: Scalar> PositionalConfig<T> {
    /// Defaults for embeddings of dimension `d`: rotary, `k = default_k(d)`,
    /// `beta = 1`, base 10000, normalized positions.
    pub fn for_dim(d: usize) -> Self {
        Self {
            mode: PeMode::Rotary,
            k: default_k(d),
            beta: T::one(),
            base: T::of(DEFAULT_BASE),
            normalize_positions: true,
        }
    }

    pub fn none() -> Self {
        Self {
            mode: PeMode::None,
            ..Self::for_dim(2)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == PeMode::None {
            return Ok(());
        }
        check_k(self.k)?;
        if !(self.beta >= T::zero()) || !self.beta.is_finite() {
            return Err(Error::invalid("beta must be finite and >= 0"));
        }
        if !(self.base > T::zero()) || !self.base.is_finite() {
            return Err(Error::invalid("base must be finite and > 0"));
        }
        Ok(())
    }

    /// Encoder input for the 1-based position `n` in a sequence of length `len`.
    fn position(&self, n: usize, len: usize) -> T {
        let raw = T::of_usize(n - 1);
        if !self.normalize_positions {
            return raw;
        }
        if len == 1 {
            return T::zero();
        }
        raw * T::of_usize(NORMALIZED_SPAN - 1) / T::of_usize(len - 1)
    }

    fn encode(&self, position: T) -> Vec<T> {
        match self.mode {
            PeMode::Absolute => absolute_at(position, self.k, self.base),
            PeMode::Rotary => rotary_at(position, self.k, self.base),
            PeMode::None => Vec::new(),
        }
    }
}

/// `min(d, 64)` rounded down to even, at least 2.
pub fn default_k(d: usize) -> usize {
    (d.min(64) & !1).max(2)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "encoding width k must be positive and even, got {k}"
        )));
    }
    Ok(())
}

fn frequency<T: Scalar>(i: usize, k: usize, base: T) -> T {
    base.powf(-T::of_usize(2 * i) / T::of_usize(k))
}

/// Sinusoidal encoding: `[sin(n·θ_i), cos(n·θ_i)]` pairs with `θ_i = base^{-2i/k}`.
pub fn pos_absolute<T: Scalar>(n: usize, k: usize, base: T) -> Result<Vec<T>> {
    check_k(k)?;
    Ok(absolute_at(T::of_usize(n), k, base))
}

/// Rotary encoding as a standalone vector: the rotation for position `n`
/// applied to the base vector `(1, 0, 1, 0, …)`, giving `[cos(n·θ_i), sin(n·θ_i)]`
/// pairs. Every pair has unit norm, so `‖pos(n)‖² = k/2` for all `n`.
pub fn pos_rotary<T: Scalar>(n: usize, k: usize, base: T) -> Result<Vec<T>> {
    check_k(k)?;
    Ok(rotary_at(T::of_usize(n), k, base))
}

fn absolute_at<T: Scalar>(position: T, k: usize, base: T) -> Vec<T> {
    (0..k / 2)
        .flat_map(|i| {
            let a = position * frequency(i, k, base);
            [a.sin(), a.cos()]
        })
        .collect()
}

fn rotary_at<T: Scalar>(position: T, k: usize, base: T) -> Vec<T> {
    (0..k / 2)
        .flat_map(|i| {
            let a = position * frequency(i, k, base);
            [a.cos(), a.sin()]
        })
        .collect()
}

/// `β·pos(n)` for every position of a sequence of length `len`.
pub fn position_block<T: Scalar>(len: usize, cfg: &PositionalConfig<T>) -> Result<Vec<Vec<T>>> {
    if cfg.mode == PeMode::None {
        return Err(Error::invalid("positional mode is none"));
    }
    cfg.validate()?;
    Ok((1..=len)
        .map(|n| {
            cfg.encode(cfg.position(n, len))
                .into_iter()
                .map(|v| cfg.beta * v)
                .collect()
        })
        .collect())
}

/// Appends `β·pos(n)` to every vector. Fails when the mode is `none`.
pub fn augment<T: Scalar>(seq: &EmbeddingSequence<T>, cfg: &PositionalConfig<T>) -> Result<EmbeddingSequence<T>> {
    let block = position_block(seq.len(), cfg)?;
    let vectors = seq
        .vectors()
        .iter()
        .zip(block)
        .map(|(z, pe)| z.iter().copied().chain(pe).collect())
        .collect();
    EmbeddingSequence::new(vectors)
}

/// Dimension of the vectors the score projects: `d`, or `d + k` with encoding.
pub fn scored_dim<T: Scalar>(d: usize, cfg: &PositionalConfig<T>) -> usize {
    match cfg.mode {
        PeMode::None => d,
        _ => d + cfg.k,
    }
}

/// Temporal-similarity score: USW-RBF with `p = 2` on position-augmented sequences.
///
/// The projection set is drawn from `kcfg.seed` in dimension `d + k`
/// (or `d` when the mode is `none`). `kcfg.p` is ignored.
pub fn temporal_score<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    kcfg: &KernelConfig<T>,
    pcfg: &PositionalConfig<T>,
) -> Result<T> {
    ensure_same_dim(x, y)?;
    let proj = kcfg.projection_set(scored_dim(x.dim(), pcfg))?;
    temporal_score_with(x, y, kcfg, pcfg, &proj)
}

/// [`temporal_score`] with a caller-supplied projection set.
pub fn temporal_score_with<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    kcfg: &KernelConfig<T>,
    pcfg: &PositionalConfig<T>,
    proj: &ProjectionSet<T>,
) -> Result<T> {
    ensure_same_dim(x, y)?;
    pcfg.validate()?;
    let kcfg = KernelConfig {
        p: OrderParameter::two(),
        ..*kcfg
    };
    match pcfg.mode {
        PeMode::None => usw_rbf_hat(x, y, &kcfg, proj),
        _ => usw_rbf_hat(&augment(x, pcfg)?, &augment(y, pcfg)?, &kcfg, proj),
    }
}

/// Per-projection split of the augmented squared transport cost.
///
/// With `a_i = ψ·φ_x^i`, `b_i = ψ·φ_y^i` and the sorting permutations `σ1`, `σ2`,
/// `K1_i = ψ1·z_x^{σ1(i)} - ψ1·z_y^{σ2(i)}` and
/// `K2_i = ψ2·β·pos(σ1(i)) - ψ2·β·pos(σ2(i))`. Sums carry the `1/N` weight of the
/// empirical measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionDecomposition<T> {
    /// `(1/N) Σ K1²`
    pub feature: T,
    /// `(1/N) Σ 2·K1·K2`
    pub cross: T,
    /// `(1/N) Σ K2²`
    pub temporal: T,
}

impl<T: Scalar> ProjectionDecomposition<T> {
    pub fn cost(&self) -> T {
        self.feature + self.cross + self.temporal
    }

    pub fn kernel_term(&self, gamma: T) -> T {
        (-gamma * self.cost()).exp()
    }
}

/// Splits the augmented cost along one direction `ψ` of dimension `d + k`.
/// Requires equal lengths and a positional mode other than `none`.
pub fn decompose_projection<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    pcfg: &PositionalConfig<T>,
    psi: &[T],
) -> Result<ProjectionDecomposition<T>> {
    ensure_same_dim(x, y)?;
    if x.len() != y.len() {
        return Err(Error::invalid("decomposition requires sequences of equal length"));
    }
    let d = x.dim();
    if psi.len() != d + pcfg.k {
        return Err(Error::invalid("direction must have dimension d + k"));
    }
    let (psi1, psi2) = psi.split_at(d);
    let px = position_block(x.len(), pcfg)?;
    let py = position_block(y.len(), pcfg)?;

    let feat_x: Vec<T> = x.vectors().iter().map(|z| dot(z, psi1)).collect();
    let feat_y: Vec<T> = y.vectors().iter().map(|z| dot(z, psi1)).collect();
    let time_x: Vec<T> = px.iter().map(|p| dot(p, psi2)).collect();
    let time_y: Vec<T> = py.iter().map(|p| dot(p, psi2)).collect();

    let order = |feat: &[T], time: &[T]| -> Vec<usize> {
        let full: Vec<T> = feat.iter().zip(time).map(|(&f, &t)| f + t).collect();
        let mut idx: Vec<usize> = (0..full.len()).collect();
        idx.sort_by(|&i, &j| full[i].partial_cmp(&full[j]).expect("finite projections"));
        idx
    };
    let s1 = order(&feat_x, &time_x);
    let s2 = order(&feat_y, &time_y);

    let (mut feature, mut cross, mut temporal) = (T::zero(), T::zero(), T::zero());
    for (&i, &j) in s1.iter().zip(&s2) {
        let k1 = feat_x[i] - feat_y[j];
        let k2 = time_x[i] - time_y[j];
        feature = feature + k1 * k1;
        cross = cross + T::of(2.0) * k1 * k2;
        temporal = temporal + k2 * k2;
    }
    let n = T::of_usize(x.len());
    Ok(ProjectionDecomposition {
        feature: feature / n,
        cross: cross / n,
        temporal: temporal / n,
    })
}

/// Direct per-projection cost on augmented vectors, for comparison with
/// [`decompose_projection`].
pub fn augmented_projection_cost<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    pcfg: &PositionalConfig<T>,
    psi: &[T],
) -> Result<T> {
    let ax = augment(x, pcfg)?;
    let ay = augment(y, pcfg)?;
    let a = crate::projection::project_sequence(&ax, psi)?;
    let b = crate::projection::project_sequence(&ay, psi)?;
    wasserstein_1d(&a, &b, OrderParameter::two())
}
