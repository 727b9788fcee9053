//! Candidate selection by likelihood plus sequence similarity.
//!
//! Two rules are provided:
//!
//! * [`rerank_usw`]: `(1 - α)·likelihood + α·temporal_score(anchor, candidate)`
//! * [`rerank_cosine`]: `likelihood + cosine_meanpool(anchor, candidate)`
//!
//! `likelihood` is an opaque score supplied by the caller. Candidates of
//! different lengths are only comparable when it is length-normalized (for
//! example a mean token log-probability); the rules do not rescale it.
//!
//! The winner is the first candidate, by index, with the largest combined score.

use serde::{Deserialize, Serialize};

use crate::baselines::cosine_meanpool;
use crate::error::{Error, Result};
use crate::kernel::KernelConfig;
use crate::positional::{scored_dim, temporal_score_with, PositionalConfig};
use crate::scalar::Scalar;
use crate::sequence::{ensure_same_dim, EmbeddingSequence};

pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    pub id: String,
    pub sequence: EmbeddingSequence<T>,
    pub likelihood: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet<T> {
    anchor: EmbeddingSequence<T>,
    candidates: Vec<Candidate<T>>,
    alpha: T,
}

impl<T: Scalar> CandidateSet<T> {
    pub fn new(anchor: EmbeddingSequence<T>, candidates: Vec<Candidate<T>>, alpha: T) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::invalid("candidate set is empty"));
        }
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        for (i, c) in candidates.iter().enumerate() {
            ensure_same_dim(&anchor, &c.sequence)?;
            if !c.likelihood.is_finite() {
                return Err(Error::invalid(format!(
                    "candidate {:?} has a non-finite likelihood",
                    c.id
                )));
            }
            if candidates[..i].iter().any(|o| o.id == c.id) {
                return Err(Error::invalid(format!("duplicate candidate id {:?}", c.id)));
            }
        }
        Ok(Self {
            anchor,
            candidates,
            alpha,
        })
    }

    pub fn anchor(&self) -> &EmbeddingSequence<T> {
        &self.anchor
    }

    pub fn candidates(&self) -> &[Candidate<T>] {
        &self.candidates
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn with_alpha(mut self, alpha: T) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        self.alpha = alpha;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub id: String,
    pub likelihood: f64,
    pub kernel_score: f64,
    pub combined: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub rule: String,
    pub alpha: f64,
    pub candidates: Vec<CandidateScore>,
    pub winner_index: usize,
    pub winner_id: String,
}

/// Index of the first maximum.
pub fn first_argmax<T: PartialOrd + Copy>(values: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(b) if !(v > values[b]) => {}
            _ => best = Some(i),
        }
    }
    best
}

fn assemble<T: Scalar>(rule: &str, set: &CandidateSet<T>, kernel: Vec<T>, combined: Vec<T>) -> ScoreReport {
    let winner = first_argmax(&combined).expect("candidate set is non-empty");
    ScoreReport {
        rule: rule.to_string(),
        alpha: set.alpha.as_f64(),
        candidates: set
            .candidates
            .iter()
            .zip(kernel.iter().zip(&combined))
            .map(|(c, (&k, &s))| CandidateScore {
                id: c.id.clone(),
                likelihood: c.likelihood.as_f64(),
                kernel_score: k.as_f64(),
                combined: s.as_f64(),
            })
            .collect(),
        winner_index: winner,
        winner_id: set.candidates[winner].id.clone(),
    }
}

/// Kernel scores of every candidate against the anchor, one shared projection set.
pub fn temporal_scores<T: Scalar>(
    set: &CandidateSet<T>,
    kcfg: &KernelConfig<T>,
    pcfg: &PositionalConfig<T>,
) -> Result<Vec<T>> {
    kcfg.validate()?;
    pcfg.validate()?;
    let proj = kcfg.projection_set(scored_dim(set.anchor.dim(), pcfg))?;
    set.candidates
        .iter()
        .map(|c| temporal_score_with(&set.anchor, &c.sequence, kcfg, pcfg, &proj))
        .collect()
}

/// Picks the candidate maximizing `(1 - α)·likelihood + α·temporal_score`.
pub fn rerank_usw<T: Scalar>(
    set: &CandidateSet<T>,
    kcfg: &KernelConfig<T>,
    pcfg: &PositionalConfig<T>,
) -> Result<ScoreReport> {
    let kernel = temporal_scores(set, kcfg, pcfg)?;
    let a = set.alpha;
    let combined = set
        .candidates
        .iter()
        .zip(&kernel)
        .map(|(c, &k)| (T::one() - a) * c.likelihood + a * k)
        .collect();
    Ok(assemble("usw", set, kernel, combined))
}

/// Picks the candidate maximizing `likelihood + cosine_meanpool`; `α` is not used.
pub fn rerank_cosine<T: Scalar>(set: &CandidateSet<T>) -> Result<ScoreReport> {
    let kernel = set
        .candidates
        .iter()
        .map(|c| cosine_meanpool(&set.anchor, &c.sequence))
        .collect::<Result<Vec<T>>>()?;
    let combined = set
        .candidates
        .iter()
        .zip(&kernel)
        .map(|(c, &k)| c.likelihood + k)
        .collect();
    Ok(assemble("cosine", set, kernel, combined))
}
