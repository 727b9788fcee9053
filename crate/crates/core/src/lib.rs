//! Sliced-Wasserstein RBF kernels for comparing sequences of embeddings.
//!
//! A sequence is treated as the uniform distribution over its vectors. The
//! unbiased sliced-Wasserstein RBF kernel averages `exp(-γ W_p^p)` over random
//! one-dimensional projections ([`usw_rbf_hat`]); appending a positional
//! encoding to each vector makes the score order-aware ([`temporal_score`]).
//! The crate also provides classical baselines, a candidate reranking rule,
//! statistical studies of the estimator, and the `swkernel` command-line tool.
//!
//! Numeric routines are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which the studies and CLI use.
//!
//! ```
//! use swkernel::{sample_projections, usw_rbf_hat, KernelConfig, Sequence};
//!
//! let x = Sequence::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
//! let y = Sequence::new(vec![vec![0.5, 0.5]]).unwrap();
//! let cfg = KernelConfig::default();
//! let proj = sample_projections(2, cfg.projections, cfg.seed).unwrap();
//! let k = usw_rbf_hat(&x, &y, &cfg, &proj).unwrap();
//! assert!(k > 0.0 && k <= 1.0);
//! ```

// `!(x > 0)` style checks are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cli;
mod error;
pub mod kernel;
pub mod ot1d;
pub mod positional;
pub mod projection;
pub mod rerank;
pub mod rng;
mod scalar;
pub mod sequence;
pub mod studies;
pub mod synth;

pub use baselines::{cosine_meanpool, dtw, exact_wasserstein, soft_dtw};
pub use error::{Error, Result};
pub use kernel::{gram, sw_hat, sw_rbf_hat, usw_rbf_hat, GramMatrix, KernelConfig};
pub use ot1d::wasserstein_1d;
pub use positional::{augment, pos_absolute, pos_rotary, temporal_score, PeMode, PositionalConfig};
pub use projection::{project_sequence, sample_projections, ProjectionSet};
pub use rerank::{rerank_cosine, rerank_usw, Candidate, CandidateSet, ScoreReport};
pub use scalar::Scalar;
pub use sequence::{EmbeddingSequence, OrderParameter};
pub use studies::{StudyConfig, StudyResult};
pub use synth::gen_synthetic;

pub type Sequence = EmbeddingSequence<f64>;
pub type Sequence32 = EmbeddingSequence<f32>;
pub type Projections = ProjectionSet<f64>;
pub type Projections32 = ProjectionSet<f32>;
pub type Config = KernelConfig<f64>;
pub type Config32 = KernelConfig<f32>;
pub type Positional = PositionalConfig<f64>;
pub type Order = OrderParameter<f64>;
