//! Statistical studies of the USW-RBF estimator on synthetic random walks.
//!
//! * [`unbiasedness_study`]: the single-projection estimator averages to the
//!   kernel value.
//! * [`rate_study`]: RMSE against the kernel value shrinks like `L^{-1/2}`.
//! * [`psd_study`]: Gram matrices with shared projections are positive
//!   semidefinite.
//! * [`ablation_study`]: retrieval accuracy of kernel reranking over a grid of
//!   bandwidths and projection counts.
//!
//! The "true" kernel value is computed in closed form for `d = 1`, by adaptive
//! quadrature over the angle for `d = 2`, and otherwise by a `10^5`-projection
//! Monte Carlo run on a seed stream no replicate uses. Replicate seeds are
//! derived from `(seed, stream, index)`, so every study is a pure function of
//! its config.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{gram, projected_costs, usw_from_costs, KernelConfig, SortedProjections};
use crate::positional::{PeMode, PositionalConfig};
use crate::projection::{sample_projections, ProjectionSet};
use crate::rerank::{rerank_usw, Candidate, CandidateSet};
use crate::rng::derive_seed;
use crate::sequence::{EmbeddingSequence, OrderParameter};
use crate::synth::{gen_synthetic, jitter};

/// Projections used for the Monte Carlo reference in `d >= 3`.
pub const REFERENCE_PROJECTIONS: usize = 100_000;

const STREAM_PAIR: u64 = 1;
const STREAM_REFERENCE: u64 = 2;
const STREAM_REPLICATE: u64 = 3;
const STREAM_RATE: u64 = 4;
const STREAM_GRAM: u64 = 5;
const STREAM_ABLATION: u64 = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub replicates: usize,
    pub l_grid: Vec<usize>,
    pub gamma_grid: Vec<f64>,
    pub seed: u64,
    pub dim: usize,
    /// Sequence lengths `(N, M)` of the study pair; Gram and ablation studies
    /// draw lengths uniformly from `N..=M`.
    pub lengths: (usize, usize),
    /// Number of sequences in a Gram matrix.
    pub count: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            replicates: 200,
            l_grid: vec![10, 50, 100],
            gamma_grid: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
            seed: 0,
            dim: 8,
            lengths: (8, 10),
            count: 8,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates < 2 {
            return Err(Error::invalid("replicates must be >= 2"));
        }
        if self.l_grid.is_empty() || self.l_grid.contains(&0) {
            return Err(Error::invalid(
                "projection grid must be non-empty with positive entries",
            ));
        }
        if self.gamma_grid.is_empty() || self.gamma_grid.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
            return Err(Error::invalid("gamma grid must be non-empty with positive entries"));
        }
        if self.dim == 0 {
            return Err(Error::invalid("dimension must be >= 1"));
        }
        if self.lengths.0 == 0 || self.lengths.1 == 0 {
            return Err(Error::invalid("sequence lengths must be >= 1"));
        }
        if self.count == 0 {
            return Err(Error::invalid("count must be >= 1"));
        }
        Ok(())
    }

    fn length_range(&self) -> std::ops::RangeInclusive<usize> {
        let (a, b) = self.lengths;
        a.min(b)..=a.max(b)
    }
}

/// One cell of a study grid. Fields that do not apply are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyCell {
    pub projections: usize,
    pub gamma: f64,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub rmse: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub accuracy: Option<f64>,
}

impl StudyCell {
    fn new(projections: usize, gamma: f64) -> Self {
        Self {
            projections,
            gamma,
            mean: None,
            std: None,
            rmse: None,
            min_eigenvalue: None,
            accuracy: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub study: String,
    pub config: StudyConfig,
    pub reference: Option<f64>,
    pub standardized_deviation: Option<f64>,
    pub slope: Option<f64>,
    pub degenerate: bool,
    pub min_eigenvalue: Option<f64>,
    pub cells: Vec<StudyCell>,
}

impl StudyResult {
    fn new(study: &str, config: &StudyConfig) -> Self {
        Self {
            study: study.to_string(),
            config: config.clone(),
            reference: None,
            standardized_deviation: None,
            slope: None,
            degenerate: false,
            min_eigenvalue: None,
            cells: Vec::new(),
        }
    }
}

/// Mean and sample standard deviation by Welford's update.
///
/// Identical inputs give exactly that value as the mean and zero deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = if values.len() > 1 {
        m2 / (values.len() - 1) as f64
    } else {
        0.0
    };
    (mean, var.max(0.0).sqrt())
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// The synthetic pair a study runs on.
pub fn study_pair(cfg: &StudyConfig) -> Result<(EmbeddingSequence<f64>, EmbeddingSequence<f64>)> {
    let (n, m) = cfg.lengths;
    let x = gen_synthetic(derive_seed(cfg.seed, STREAM_PAIR, 0), 1, cfg.dim, n..=n)?.remove(0);
    let y = gen_synthetic(derive_seed(cfg.seed, STREAM_PAIR, 1), 1, cfg.dim, m..=m)?.remove(0);
    Ok((x, y))
}

/// `E_ψ[exp(-γ W_2^2(ψ#x, ψ#y))]`, the value the estimator targets.
pub fn reference_usw(x: &EmbeddingSequence<f64>, y: &EmbeddingSequence<f64>, gamma: f64, seed: u64) -> Result<f64> {
    let p = OrderParameter::two();
    match x.dim() {
        1 => {
            // S^0 = {±1} and both directions give the same cost
            let plus = ProjectionSet::from_directions(vec![vec![1.0]], seed)?;
            Ok((-gamma * projected_costs(x, y, p, &plus)?[0]).exp())
        }
        2 => {
            let sx = |t: f64| -> Result<f64> {
                let dir = ProjectionSet::from_directions(vec![vec![t.cos(), t.sin()]], seed)?;
                Ok((-gamma * projected_costs(x, y, p, &dir)?[0]).exp())
            };
            // ψ and -ψ give equal costs, so half the circle suffices
            let integral = adaptive_simpson(&sx, 0.0, std::f64::consts::PI, 1e-12, 40)?;
            Ok(integral / std::f64::consts::PI)
        }
        d => {
            let proj = sample_projections(d, REFERENCE_PROJECTIONS, derive_seed(seed, STREAM_REFERENCE, 0))?;
            Ok(usw_from_costs(&projected_costs(x, y, p, &proj)?, gamma))
        }
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> Result<f64>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm)?, f(rm)?);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
    }
    // split first so a symmetric integrand cannot fool the initial estimate
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let (fa, fm, fb) = (f(lo)?, f(0.5 * (lo + hi))?, f(hi)?);
        total += recurse(
            f,
            lo,
            hi,
            fa,
            fm,
            fb,
            simpson(fa, fm, fb, lo, hi),
            tol / pieces as f64,
            depth,
        )?;
    }
    Ok(total)
}

/// Single-projection estimates for a fixed pair across `replicates` seeds,
/// compared with the reference value.
pub fn unbiasedness_for_pair(
    x: &EmbeddingSequence<f64>,
    y: &EmbeddingSequence<f64>,
    gamma: f64,
    replicates: usize,
    seed: u64,
) -> Result<(f64, Vec<f64>)> {
    let reference = reference_usw(x, y, gamma, seed)?;
    let estimates = (0..replicates)
        .map(|r| {
            let proj = sample_projections(x.dim(), 1, derive_seed(seed, STREAM_REPLICATE, r as u64))?;
            Ok(usw_from_costs(
                &projected_costs(x, y, OrderParameter::two(), &proj)?,
                gamma,
            ))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((reference, estimates))
}

/// Standardized deviation `(mean - reference) / (std / √R)` of the
/// single-projection estimator. Uses the first bandwidth of the grid.
pub fn unbiasedness_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let (x, y) = study_pair(cfg)?;
    unbiasedness_on(&x, &y, cfg)
}

/// [`unbiasedness_study`] on an explicit pair.
pub fn unbiasedness_on(
    x: &EmbeddingSequence<f64>,
    y: &EmbeddingSequence<f64>,
    cfg: &StudyConfig,
) -> Result<StudyResult> {
    cfg.validate()?;
    let gamma = cfg.gamma_grid[0];
    let (reference, estimates) = unbiasedness_for_pair(x, y, gamma, cfg.replicates, cfg.seed)?;
    let (mean, std) = mean_std(&estimates);
    let mut out = StudyResult::new("unbiasedness", cfg);
    out.reference = Some(reference);
    if std > 0.0 {
        out.standardized_deviation = Some((mean - reference) / (std / (cfg.replicates as f64).sqrt()));
    } else if mean == reference {
        out.standardized_deviation = Some(0.0);
    } else {
        out.degenerate = true;
    }
    let mut cell = StudyCell::new(1, gamma);
    cell.mean = Some(mean);
    cell.std = Some(std);
    cell.rmse = Some(rmse(&estimates, reference));
    out.cells.push(cell);
    Ok(out)
}

fn rmse(estimates: &[f64], reference: f64) -> f64 {
    (estimates.iter().map(|e| (e - reference).powi(2)).sum::<f64>() / estimates.len() as f64).sqrt()
}

/// RMSE of the `L`-projection estimator for every `L` in the grid and the
/// least-squares slope of `log RMSE` against `log L`.
///
/// The grid needs at least 4 points spanning two decades. The slope is
/// `None` and `degenerate` is set when some RMSE is zero (for example in
/// `d = 1` or for identical inputs).
pub fn rate_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let (x, y) = study_pair(cfg)?;
    rate_on(&x, &y, cfg)
}

/// [`rate_study`] on an explicit pair.
pub fn rate_on(x: &EmbeddingSequence<f64>, y: &EmbeddingSequence<f64>, cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let lo = *cfg.l_grid.iter().min().expect("validated");
    let hi = *cfg.l_grid.iter().max().expect("validated");
    let mut distinct = cfg.l_grid.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 4 || (hi as f64) < 100.0 * lo as f64 {
        return Err(Error::invalid(
            "rate grid needs >= 4 distinct points spanning >= 2 decades",
        ));
    }
    let gamma = cfg.gamma_grid[0];
    let reference = reference_usw(x, y, gamma, cfg.seed)?;
    let sx = |proj: &ProjectionSet<f64>| SortedProjections::new(x, proj);
    let mut out = StudyResult::new("rate", cfg);
    out.reference = Some(reference);
    let (mut log_l, mut log_rmse) = (Vec::new(), Vec::new());
    for (li, &l) in cfg.l_grid.iter().enumerate() {
        let base = derive_seed(cfg.seed, STREAM_RATE, li as u64);
        let estimates = (0..cfg.replicates)
            .map(|r| {
                let proj = sample_projections(x.dim(), l, derive_seed(base, STREAM_REPLICATE, r as u64))?;
                let costs = sx(&proj)?.costs(&SortedProjections::new(y, &proj)?, OrderParameter::two());
                Ok(usw_from_costs(&costs, gamma))
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, std) = mean_std(&estimates);
        let e = rmse(&estimates, reference);
        let mut cell = StudyCell::new(l, gamma);
        cell.mean = Some(mean);
        cell.std = Some(std);
        cell.rmse = Some(e);
        out.cells.push(cell);
        if e > 0.0 {
            log_l.push((l as f64).ln());
            log_rmse.push(e.ln());
        } else {
            out.degenerate = true;
        }
    }
    if !out.degenerate {
        out.slope = least_squares_slope(&log_l, &log_rmse);
        out.degenerate = out.slope.is_none();
    }
    Ok(out)
}

/// Minimum eigenvalue of USW-RBF Gram matrices over `count` synthetic walks,
/// one cell per bandwidth, with `L = l_grid[0]` shared projections.
pub fn psd_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let seqs = gen_synthetic(
        derive_seed(cfg.seed, STREAM_PAIR, 2),
        cfg.count,
        cfg.dim,
        cfg.length_range(),
    )?;
    psd_on(&seqs, cfg)
}

/// [`psd_study`] on explicit sequences.
pub fn psd_on(seqs: &[EmbeddingSequence<f64>], cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let l = cfg.l_grid[0];
    let mut out = StudyResult::new("psd", cfg);
    let mut worst = f64::INFINITY;
    for &gamma in &cfg.gamma_grid {
        let kcfg = KernelConfig::new(gamma, OrderParameter::two(), l, derive_seed(cfg.seed, STREAM_GRAM, 0))?;
        let g = gram(seqs, &kcfg)?;
        let ev = g.min_eigenvalue();
        worst = worst.min(ev);
        let mut cell = StudyCell::new(l, gamma);
        cell.min_eigenvalue = Some(ev);
        out.cells.push(cell);
    }
    out.min_eigenvalue = Some(worst);
    Ok(out)
}

/// Number of candidates per ablation trial.
pub const ABLATION_CANDIDATES: usize = 6;
/// Noise added to the target to form the anchor in ablation trials.
pub const ABLATION_NOISE: f64 = 0.5;

/// Retrieval accuracy of kernel-only reranking (`α = 1`, rotary encoding) on
/// `replicates` synthetic trials, for every `(γ, L)` in the grids.
///
/// Each trial hides a target walk among random walks and the target's reversal;
/// the anchor is the target plus Gaussian noise.
pub fn ablation_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let trials = (0..cfg.replicates)
        .map(|t| ablation_trial(cfg, t as u64))
        .collect::<Result<Vec<_>>>()?;
    let mut out = StudyResult::new("ablation", cfg);
    for &gamma in &cfg.gamma_grid {
        for (li, &l) in cfg.l_grid.iter().enumerate() {
            let mut hits = 0usize;
            for (t, (set, target)) in trials.iter().enumerate() {
                let seed = derive_seed(cfg.seed, STREAM_ABLATION, (li * cfg.replicates + t) as u64);
                let kcfg = KernelConfig::new(gamma, OrderParameter::two(), l, seed)?;
                let pcfg = PositionalConfig::for_dim(cfg.dim);
                debug_assert_eq!(pcfg.mode, PeMode::Rotary);
                if rerank_usw(set, &kcfg, &pcfg)?.winner_index == *target {
                    hits += 1;
                }
            }
            let mut cell = StudyCell::new(l, gamma);
            cell.accuracy = Some(hits as f64 / trials.len() as f64);
            out.cells.push(cell);
        }
    }
    Ok(out)
}

fn ablation_trial(cfg: &StudyConfig, t: u64) -> Result<(CandidateSet<f64>, usize)> {
    let seed = derive_seed(cfg.seed, STREAM_ABLATION, u64::MAX - t);
    let mut walks = gen_synthetic::<f64>(seed, ABLATION_CANDIDATES - 1, cfg.dim, cfg.length_range())?;
    let target_seq = walks.remove(0);
    let anchor = jitter(&target_seq, ABLATION_NOISE, derive_seed(seed, STREAM_ABLATION, 0))?;
    let mut seqs = walks;
    seqs.push(target_seq.reversed());
    let target = (t as usize) % ABLATION_CANDIDATES;
    seqs.insert(target, target_seq);
    let candidates = seqs
        .into_iter()
        .enumerate()
        .map(|(i, sequence)| Candidate {
            id: format!("c{i}"),
            sequence,
            likelihood: 0.0,
        })
        .collect();
    Ok((CandidateSet::new(anchor, candidates, 1.0)?, target))
}
