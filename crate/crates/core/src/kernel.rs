//! Sliced Wasserstein estimators and the RBF kernels built on them.
//!
//! Two kernels share the same per-projection costs `W_l = W_p^p(ψ_l#x, ψ_l#y)`:
//!
//! * [`sw_rbf_hat`] plugs the Monte Carlo sliced distance into the exponential,
//!   `exp(-γ · mean_l W_l)`. The exponential is taken after averaging, so this
//!   is a biased estimate of `exp(-γ · SW_p^p)`.
//! * [`usw_rbf_hat`] averages the exponentials, `mean_l exp(-γ W_l)`, which is an
//!   unbiased estimate of `E_ψ[exp(-γ W_p^p(ψ#x, ψ#y))]`. By convexity of `exp`
//!   it never falls below the plug-in value on the same projections.
//!
//! Averages are running means over projections in fixed order, so identical
//! per-projection values average to exactly that value.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::ot1d::{sort_in_place, wasserstein_1d_sorted};
use crate::projection::{dot, sample_projections, ProjectionSet};
use crate::scalar::Scalar;
use crate::sequence::{ensure_same_dim, EmbeddingSequence, OrderParameter};

/// Projection count used when none is given.
pub const DEFAULT_PROJECTIONS: usize = 50;
/// Bandwidth used when none is given.
pub const DEFAULT_GAMMA: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig<T> {
    pub gamma: T,
    pub p: OrderParameter<T>,
    pub projections: usize,
    pub seed: u64,
}

impl<T: Scalar> KernelConfig<T> {
    pub fn new(gamma: T, p: OrderParameter<T>, projections: usize, seed: u64) -> Result<Self> {
        let cfg = Self {
            gamma,
            p,
            projections,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
            return Err(Error::invalid(format!(
                "gamma must be finite and > 0, got {}",
                self.gamma
            )));
        }
        if self.projections == 0 {
            return Err(Error::invalid("projection count must be >= 1"));
        }
        OrderParameter::new(self.p.get()).map(|_| ())
    }

    /// The projection set this config describes for sequences of dimension `dim`.
    pub fn projection_set(&self, dim: usize) -> Result<ProjectionSet<T>> {
        sample_projections(dim, self.projections, self.seed)
    }
}

impl<T: Scalar> Default for KernelConfig<T> {
    fn default() -> Self {
        Self {
            gamma: T::of(DEFAULT_GAMMA),
            p: OrderParameter::two(),
            projections: DEFAULT_PROJECTIONS,
            seed: 0,
        }
    }
}

/// Projections of one sequence onto every direction of a set, each sorted.
#[derive(Debug, Clone)]
pub(crate) struct SortedProjections<T>(Vec<Vec<T>>);

impl<T: Scalar> SortedProjections<T> {
    pub(crate) fn new(seq: &EmbeddingSequence<T>, proj: &ProjectionSet<T>) -> Result<Self> {
        if proj.dim() != seq.dim() {
            return Err(Error::invalid(format!(
                "projection dimension {} differs from sequence dimension {}",
                proj.dim(),
                seq.dim()
            )));
        }
        Ok(Self(
            proj.directions()
                .iter()
                .map(|psi| {
                    let mut v: Vec<T> = seq.vectors().iter().map(|z| dot(z, psi)).collect();
                    sort_in_place(&mut v);
                    v
                })
                .collect(),
        ))
    }

    pub(crate) fn costs(&self, other: &Self, p: OrderParameter<T>) -> Vec<T> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| wasserstein_1d_sorted(a, b, p))
            .collect()
    }
}

/// Per-projection costs `W_p^p(ψ_l#x, ψ_l#y)` in projection order.
pub fn projected_costs<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    p: OrderParameter<T>,
    proj: &ProjectionSet<T>,
) -> Result<Vec<T>> {
    ensure_same_dim(x, y)?;
    let sx = SortedProjections::new(x, proj)?;
    let sy = SortedProjections::new(y, proj)?;
    Ok(sx.costs(&sy, p))
}

pub(crate) fn running_mean<T: Scalar>(values: impl IntoIterator<Item = T>) -> T {
    let mut mean = T::zero();
    for (k, v) in values.into_iter().enumerate() {
        mean = mean + (v - mean) / T::of_usize(k + 1);
    }
    mean
}

pub(crate) fn usw_from_costs<T: Scalar>(costs: &[T], gamma: T) -> T {
    running_mean(costs.iter().map(|&w| (-gamma * w).exp()))
}

/// Monte Carlo sliced Wasserstein `(1/L) Σ_l W_p^p(ψ_l#x, ψ_l#y)`.
pub fn sw_hat<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    p: OrderParameter<T>,
    proj: &ProjectionSet<T>,
) -> Result<T> {
    Ok(running_mean(projected_costs(x, y, p, proj)?))
}

/// Plug-in SW-RBF estimate `exp(-γ · sw_hat)`. Biased low; see module docs.
pub fn sw_rbf_hat<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    cfg: &KernelConfig<T>,
    proj: &ProjectionSet<T>,
) -> Result<T> {
    cfg.validate()?;
    Ok((-cfg.gamma * sw_hat(x, y, cfg.p, proj)?).exp())
}

/// Unbiased USW-RBF estimate `(1/L) Σ_l exp(-γ W_p^p(ψ_l#x, ψ_l#y))`.
pub fn usw_rbf_hat<T: Scalar>(
    x: &EmbeddingSequence<T>,
    y: &EmbeddingSequence<T>,
    cfg: &KernelConfig<T>,
    proj: &ProjectionSet<T>,
) -> Result<T> {
    cfg.validate()?;
    Ok(usw_from_costs(&projected_costs(x, y, cfg.p, proj)?, cfg.gamma))
}

/// Square kernel matrix with row/column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    pub entries: Vec<Vec<T>>,
    pub labels: Vec<String>,
}

impl<T: Scalar> GramMatrix<T> {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Eigenvalues of the symmetrized matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.size();
        let m = DMatrix::from_fn(n, n, |i, j| {
            0.5 * (self.entries[i][j].as_f64() + self.entries[j][i].as_f64())
        });
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_asymmetry(&self) -> T {
        let n = self.size();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[i][j] - self.entries[j][i]).abs());
            }
        }
        worst
    }
}

/// USW-RBF Gram matrix over `seqs` with one projection set shared by all pairs.
///
/// Labels default to the sequence indices.
pub fn gram<T: Scalar>(seqs: &[EmbeddingSequence<T>], cfg: &KernelConfig<T>) -> Result<GramMatrix<T>> {
    let labels = (0..seqs.len()).map(|i| i.to_string()).collect();
    gram_labeled(seqs, labels, cfg)
}

pub fn gram_labeled<T: Scalar>(
    seqs: &[EmbeddingSequence<T>],
    labels: Vec<String>,
    cfg: &KernelConfig<T>,
) -> Result<GramMatrix<T>> {
    cfg.validate()?;
    let first = seqs
        .first()
        .ok_or_else(|| Error::invalid("gram needs at least one sequence"))?;
    if labels.len() != seqs.len() {
        return Err(Error::invalid("one label per sequence required"));
    }
    for s in seqs {
        ensure_same_dim(first, s)?;
    }
    let proj = cfg.projection_set(first.dim())?;
    let sorted = seqs
        .iter()
        .map(|s| SortedProjections::new(s, &proj))
        .collect::<Result<Vec<_>>>()?;
    let n = seqs.len();
    let mut entries = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        entries[i][i] = T::one();
        for j in (i + 1)..n {
            let v = usw_from_costs(&sorted[i].costs(&sorted[j], cfg.p), cfg.gamma);
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    Ok(GramMatrix { entries, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: Vec<Vec<f64>>) -> EmbeddingSequence<f64> {
        EmbeddingSequence::new(v).unwrap()
    }

    fn cfg(gamma: f64, l: usize, seed: u64) -> KernelConfig<f64> {
        KernelConfig::new(gamma, OrderParameter::two(), l, seed).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::new(0.0, OrderParameter::<f64>::two(), 5, 0).is_err());
        assert!(KernelConfig::new(f64::NAN, OrderParameter::<f64>::two(), 5, 0).is_err());
        assert!(KernelConfig::new(1.0, OrderParameter::<f64>::two(), 0, 0).is_err());
        let d = KernelConfig::<f64>::default();
        assert_eq!(d.projections, 50);
        assert_eq!(d.gamma, 2.5);
    }

    #[test]
    fn identical_inputs() {
        let x = seq(vec![vec![0.1, 2.0, -1.0], vec![3.0, 0.0, 1.0]]);
        let c = cfg(1.0, 20, 3);
        let proj = c.projection_set(3).unwrap();
        assert_eq!(sw_hat(&x, &x, c.p, &proj).unwrap(), 0.0);
        assert_eq!(sw_rbf_hat(&x, &x, &c, &proj).unwrap(), 1.0);
        assert_eq!(usw_rbf_hat(&x, &x, &c, &proj).unwrap(), 1.0);
    }

    #[test]
    fn one_dimensional_closed_form() {
        let x = seq(vec![vec![0.0]]);
        let y = seq(vec![vec![3.0]]);
        for l in [1, 4, 17] {
            let c = cfg(1.0, l, l as u64);
            let proj = c.projection_set(1).unwrap();
            assert_eq!(sw_hat(&x, &y, c.p, &proj).unwrap(), 9.0);
            assert_eq!(sw_rbf_hat(&x, &y, &c, &proj).unwrap(), (-9.0f64).exp());
            assert_eq!(usw_rbf_hat(&x, &y, &c, &proj).unwrap(), (-9.0f64).exp());
        }
    }

    #[test]
    fn dimension_mismatch() {
        let x = seq(vec![vec![0.0, 1.0]]);
        let y = seq(vec![vec![0.0]]);
        let c = cfg(1.0, 4, 0);
        let p2 = c.projection_set(2).unwrap();
        assert!(usw_rbf_hat(&x, &y, &c, &p2).is_err());
        let p3 = c.projection_set(3).unwrap();
        assert!(usw_rbf_hat(&x, &x, &c, &p3).is_err());
    }

    // E_θ[f(cos²θ)] by the periodic trapezoid rule, which converges
    // geometrically for smooth periodic integrands.
    fn circle_average(f: impl Fn(f64) -> f64) -> f64 {
        let n = 4096;
        (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                f(t.cos().powi(2))
            })
            .sum::<f64>()
            / n as f64
    }

    fn mc_check(samples: &[f64], expected: f64) {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "mean {mean} expected {expected} se {se}"
        );
    }

    #[test]
    fn sliced_distance_of_unit_offset_in_plane() {
        let x = seq(vec![vec![0.0, 0.0]]);
        let y = seq(vec![vec![1.0, 0.0]]);
        let expected = circle_average(|c2| c2);
        assert!((expected - 0.5).abs() < 1e-12);
        let proj = sample_projections::<f64>(2, 4000, 5).unwrap();
        let costs = projected_costs(&x, &y, OrderParameter::two(), &proj).unwrap();
        mc_check(&costs, expected);
        let sw = sw_hat(&x, &y, OrderParameter::two(), &proj).unwrap();
        assert!((sw - running_mean(costs.iter().copied())).abs() == 0.0);
    }

    #[test]
    fn usw_of_unit_offset_in_plane() {
        let x = seq(vec![vec![0.0, 0.0]]);
        let y = seq(vec![vec![1.0, 0.0]]);
        let expected = circle_average(|c2| (-c2).exp());
        let proj = sample_projections::<f64>(2, 4000, 9).unwrap();
        let terms: Vec<f64> = projected_costs(&x, &y, OrderParameter::two(), &proj)
            .unwrap()
            .into_iter()
            .map(|w| (-w).exp())
            .collect();
        mc_check(&terms, expected);
        let c = cfg(1.0, 4000, 9);
        let v = usw_rbf_hat(&x, &y, &c, &proj).unwrap();
        assert!((v - expected).abs() < 0.01);
    }

    #[test]
    fn jensen_bound_on_fixed_pair() {
        let x = seq(vec![vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 0.5]]);
        let y = seq(vec![vec![1.0, -1.0, 0.0], vec![0.0, 0.0, 0.0], vec![2.0, 1.0, 1.0]]);
        let c = cfg(0.7, 64, 1);
        let proj = c.projection_set(3).unwrap();
        let u = usw_rbf_hat(&x, &y, &c, &proj).unwrap();
        let s = sw_rbf_hat(&x, &y, &c, &proj).unwrap();
        assert!(u > s && u <= 1.0 && s > 0.0);
    }

    #[test]
    fn gram_small_cases() {
        let a = seq(vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        let g = gram(std::slice::from_ref(&a), &cfg(1.0, 8, 0)).unwrap();
        assert_eq!(g.entries, vec![vec![1.0]]);
        assert!((g.min_eigenvalue() - 1.0).abs() < 1e-12);

        let g = gram(&[a.clone(), a], &cfg(1.0, 8, 0)).unwrap();
        assert_eq!(g.entries, vec![vec![1.0, 1.0], vec![1.0, 1.0]]);
        let ev = g.eigenvalues();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 2.0).abs() < 1e-12);

        assert!(gram::<f64>(&[], &cfg(1.0, 8, 0)).is_err());
    }

    #[test]
    fn gram_entries_match_pairwise_kernel() {
        let seqs = vec![
            seq(vec![vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 1.0]]),
            seq(vec![vec![2.0, 0.0, 1.0]]),
            seq(vec![vec![0.5, -1.0, 0.0], vec![0.0, 0.0, 3.0], vec![1.0, 2.0, 2.0]]),
        ];
        let c = cfg(0.5, 32, 4);
        let g = gram(&seqs, &c).unwrap();
        let proj = c.projection_set(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let direct = usw_rbf_hat(&seqs[i], &seqs[j], &c, &proj).unwrap();
                assert_eq!(g.entries[i][j], direct);
            }
        }
        assert_eq!(g.max_asymmetry(), 0.0);
    }

    #[test]
    fn f32_kernel() {
        let x = EmbeddingSequence::new(vec![vec![0.0f32, 1.0], vec![1.0, 0.0]]).unwrap();
        let y = EmbeddingSequence::new(vec![vec![0.5f32, 0.5]]).unwrap();
        let c = KernelConfig::<f32>::new(1.0, OrderParameter::two(), 16, 2).unwrap();
        let proj = c.projection_set(2).unwrap();
        let u = usw_rbf_hat(&x, &y, &c, &proj).unwrap();
        let u64v = {
            let x = seq(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
            let y = seq(vec![vec![0.5, 0.5]]);
            let c = cfg(1.0, 16, 2);
            usw_rbf_hat(&x, &y, &c, &c.projection_set(2).unwrap()).unwrap()
        };
        assert!((u as f64 - u64v).abs() < 1e-5);
    }
}
