//! Independent oracles shared by the integration suites.
//!
//! Everything here is deliberately naive (enumeration, direct integration,
//! recomputation from primitives) and does not call the code paths it checks.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swkernel::Sequence;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_values(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn random_sequence(rng: &mut ChaCha8Rng, n: usize, d: usize, scale: f64) -> Sequence {
    Sequence::new((0..n).map(|_| random_values(rng, d, scale)).collect()).unwrap()
}

/// A random sequence whose length is uniform on `1..=max_len`.
pub fn random_sequence_upto(rng: &mut ChaCha8Rng, max_len: usize, d: usize, scale: f64) -> Sequence {
    let n = rng.random_range(1..=max_len);
    random_sequence(rng, n, d, scale)
}

/// Every permutation of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

/// `min_σ (1/N) Σ |a_i - b_σ(i)|^p` by enumeration.
pub fn brute_w1d(a: &[f64], b: &[f64], p: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    permutations(n)
        .iter()
        .map(|s| (0..n).map(|i| (a[i] - b[s[i]]).abs().powf(p)).sum::<f64>() / n as f64)
        .fold(f64::INFINITY, f64::min)
}

/// `∫_0^1 |Fa^-1(z) - Fb^-1(z)|^p dz` by exact integration of the step
/// quantile functions between floating breakpoints, evaluating each quantile
/// at the segment midpoint.
pub fn quantile_integral(a: &[f64], b: &[f64], p: f64) -> f64 {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let quantile = |s: &[f64], z: f64| -> f64 {
        let idx = ((z * s.len() as f64).ceil() as usize).clamp(1, s.len()) - 1;
        s[idx]
    };
    let mut grid: Vec<f64> = (0..=sa.len())
        .map(|i| i as f64 / sa.len() as f64)
        .chain((0..=sb.len()).map(|j| j as f64 / sb.len() as f64))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    grid.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (w[1] - w[0]) * (quantile(&sa, mid) - quantile(&sb, mid)).abs().powf(p)
        })
        .sum()
}

pub fn half_sq(x: &[f64], y: &[f64]) -> f64 {
    0.5 * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
}

pub fn sq(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
}

/// Every monotone alignment path from (0,0) to (n-1,m-1), as cell lists.
pub fn alignment_paths(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    fn walk(i: usize, j: usize, n: usize, m: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        cur.push((i, j));
        if i == n - 1 && j == m - 1 {
            out.push(cur.clone());
        } else {
            if i + 1 < n {
                walk(i + 1, j, n, m, cur, out);
            }
            if j + 1 < m {
                walk(i, j + 1, n, m, cur, out);
            }
            if i + 1 < n && j + 1 < m {
                walk(i + 1, j + 1, n, m, cur, out);
            }
        }
        cur.pop();
    }
    let mut out = Vec::new();
    walk(0, 0, n, m, &mut Vec::new(), &mut out);
    out
}

/// `⟨A, C⟩` for every alignment matrix `A`, with `C` the half squared cost.
pub fn alignment_costs(x: &Sequence, y: &Sequence) -> Vec<f64> {
    alignment_paths(x.len(), y.len())
        .iter()
        .map(|path| {
            path.iter()
                .fold(0.0, |acc, &(i, j)| half_sq(&x.vectors()[i], &y.vectors()[j]) + acc)
        })
        .collect()
}

pub fn brute_dtw(x: &Sequence, y: &Sequence) -> f64 {
    alignment_costs(x, y).into_iter().fold(f64::INFINITY, f64::min)
}

/// `-γ log Σ_A exp(-⟨A, C⟩/γ)` over all alignment matrices.
pub fn brute_soft_dtw(x: &Sequence, y: &Sequence, gamma: f64) -> f64 {
    let costs = alignment_costs(x, y);
    let m = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let s: f64 = costs.iter().map(|c| (-(c - m) / gamma).exp()).sum();
    m - gamma * s.ln()
}

/// `(1/N) min_σ Σ ‖x_i - y_σ(i)‖²` by enumeration.
pub fn brute_exact_w(x: &Sequence, y: &Sequence) -> f64 {
    let n = x.len();
    permutations(n)
        .iter()
        .map(|s| (0..n).map(|i| sq(&x.vectors()[i], &y.vectors()[s[i]])).sum::<f64>() / n as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Rotary-augmented score recomputed from scratch: normalized positions,
/// per-direction projection, enumerated 1D transport, plain average.
pub fn brute_force_score(anchor: &Sequence, cand: &Sequence, gamma: f64, dirs: &[Vec<f64>], k: usize) -> f64 {
    let augment = |s: &Sequence| -> Vec<Vec<f64>> {
        let n = s.len();
        s.vectors()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let pos = if n == 1 { 0.0 } else { i as f64 * 99.0 / (n - 1) as f64 };
                let mut out = v.clone();
                for f in 0..k / 2 {
                    let theta = 10_000f64.powf(-2.0 * f as f64 / k as f64);
                    out.push((pos * theta).cos());
                    out.push((pos * theta).sin());
                }
                out
            })
            .collect()
    };
    let (ax, ay) = (augment(anchor), augment(cand));
    let project = |pts: &[Vec<f64>], dir: &[f64]| -> Vec<f64> {
        pts.iter()
            .map(|p| p.iter().zip(dir).map(|(a, b)| a * b).sum())
            .collect()
    };
    let total: f64 = dirs
        .iter()
        .map(|dir| {
            let (a, b) = (project(&ax, dir), project(&ay, dir));
            (-gamma * quantile_integral(&a, &b, 2.0)).exp()
        })
        .sum();
    total / dirs.len() as f64
}
