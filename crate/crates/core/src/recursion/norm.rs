//! Spectral norms of nested truncations and a growth heuristic over them.

use serde::{Deserialize, Serialize};

use crate::banded::{ColumnBandMatrix, Operator};
use crate::linalg::norm2;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    DenseSvd,
    PowerIteration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub truncation: usize,
    pub value: f64,
    pub method: NormMethod,
    /// Power iterations used; zero for the dense method.
    pub iterations: usize,
    pub converged: bool,
    /// `(N, value)` for this and every smaller truncation in the same run.
    pub growth_sequence: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    /// Largest truncation handled by a dense SVD.
    pub dense_max: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            dense_max: 512,
            tol: 1e-8,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundednessVerdict {
    LikelyBounded,
    LikelyUnbounded,
    Inconclusive,
}

/// Relative growth per doubling of the truncation size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthThresholds {
    /// Below this the sequence is called a plateau.
    pub plateau: f64,
    /// At or above this it is called unbounded.
    pub growth: f64,
}

impl Default for GrowthThresholds {
    fn default() -> Self {
        GrowthThresholds {
            plateau: 1e-3,
            growth: 0.05,
        }
    }
}

/// Relative increase per doubling between the last two entries of `seq`.
pub fn growth_per_doubling(seq: &[(usize, f64)]) -> Option<f64> {
    let [.., (n0, v0), (n1, v1)] = seq else {
        return None;
    };
    if *n1 <= *n0 || *v0 <= 0.0 {
        return None;
    }
    let doublings = (*n1 as f64 / *n0 as f64).log2();
    Some((v1 / v0).powf(1.0 / doublings) - 1.0)
}

/// Heuristic classification of a sequence of truncation norms.
pub fn growth_verdict(seq: &[(usize, f64)], th: GrowthThresholds) -> BoundednessVerdict {
    match growth_per_doubling(seq) {
        Some(g) if !g.is_finite() => BoundednessVerdict::LikelyUnbounded,
        Some(g) if g < th.plateau => BoundednessVerdict::LikelyBounded,
        Some(g) if g >= th.growth => BoundednessVerdict::LikelyUnbounded,
        _ => BoundednessVerdict::Inconclusive,
    }
}

fn normalize(x: &mut [Complex]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        for v in x.iter_mut() {
            *v /= n;
        }
    }
    n
}

/// Power iteration on `A^* A`, starting from `x`. Returns the norm estimate,
/// the final unit vector, the iteration count and whether it converged.
pub fn power_iteration(
    op: &impl Operator,
    mut x: Vec<Complex>,
    tol: f64,
    max_iter: usize,
) -> (f64, Vec<Complex>, usize, bool) {
    if normalize(&mut x) == 0.0 {
        x = vec![Complex::new(1.0, 0.0); op.ncols()];
        normalize(&mut x);
    }
    let mut sigma = 0.0;
    for it in 1..=max_iter {
        let y = op.apply(&x);
        let s = norm2(&y);
        let mut z = op.apply_adjoint(&y);
        if normalize(&mut z) == 0.0 {
            return (s, x, it, true);
        }
        x = z;
        if (s - sigma).abs() <= tol * s {
            return (s, x, it, true);
        }
        sigma = s;
    }
    (sigma, x, max_iter, false)
}

fn dense_norm(m: &ColumnBandMatrix) -> (f64, Vec<Complex>) {
    let svd = m.to_dense().svd(false, true);
    let (idx, &value) = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let v_t = svd.v_t.expect("requested right singular vectors");
    let x = v_t.row(idx).iter().map(|v| v.conj()).collect();
    (value, x)
}

/// Norms of the leading `N x N` sections of `m` for each `N` in `sizes`
/// (increasing), each run warm-started from the previous top vector.
pub fn estimate_norms(m: &ColumnBandMatrix, sizes: &[usize], opts: NormOptions) -> Vec<NormEstimate> {
    let mut out: Vec<NormEstimate> = Vec::with_capacity(sizes.len());
    let mut growth = Vec::with_capacity(sizes.len());
    let mut warm: Vec<Complex> = Vec::new();
    for &n in sizes {
        let sec = m.section(n);
        let (value, method, iterations, converged, x) = if n <= opts.dense_max {
            let (v, x) = dense_norm(&sec);
            (v, NormMethod::DenseSvd, 0, true, x)
        } else {
            let mut start = warm.clone();
            start.resize(n, Complex::new(0.0, 0.0));
            if warm.is_empty() {
                start = (0..n).map(|k| Complex::new(1.0 / (k + 1) as f64, 0.0)).collect();
            }
            let (v, x, it, conv) = power_iteration(&sec, start, opts.tol, opts.max_iter);
            (v, NormMethod::PowerIteration, it, conv, x)
        };
        warm = x;
        growth.push((n, value));
        out.push(NormEstimate {
            truncation: n,
            value,
            method,
            iterations,
            converged,
            growth_sequence: growth.clone(),
        });
    }
    out
}
