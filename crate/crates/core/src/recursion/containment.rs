//! Truncation diagnostics for the boundedness of `C`, alongside the
//! comparison matrix whose boundedness is known to switch at `p = 1/2`.

use serde::{Deserialize, Serialize};

use super::c_section;
use super::norm::{
    estimate_norms, growth_per_doubling, growth_verdict, BoundednessVerdict, GrowthThresholds,
    NormEstimate, NormOptions,
};
use crate::banded::ColumnBandMatrix;
use crate::error::{Error, Result};
use crate::{Complex, Space};

/// Largest truncation accepted by [`containment_report`]. The dense lower
/// triangle at this size takes about half a gigabyte.
pub const MAX_SECTION: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContainmentOptions {
    pub norm: NormOptions,
    pub thresholds: GrowthThresholds,
    pub threads: usize,
    /// Also estimate norms of the comparison matrix at the same sizes.
    pub comparison: bool,
}

impl Default for ContainmentOptions {
    fn default() -> Self {
        ContainmentOptions {
            norm: NormOptions::default(),
            thresholds: GrowthThresholds::default(),
            threads: 1,
            comparison: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub norms: Vec<NormEstimate>,
    pub growth_per_doubling: Option<f64>,
    pub verdict: BoundednessVerdict,
    /// Euclidean norm of column 0 of each section.
    pub column0_norms: Vec<(usize, f64)>,
    /// Column norms of the largest section.
    pub column_norms: Vec<f64>,
    pub comparison: Option<Vec<NormEstimate>>,
    pub comparison_verdict: Option<BoundednessVerdict>,
    /// Whether `n (1 - a_n) -> p` with `p > 1/2` holds for the weights.
    pub rate_hypothesis: bool,
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::config("truncation list is empty"));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("truncations must be strictly increasing"));
    }
    if sizes[0] == 0 {
        return Err(Error::config("truncations must be positive"));
    }
    let max = *sizes.last().expect("nonempty");
    if max > MAX_SECTION {
        return Err(Error::config(format!("truncation {max} exceeds the cap {MAX_SECTION}")));
    }
    Ok(())
}

/// Norms of the `N x N` sections of `C` for each `N` in `sizes`, column norms
/// and a growth verdict.
pub fn containment_report(
    space: &Space,
    sizes: &[usize],
    opts: ContainmentOptions,
) -> Result<ContainmentReport> {
    check_sizes(sizes)?;
    let max = *sizes.last().expect("nonempty");
    let c = c_section(space, max, opts.threads);
    let norms = estimate_norms(&c, sizes, opts.norm);
    let seq: Vec<(usize, f64)> = norms.iter().map(|e| (e.truncation, e.value)).collect();

    let (_, col0) = c.column(0);
    let column0_norms = sizes
        .iter()
        .map(|&n| {
            let s: f64 = col0[..n.min(col0.len())].iter().map(|v| v.norm_sqr()).sum();
            (n, s.sqrt())
        })
        .collect();

    let (comparison, comparison_verdict) = if opts.comparison {
        let am = adams_mcguire_matrix(space.weights().p(), max)?;
        let est = estimate_norms(&am, sizes, opts.norm);
        let seq: Vec<(usize, f64)> = est.iter().map(|e| (e.truncation, e.value)).collect();
        (Some(est), Some(growth_verdict(&seq, opts.thresholds)))
    } else {
        (None, None)
    };

    Ok(ContainmentReport {
        growth_per_doubling: growth_per_doubling(&seq),
        verdict: growth_verdict(&seq, opts.thresholds),
        norms,
        column0_norms,
        column_norms: c.column_norms(),
        comparison,
        comparison_verdict,
        rate_hypothesis: space.weights().rate().is_some_and(|p| p > 0.5),
    })
}

/// The `size x size` section of the comparison matrix with entries
/// `p/(k+2) ((k+2)/(n+1))^p` below the diagonal (row `n`, column `k`).
pub fn adams_mcguire_matrix(p: f64, size: usize) -> Result<ColumnBandMatrix> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::config(format!("comparison matrix needs p > 0, got {p}")));
    }
    Ok(ColumnBandMatrix::from_generator(size, size, |k| {
        let base = (k + 2) as f64;
        let col = (k + 1..size)
            .map(|n| Complex::new(p / base * (base / (n + 1) as f64).powf(p), 0.0))
            .collect();
        (k + 1, col)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BoundaryConfig, WeightSequence};

    #[test]
    fn comparison_matrix_corner() {
        let p = 0.7;
        let m = adams_mcguire_matrix(p, 5).unwrap();
        for k in 0..5 {
            assert_eq!(m.get(0, k), Complex::new(0.0, 0.0));
        }
        assert!((m.get(1, 0).re - p / 2.0).abs() < 1e-15);
        assert!((m.get(2, 0).re - p / 2.0 * (2.0f64 / 3.0).powf(p)).abs() < 1e-15);
        assert!((m.get(2, 1).re - p / 3.0).abs() < 1e-15);
        assert!((m.get(3, 2).re - p / 4.0).abs() < 1e-15);
        assert!((m.get(4, 2).re - p / 4.0 * (4.0f64 / 5.0).powf(p)).abs() < 1e-15);
        assert!((m.get(4, 3).re - p / 5.0).abs() < 1e-15);
    }

    #[test]
    fn single_root_column_zero_converges() {
        let s = Space::new(
            BoundaryConfig::from_fractions(&[(0, 1)]).unwrap(),
            WeightSequence::harmonic(1.0, 2.0).unwrap(),
        )
        .unwrap();
        let r = containment_report(&s, &[64, 128, 256], ContainmentOptions::default()).unwrap();
        // sum_{k>=1} 1/(k+1)^2 + 1 = pi^2/6
        let lim = (std::f64::consts::PI.powi(2) / 6.0).sqrt();
        let last = r.column0_norms.last().unwrap().1;
        assert!(last < lim && lim - last < 1e-2);
        assert!(r.rate_hypothesis);
    }

    #[test]
    fn bad_sizes_rejected() {
        let s = Space::new(
            BoundaryConfig::from_fractions(&[(0, 1)]).unwrap(),
            WeightSequence::harmonic(1.0, 2.0).unwrap(),
        )
        .unwrap();
        let o = ContainmentOptions::default();
        assert!(containment_report(&s, &[], o).is_err());
        assert!(containment_report(&s, &[64, 32], o).is_err());
        assert!(containment_report(&s, &[MAX_SECTION * 2], o).is_err());
    }
}
