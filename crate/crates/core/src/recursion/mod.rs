//! Columns of the matrix `C` solving `L-hat = L C`, where column `n` of `L`
//! holds the Taylor coefficients of `f_n` and column `n` of `L-hat` those of
//! `z^n phi(z)`.
//!
//! Column `n` starts with `c_{n,n} = 1`; the next `J` entries are fixed by
//! the first rows of the system and every later entry satisfies the
//! homogeneous rule `c_{m,n} = -sum_i beta_i a_{m-i}^i c_{m-i,n}`, which is a
//! product of companion matrices acting on the window of the last `J` entries.

pub mod companion;
pub mod containment;
pub mod norm;

use serde::{Deserialize, Serialize};

use crate::banded::ColumnBandMatrix;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::{Complex, Space};

pub use companion::{
    eigen_check, linearization_parts, mu_search, nu0_expansion, product_norm, CompanionMatrix, EigenBasis, EigenCheck,
    LinearizationParts, DEFAULT_MU_CAP,
};
pub use containment::{adams_mcguire_matrix, containment_report, ContainmentOptions, ContainmentReport};
pub use norm::{
    estimate_norms, growth_per_doubling, growth_verdict, BoundednessVerdict, GrowthThresholds, NormEstimate, NormMethod,
    NormOptions,
};

/// `a_m^i` for `m < len` and `1 <= i <= J`, laid out row by row.
#[derive(Debug, Clone)]
pub(crate) struct PowerTable {
    j: usize,
    pows: Vec<f64>,
}

impl PowerTable {
    pub(crate) fn new(space: &Space, len: usize) -> Self {
        let j = space.j();
        let mut pows = Vec::with_capacity(len * j);
        for m in 0..len {
            let a = space.a(m);
            let mut p = 1.0;
            for _ in 0..j {
                p *= a;
                pows.push(p);
            }
        }
        PowerTable { j, pows }
    }

    /// `a_m^i`, for `i >= 1`.
    #[inline]
    pub(crate) fn get(&self, m: usize, i: usize) -> f64 {
        self.pows[m * self.j + i - 1]
    }
}

/// `alpha_{n,j}` with `c_{n+j,n} = (1 - a_n) alpha_{n,j}` for `1 <= j <= J`.
///
/// Factoring out the deficit keeps these entries accurate when `a_n` is close
/// to one.
pub fn starting_alpha(space: &Space, n: usize) -> Vec<Complex> {
    let jj = space.j();
    let a_n = space.a(n);
    let mut alpha: Vec<Complex> = Vec::with_capacity(jj);
    for j in 1..=jj {
        // 1 + a + ... + a^{j-1}
        let geo: f64 = (0..j).map(|m| a_n.powi(m as i32)).sum();
        let mut v = space.beta(j) * geo;
        for i in 1..j {
            v -= space.beta(i) * space.a(n + j - i).powi(i as i32) * alpha[j - i - 1];
        }
        alpha.push(v);
    }
    alpha
}

/// Limit of [`starting_alpha`] as `n -> infinity`:
/// `alpha_j = j beta_j - sum_{i<j} beta_i alpha_{j-i}`.
pub fn starting_alpha_limit(space: &Space) -> Vec<Complex> {
    let jj = space.j();
    let mut alpha: Vec<Complex> = Vec::with_capacity(jj);
    for j in 1..=jj {
        let mut v = space.beta(j) * j as f64;
        for i in 1..j {
            v -= space.beta(i) * alpha[j - i - 1];
        }
        alpha.push(v);
    }
    alpha
}

/// The starting vector `v_{n+J,n} = (c_{n+1,n}, ..., c_{n+J,n})`.
pub fn starting_vector(space: &Space, n: usize) -> Vec<Complex> {
    let d = space.deficit(n);
    starting_alpha(space, n).into_iter().map(|a| a * d).collect()
}

fn column_with(space: &Space, table: &PowerTable, n: usize, k_max: usize) -> Vec<Complex> {
    let jj = space.j();
    let beta: Vec<Complex> = (0..=jj).map(|k| space.beta(k)).collect();
    let mut c = Vec::with_capacity(k_max + 1);
    c.push(Complex::new(1.0, 0.0));
    c.extend(starting_vector(space, n).into_iter().take(k_max));
    for k in jj + 1..=k_max {
        let m = n + k;
        let mut acc = Complex::new(0.0, 0.0);
        for i in 1..=jj {
            acc -= beta[i] * (table.get(m - i, i) * c[k - i]);
        }
        c.push(acc);
    }
    c
}

/// `c_{n+k,n}` for `0 <= k <= k_max`.
pub fn c_column(space: &Space, n: usize, k_max: usize) -> Vec<Complex> {
    let table = PowerTable::new(space, n + k_max + 1);
    column_with(space, &table, n, k_max)
}

/// The leading `size x size` block of `C`, columns generated on `threads`
/// workers.
pub fn c_section(space: &Space, size: usize, threads: usize) -> ColumnBandMatrix {
    let table = PowerTable::new(space, size);
    ColumnBandMatrix::from_generator_par(size, size, threads, |n| {
        (n, column_with(space, &table, n, size - 1 - n))
    })
}

/// Dense `size x size` sections of `L` and `L-hat`.
pub fn dense_l_sections(space: &Space, size: usize) -> (CMatrix, CMatrix) {
    let jj = space.j();
    let mut l = CMatrix::zeros(size, size);
    let mut l_hat = CMatrix::zeros(size, size);
    for n in 0..size {
        let a = space.a(n);
        for k in 0..=jj {
            if n + k < size {
                l[(n + k, n)] = space.beta(k) * a.powi(k as i32);
                l_hat[(n + k, n)] = space.beta(k);
            }
        }
    }
    (l, l_hat)
}

/// `C` from plain forward substitution on the dense system `L C = L-hat`.
/// Shares no code with [`c_column`] beyond building `L`.
pub fn triangular_solve_oracle(space: &Space, size: usize) -> Result<CMatrix> {
    if size < space.j() + 1 {
        return Err(Error::precondition(format!(
            "oracle section {size} smaller than J + 1 = {}",
            space.j() + 1
        )));
    }
    let (l, l_hat) = dense_l_sections(space, size);
    let mut c = CMatrix::zeros(size, size);
    for col in 0..size {
        for r in 0..size {
            let mut acc = l_hat[(r, col)];
            for m in 0..r {
                acc -= l[(r, m)] * c[(m, col)];
            }
            let diag = l[(r, r)];
            if diag.norm() == 0.0 {
                return Err(Error::Internal(format!("zero pivot in row {r}")));
            }
            c[(r, col)] = acc / diag;
        }
    }
    Ok(c)
}

/// `||v_{n+J,n}|| (n + J) / p`, the quantity bounded by `D_1`.
pub fn starting_vector_ratio(space: &Space, n: usize) -> f64 {
    let v = starting_vector(space, n);
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    norm * (n + space.j()) as f64 / space.weights().p()
}

/// Measured constant `D_1` with `||v_{n+J,n}|| <= D_1 p / (n + J)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct D1Fit {
    /// Largest ratio over the fitting window.
    pub window_max: f64,
    /// Bound on the ratio for every index past the window, or infinity when
    /// the weights decay too slowly for one to exist.
    pub tail_bound: f64,
    pub d1: f64,
    pub window_end: usize,
}

/// Last index of the window used by [`fit_d1`].
pub const D1_WINDOW_END: usize = 64;

/// Fits `D_1` on `n = J+1 ..= 64`, and bounds the ratio beyond the window by
/// `sup ||alpha_n|| * sup (n + J)|1 - a_n| / p`, with `||alpha_n||` controlled
/// through its limit plus a perturbation term in the largest remaining
/// deficit.
pub fn fit_d1(space: &Space) -> D1Fit {
    let jj = space.j();
    let window_end = D1_WINDOW_END.max(jj + 1);
    let window_max = (jj + 1..=window_end)
        .map(|n| starting_vector_ratio(space, n))
        .fold(0.0, f64::max);

    let from = window_end + 1;
    let tail_bound = match space.weights().scaled_deficit_sup(from, jj as f64) {
        Some(scaled) => alpha_sup_bound(space, from) * scaled / space.weights().p(),
        None => f64::INFINITY,
    };
    D1Fit {
        window_max,
        tail_bound,
        d1: window_max.max(tail_bound),
        window_end,
    }
}

/// Bound on `sup_{n >= from} ||alpha_n||`.
fn alpha_sup_bound(space: &Space, from: usize) -> f64 {
    let jj = space.j();
    let d = space.weights().sup_deficit_from(from);
    let limit = starting_alpha_limit(space);
    // |a^i - 1| <= i d (1 + d)^{i-1}
    let pow_err = |i: usize| i as f64 * d * (1.0 + d).powi(i as i32 - 1);
    let mut err = vec![0.0; jj];
    for j in 1..=jj {
        let geo_err: f64 = (1..j).map(pow_err).sum();
        let mut e = space.beta(j).norm() * geo_err;
        for i in 1..j {
            let a_abs = limit[j - i - 1].norm() + err[j - i - 1];
            e += space.beta(i).norm() * (pow_err(i) * a_abs + (1.0 + d).powi(i as i32) * err[j - i - 1]);
        }
        err[j - 1] = e;
    }
    let lim = limit.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let e = err.iter().map(|x| x * x).sum::<f64>().sqrt();
    lim + e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BoundaryConfig, WeightSequence};

    fn space(fr: &[(i64, u64)], w: WeightSequence) -> Space {
        Space::new(BoundaryConfig::from_fractions(fr).unwrap(), w).unwrap()
    }

    #[test]
    fn single_root_column_closed_form() {
        let s = space(&[(0, 1)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let c = c_column(&s, 0, 50);
        assert_eq!(c[0], Complex::new(1.0, 0.0));
        for k in 1..=50 {
            let expect = -1.0 / (k as f64 + 1.0);
            assert!((c[k].re - expect).abs() < 1e-14 && c[k].im == 0.0, "k={k}: {}", c[k]);
        }
    }

    #[test]
    fn first_subdiagonal_is_beta_one_times_deficit() {
        let s = space(&[(1, 5), (2, 7), (1, 2)], WeightSequence::power_law(1.5).unwrap());
        for n in [0, 3, 40] {
            let c = c_column(&s, n, 5);
            assert!((c[1] - s.beta(1) * s.deficit(n)).norm() < 1e-15);
        }
    }

    #[test]
    fn divergent_example_entries() {
        let s = space(&[(0, 1), (1, 2)], WeightSequence::power_law(2.0).unwrap());
        let c = c_column(&s, 0, 400);
        assert!((c[2].re + 7.0 / 16.0).abs() < 1e-15);
        assert_eq!(c[1], Complex::new(0.0, 0.0));
        assert!(c[399].norm() < 1e-15);
        assert!(c[400].norm() > 0.3);
    }

    #[test]
    fn oracle_matches_recursion() {
        let s = space(&[(1, 3), (3, 4)], WeightSequence::harmonic(0.8, 3.0).unwrap());
        let oracle = triangular_solve_oracle(&s, 40).unwrap();
        let sec = c_section(&s, 40, 3);
        for n in 0..40 {
            for r in 0..40 {
                assert!((oracle[(r, n)] - sec.get(r, n)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn starting_alpha_converges_to_limit() {
        let s = space(&[(1, 6), (1, 2), (5, 7)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let lim = starting_alpha_limit(&s);
        let far = starting_alpha(&s, 1_000_000);
        for (x, y) in lim.iter().zip(&far) {
            assert!((x - y).norm() < 1e-4);
        }
    }

    #[test]
    fn d1_fit_is_finite_for_harmonic_weights() {
        let s = space(&[(0, 1), (1, 2)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let fit = fit_d1(&s);
        assert!(fit.d1.is_finite() && fit.d1 >= fit.window_max);
        let slow = space(&[(0, 1)], WeightSequence::power_law(0.5).unwrap());
        assert!(fit_d1(&slow).tail_bound.is_infinite());
    }
}
