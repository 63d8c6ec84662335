//! Multiplication by `z` in the `f_n` basis, the expansion of the constant
//! function, and membership of polynomials.

use serde::{Deserialize, Serialize};

use crate::banded::ColumnBandMatrix;
use crate::basis::h2_coeffs;
use crate::decomposition::alpha_from_taylor;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::recursion::{
    estimate_norms, growth_per_doubling, growth_verdict, BoundednessVerdict, GrowthThresholds,
    NormEstimate, NormOptions, PowerTable,
};
use crate::{Complex, Space};

/// Column `n` of the matrix of `f -> z f`: `z f_n = sum_k c_{k,n} f_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierColumn {
    pub n: usize,
    /// `c_{n+1+i,n}` for `i < K_max`.
    pub entries: Vec<Complex>,
}

impl MultiplierColumn {
    /// `c_{k,n}`, zero for `k <= n` and past the computed range.
    pub fn get(&self, k: usize) -> Complex {
        if k <= self.n {
            return Complex::new(0.0, 0.0);
        }
        self.entries.get(k - self.n - 1).copied().unwrap_or_default()
    }
}

fn mz_entries(space: &Space, table: &PowerTable, n: usize, k_max: usize) -> Vec<Complex> {
    let jj = space.j();
    let a_n = space.a(n);
    let mut c: Vec<Complex> = Vec::with_capacity(k_max);
    for j in 0..k_max {
        let mut v = if j <= jj { space.beta(j) * a_n.powi(j as i32) } else { Complex::new(0.0, 0.0) };
        let m = n + 1 + j;
        for i in 1..=jj.min(j) {
            v -= space.beta(i) * table.get(m - i, i) * c[j - i];
        }
        c.push(v);
    }
    c
}

/// `c_{n+1+j,n} = beta_j a_n^j - sum_{i=1}^{min(j,J)} beta_i a_{n+1+j-i}^i c_{n+1+j-i,n}`
/// for `j < k_max`, with `c_{n+1,n} = 1`.
pub fn mz_column(space: &Space, n: usize, k_max: usize) -> Result<MultiplierColumn> {
    if k_max < space.j() + 1 {
        return Err(Error::config(format!("K_max = {k_max} must be at least J + 1 = {}", space.j() + 1)));
    }
    let table = PowerTable::new(space, n + k_max + 1);
    Ok(MultiplierColumn {
        n,
        entries: mz_entries(space, &table, n, k_max),
    })
}

/// The `size x size` section of the multiplication matrix.
pub fn mz_section(space: &Space, size: usize, threads: usize) -> ColumnBandMatrix {
    let table = PowerTable::new(space, size + 1);
    ColumnBandMatrix::from_generator_par(size, size, threads, |n| {
        let len = size.saturating_sub(n + 1);
        (n + 1, mz_entries(space, &table, n, len))
    })
}

/// `(M_z alpha)_k = sum_n c_{k,n} alpha_n` on the section of size `alpha.len()`.
pub fn mz_apply(space: &Space, alpha: &[Complex]) -> Vec<Complex> {
    use crate::banded::Operator;
    mz_section(space, alpha.len(), 1).apply(alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub norms: Vec<NormEstimate>,
    pub growth_per_doubling: Option<f64>,
    pub verdict: BoundednessVerdict,
    /// Norms with the subdiagonal of ones removed.
    pub norms_without_shift: Vec<NormEstimate>,
    pub growth_without_shift: Option<f64>,
    pub verdict_without_shift: BoundednessVerdict,
}

/// Truncated norms of the multiplication matrix, with and without its
/// subdiagonal of ones.
pub fn multiplier_report(
    space: &Space,
    sizes: &[usize],
    opts: NormOptions,
    thresholds: GrowthThresholds,
    threads: usize,
) -> Result<MultiplierReport> {
    let max = sizes.iter().copied().max().ok_or_else(|| Error::config("truncation list is empty"))?;
    if sizes.windows(2).any(|w| w[1] <= w[0]) || sizes[0] == 0 {
        return Err(Error::config("truncations must be positive and strictly increasing"));
    }
    let mut m = mz_section(space, max, threads);
    let norms = estimate_norms(&m, sizes, opts);
    m.remove_subdiagonal();
    let norms_without_shift = estimate_norms(&m, sizes, opts);
    let seq = |v: &[NormEstimate]| v.iter().map(|e| (e.truncation, e.value)).collect::<Vec<_>>();
    let (s1, s2) = (seq(&norms), seq(&norms_without_shift));
    Ok(MultiplierReport {
        growth_per_doubling: growth_per_doubling(&s1),
        verdict: growth_verdict(&s1, thresholds),
        growth_without_shift: growth_per_doubling(&s2),
        verdict_without_shift: growth_verdict(&s2, thresholds),
        norms,
        norms_without_shift,
    })
}

/// Coefficients with partial-norm diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub coeffs: Vec<Complex>,
    /// `(N, (sum_{n<N} |c_n|^2)^{1/2})` at the dyadic `N` up to the length.
    pub partial_norms: Vec<(usize, f64)>,
    pub growth_per_doubling: Option<f64>,
    pub verdict: BoundednessVerdict,
}

fn with_diagnostics(coeffs: Vec<Complex>, thresholds: GrowthThresholds) -> Expansion {
    let mut partial_norms = Vec::new();
    let mut acc = 0.0;
    let mut next = 16;
    for (n, c) in coeffs.iter().enumerate() {
        acc += c.norm_sqr();
        if n + 1 == next {
            partial_norms.push((next, acc.sqrt()));
            next *= 2;
        }
    }
    if partial_norms.last().map(|&(n, _)| n) != Some(coeffs.len()) {
        partial_norms.push((coeffs.len(), acc.sqrt()));
    }
    Expansion {
        growth_per_doubling: growth_per_doubling(&partial_norms),
        verdict: growth_verdict(&partial_norms, thresholds),
        partial_norms,
        coeffs,
    }
}

/// `1 = sum c_n f_n` with `c_0 = 1` and
/// `c_j = -sum_{i=1}^{min(j,J)} c_{j-i} beta_i a_{j-i}^i`, for `j < len`.
pub fn constant_expansion(space: &Space, len: usize, thresholds: GrowthThresholds) -> Result<Expansion> {
    if len < 2 {
        return Err(Error::config("constant expansion needs at least two coefficients"));
    }
    let mut t = vec![Complex::new(0.0, 0.0); len];
    t[0] = Complex::new(1.0, 0.0);
    Ok(with_diagnostics(alpha_from_taylor(space, &t), thresholds))
}

/// Basis coefficients of a polynomial, by forward substitution against `L`.
pub fn polynomial_membership(
    space: &Space,
    poly: &Poly,
    len: usize,
    thresholds: GrowthThresholds,
) -> Result<Expansion> {
    let deg = poly.degree().unwrap_or(0);
    if len < 2 * (deg + 1) {
        return Err(Error::config(format!("prefix length {len} too short for degree {deg}")));
    }
    let t: Vec<Complex> = (0..len).map(|m| poly.coeff(m)).collect();
    Ok(with_diagnostics(alpha_from_taylor(space, &t), thresholds))
}

/// `max |sum_{n<N} c_n f_n(z) - target(z)|` over `samples` points on `|z| = radius`
/// and the origin. For analytic differences this bounds the error on the
/// whole closed disk of that radius.
pub fn expansion_sup_error(
    space: &Space,
    coeffs: &[Complex],
    target: &Poly,
    radius: f64,
    samples: usize,
) -> f64 {
    let taylor = Poly::new(h2_coeffs(space, coeffs));
    let zero = Complex::new(0.0, 0.0);
    let mut worst = (taylor.eval(zero) - target.eval(zero)).norm();
    for s in 0..samples {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / samples as f64;
        let z = Complex::from_polar(radius, theta);
        worst = worst.max((taylor.eval(z) - target.eval(z)).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::basis_coeffs;
    use crate::recursion::CompanionMatrix;
    use crate::{BoundaryConfig, WeightSequence};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(fr: &[(i64, u64)], p: f64) -> Space {
        Space::new(
            BoundaryConfig::from_fractions(fr).unwrap(),
            WeightSequence::harmonic(p, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn first_entries() {
        let s = space(&[(0, 1)], 1.0);
        let col = mz_column(&s, 0, 4).unwrap();
        assert_eq!(col.get(1), Complex::new(1.0, 0.0));
        assert!((col.get(2).re - (s.a(1) - s.a(0))).abs() < 1e-15);
        assert_eq!(col.get(0), Complex::new(0.0, 0.0));
        assert!(mz_column(&s, 0, 1).is_err());
    }

    #[test]
    fn z_times_f_n_matches_taylor() {
        let s = space(&[(1, 6), (1, 2), (4, 5)], 1.0);
        let (n, k_max) = (7, 40);
        let col = mz_column(&s, n, k_max).unwrap();
        let mut lhs = vec![Complex::new(0.0, 0.0); n + k_max + 4];
        for (d, t) in basis_coeffs(&s, n).taylor.iter().enumerate() {
            lhs[n + 1 + d] += t;
        }
        let mut rhs = vec![Complex::new(0.0, 0.0); n + k_max + 4];
        for k in n + 1..=n + k_max {
            for (d, t) in basis_coeffs(&s, k).taylor.iter().enumerate() {
                rhs[k + d] += col.get(k) * t;
            }
        }
        for m in 0..=n + k_max - s.j() {
            assert!((lhs[m] - rhs[m]).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn tail_follows_companion_products() {
        let s = space(&[(1, 5), (1, 2), (2, 3)], 1.0);
        let jj = s.j();
        let n = 11;
        let col = mz_column(&s, n, 60).unwrap();
        // window ending at index m in the entries vector, i.e. at c_{n+1+m,n}
        let window = |m: usize| nalgebra::DVector::from_iterator(jj, (m + 1 - jj..=m).map(|i| col.entries[i]));
        for m in jj..59 {
            // the window (c_{k-J+1}, ..., c_k) with k = n+1+m maps under M_k
            let mk = CompanionMatrix::at(&s, n + 1 + m).unwrap();
            let next = &mk * window(m);
            let err = (next - window(m + 1)).norm();
            assert!(err < 1e-10, "m={m}: {err}");
        }
    }

    #[test]
    fn harmonic_constant_expansion() {
        let s = space(&[(0, 1)], 1.0);
        let e = constant_expansion(&s, 2048, GrowthThresholds::default()).unwrap();
        for j in 0..=100 {
            assert!((e.coeffs[j].re - 1.0 / (j as f64 + 1.0)).abs() < 1e-12);
        }
        assert_eq!(e.verdict, BoundednessVerdict::LikelyBounded);
        assert!(expansion_sup_error(&s, &e.coeffs, &Poly::one(), 0.9, 256) < 1e-6);
    }

    #[test]
    fn membership_agrees_with_other_routes() {
        let s = space(&[(0, 1), (1, 3)], 1.0);
        let th = GrowthThresholds::default();
        let one = polynomial_membership(&s, &Poly::one(), 256, th).unwrap();
        let c = constant_expansion(&s, 256, th).unwrap();
        assert_eq!(one.coeffs, c.coeffs);
        // z = M_z applied to the coefficients of 1
        let z = polynomial_membership(&s, &Poly::monomial(1, Complex::new(1.0, 0.0)), 256, th).unwrap();
        let mz = mz_apply(&s, &c.coeffs);
        for k in 0..255 {
            assert!((z.coeffs[k] - mz[k]).norm() < 1e-10, "k={k}");
        }
        let phi = polynomial_membership(&s, s.phi(), 4096, th).unwrap();
        assert_eq!(phi.verdict, BoundednessVerdict::LikelyBounded);
    }

    #[test]
    fn multiplication_shifts_taylor() {
        let s = space(&[(0, 1), (1, 2)], 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alpha: Vec<Complex> = (0..256)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = h2_coeffs(&s, &alpha);
        let zf = h2_coeffs(&s, &mz_apply(&s, &alpha));
        assert!(zf[0].norm() < 1e-12);
        for m in 1..256 - s.j() {
            assert!((zf[m] - f[m - 1]).norm() < 1e-9, "m={m}");
        }
    }
}
