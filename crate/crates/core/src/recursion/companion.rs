//! Companion matrices `M_n`, their limit `M_inf`, the eigenvector basis of
//! `M_inf` and the product estimates used for the containment argument.

use serde::{Deserialize, Serialize};

use crate::boundary::{lcm, BoundaryConfig};
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, CMatrix};
use crate::{Complex, Space};

pub const DEFAULT_MU_CAP: u64 = 1_000_000;

/// Constructors for the `J x J` companion matrices.
pub struct CompanionMatrix;

impl CompanionMatrix {
    /// `M_n`: shift rows above a bottom row
    /// `(-beta_J a_{n-J+1}^J, ..., -beta_1 a_n)`. It maps the window
    /// `(c_{n-J+1}, ..., c_n)` of a column of `C` to `(c_{n-J+2}, ..., c_{n+1})`.
    pub fn at(space: &Space, n: usize) -> Result<CMatrix> {
        let jj = space.j();
        if n + 1 < jj {
            return Err(Error::precondition(format!("M_{n} needs n >= J - 1 = {}", jj - 1)));
        }
        let mut m = Self::shift(jj);
        for col in 0..jj {
            let i = jj - col;
            let a = space.a(n + 1 + col - jj);
            m[(jj - 1, col)] = -space.beta(i) * a.powi(i as i32);
        }
        Ok(m)
    }

    /// `M_inf`, the entrywise limit of `M_n`.
    pub fn limit(space: &Space) -> CMatrix {
        let jj = space.j();
        let mut m = Self::shift(jj);
        for col in 0..jj {
            m[(jj - 1, col)] = -space.beta(jj - col);
        }
        m
    }

    fn shift(jj: usize) -> CMatrix {
        let mut m = CMatrix::zeros(jj, jj);
        for r in 0..jj.saturating_sub(1) {
            m[(r, r + 1)] = Complex::new(1.0, 0.0);
        }
        m
    }
}

/// Columns `nu_j = (z_j^{J-1}, ..., z_j, 1)`, eigenvectors of `M_inf` with
/// eigenvalues `w_j`.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub x: CMatrix,
    pub x_inv: CMatrix,
    pub eigvals: Vec<Complex>,
}

impl EigenBasis {
    pub fn new(cfg: &BoundaryConfig) -> Result<Self> {
        let jj = cfg.len();
        let mut x = CMatrix::zeros(jj, jj);
        for (j, &z) in cfg.roots().iter().enumerate() {
            for r in 0..jj {
                x[(r, j)] = z.powu((jj - 1 - r) as u32);
            }
        }
        let x_inv = x
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::config("eigenvector matrix is singular"))?;
        Ok(EigenBasis {
            x,
            x_inv,
            eigvals: cfg.conjugates().to_vec(),
        })
    }

    /// `max_j ||M_inf nu_j - w_j nu_j||`.
    pub fn eigen_residual(&self, space: &Space) -> f64 {
        let m = CompanionMatrix::limit(space);
        (0..self.eigvals.len())
            .map(|j| {
                let nu = self.x.column(j);
                (&m * nu - nu * self.eigvals[j]).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `||X X^{-1} - I||` in the max-entry sense.
    pub fn inverse_residual(&self) -> f64 {
        let jj = self.x.nrows();
        let prod = &self.x * &self.x_inv - CMatrix::identity(jj, jj);
        prod.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Smallest `mu <= cap` with `max_j |z_j^mu - 1| < epsilon`.
///
/// With rational angles the deviation is computed exactly, and the search
/// never needs to go past the least common multiple of the denominators.
pub fn mu_search(cfg: &BoundaryConfig, epsilon: f64, cap: u64) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(Error::config(format!("mu search tolerance must be positive, got {epsilon}")));
    }
    let mut best = (0u64, f64::INFINITY);
    if let Some(angles) = cfg.angles() {
        let period = angles
            .iter()
            .try_fold(1u64, |acc, a| lcm(acc, a.denominator()))
            .unwrap_or(u64::MAX);
        for mu in 1..=period.min(cap) {
            let dev = angles
                .iter()
                .map(|a| a.times(mu).chord_to_one())
                .fold(0.0, f64::max);
            if dev < epsilon {
                return Ok(mu);
            }
            if dev < best.1 {
                best = (mu, dev);
            }
        }
    } else {
        let roots = cfg.roots();
        let mut pows = roots.to_vec();
        for mu in 1..=cap {
            if mu % 4096 == 0 {
                for (p, z) in pows.iter_mut().zip(roots) {
                    *p = z.powu(mu as u32);
                }
            }
            let dev = pows
                .iter()
                .map(|p| (p - 1.0).norm())
                .fold(0.0, f64::max);
            if dev < epsilon {
                return Ok(mu);
            }
            if dev < best.1 {
                best = (mu, dev);
            }
            for (p, z) in pows.iter_mut().zip(roots) {
                *p *= z;
            }
        }
    }
    Err(Error::SearchFailure {
        cap,
        best: best.0,
        deviation: best.1,
    })
}

/// `M_{n+mu-1} ... M_n`.
pub fn companion_product(space: &Space, n: usize, mu: usize) -> Result<CMatrix> {
    let jj = space.j();
    let mut p = CMatrix::identity(jj, jj);
    for k in 0..mu {
        p = CompanionMatrix::at(space, n + k)? * p;
    }
    Ok(p)
}

/// Spectral norm of `M_{n+mu-1} ... M_n`, conjugated by the eigenvector
/// basis (`X^{-1} P X`) when `conjugated` is set.
pub fn product_norm(space: &Space, n: usize, mu: usize, conjugated: bool) -> Result<f64> {
    if n <= space.j() {
        return Err(Error::precondition(format!("product norm needs n > J, got n = {n}")));
    }
    let p = companion_product(space, n, mu)?;
    if conjugated {
        let e = EigenBasis::new(space.cfg())?;
        Ok(spectral_norm(&(&e.x_inv * p * &e.x)))
    } else {
        Ok(spectral_norm(&p))
    }
}

/// `M_{n+k} = M_inf + (p/n) B + R_{n,k}`.
#[derive(Debug, Clone)]
pub struct LinearizationParts {
    pub b: CMatrix,
    pub r: CMatrix,
    /// `E(n) = n max |R_{n,k}|`, which should tend to zero.
    pub e: f64,
}

/// Splits `M_{n+k}` into its limit, the first-order term with bottom row
/// `(J beta_J, ..., 2 beta_2, beta_1)`, and a remainder with bottom row
/// `(1 - a_{n+k+1-i}^i - i p/n) beta_i`.
pub fn linearization_parts(space: &Space, n: usize, k: usize) -> Result<LinearizationParts> {
    let jj = space.j();
    if n <= jj {
        return Err(Error::precondition(format!("linearization needs n > J, got n = {n}")));
    }
    let p = space.weights().p();
    let mut b = CMatrix::zeros(jj, jj);
    let mut r = CMatrix::zeros(jj, jj);
    for col in 0..jj {
        let i = jj - col;
        let beta = space.beta(i);
        b[(jj - 1, col)] = beta * i as f64;
        let a = space.a(n + k + 1 - i);
        r[(jj - 1, col)] = beta * (1.0 - a.powi(i as i32) - i as f64 * p / n as f64);
    }
    let e = n as f64 * r.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(LinearizationParts { b, r, e })
}

/// Coefficients `-w_j / phi'(z_j)` expressing `(0, ..., 0, 1)` in the
/// eigenvector basis.
pub fn nu0_expansion(space: &Space) -> Result<Vec<Complex>> {
    let cfg = space.cfg();
    let ws = cfg.conjugates();
    // |phi'(z_j)| = prod_{k != j} |z_j - z_k| > tol_sep^{J-1}; half of that
    // leaves room for rounding when the bound is attained (J = 1)
    let floor = 0.5 * cfg.tol_sep().powi(cfg.len() as i32 - 1);
    cfg.roots()
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            // product form; Horner on phi' cancels badly for clustered roots
            let d = -ws[j]
                * ws.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &wk)| Complex::new(1.0, 0.0) - wk * z)
                    .product::<Complex>();
            if d.norm() < floor {
                Err(Error::config(format!("phi'({z}) = {d} is too small")))
            } else {
                Ok(-ws[j] / d)
            }
        })
        .collect()
}

/// Residuals of the eigen-structure identities for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenCheck {
    pub eigen_residual: f64,
    pub nu0_residual: f64,
    pub inverse_residual: f64,
}

pub fn eigen_check(space: &Space) -> Result<EigenCheck> {
    let e = EigenBasis::new(space.cfg())?;
    let coeffs = nu0_expansion(space)?;
    let jj = space.j();
    let v = &e.x * crate::linalg::CVector::from_vec(coeffs);
    let nu0_residual = (0..jj)
        .map(|r| {
            let target = if r + 1 == jj { 1.0 } else { 0.0 };
            (v[r] - target).norm()
        })
        .fold(0.0, f64::max);
    Ok(EigenCheck {
        eigen_residual: e.eigen_residual(space),
        nu0_residual,
        inverse_residual: e.inverse_residual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::c_column;
    use crate::WeightSequence;

    fn space(fr: &[(i64, u64)], w: WeightSequence) -> Space {
        Space::new(BoundaryConfig::from_fractions(fr).unwrap(), w).unwrap()
    }

    #[test]
    fn mu_search_examples() {
        let c = |fr: &[(i64, u64)]| BoundaryConfig::from_fractions(fr).unwrap();
        assert_eq!(mu_search(&c(&[(0, 1), (1, 2)]), 1e-3, DEFAULT_MU_CAP).unwrap(), 2);
        assert_eq!(mu_search(&c(&[(0, 1), (1, 3), (2, 3)]), 1e-3, DEFAULT_MU_CAP).unwrap(), 3);
        assert_eq!(mu_search(&c(&[(1, 4), (1, 6)]), 1e-3, DEFAULT_MU_CAP).unwrap(), 12);
        let err = mu_search(&c(&[(1, 1009), (1, 1013)]), 1e-9, 100).unwrap_err();
        assert!(matches!(err, Error::SearchFailure { cap: 100, .. }));
        // same roots given as bare points go through the floating search
        let pts = BoundaryConfig::from_points(c(&[(1, 4), (1, 6)]).roots()).unwrap();
        assert_eq!(mu_search(&pts, 1e-6, 1000).unwrap(), 12);
    }

    #[test]
    fn scalar_product_norm_is_the_weight() {
        let s = space(&[(0, 1)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        for n in [2, 10, 1000] {
            let v = product_norm(&s, n, 1, true).unwrap();
            assert!((v - s.a(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn companion_matrices_propagate_columns() {
        let s = space(&[(1, 5), (2, 3), (7, 8)], WeightSequence::harmonic(0.9, 2.0).unwrap());
        let jj = 3;
        let n = 4;
        let col = c_column(&s, n, 30);
        for m in n + jj..n + 29 {
            let m_mat = CompanionMatrix::at(&s, m).unwrap();
            let v = crate::linalg::CVector::from_iterator(jj, (0..jj).map(|r| col[m - n - jj + 1 + r]));
            let next = m_mat * v;
            for r in 0..jj {
                assert!((next[r] - col[m - n - jj + 2 + r]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn nu0_examples() {
        let s = space(&[(0, 1)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let c = nu0_expansion(&s).unwrap();
        assert!((c[0] - 1.0).norm() < 1e-15);
        let s = space(&[(0, 1), (1, 2)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let c = nu0_expansion(&s).unwrap();
        assert!((c[0] - 0.5).norm() < 1e-15 && (c[1] - 0.5).norm() < 1e-15);
    }

    #[test]
    fn linearization_reassembles() {
        let s = space(&[(1, 6), (1, 2)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let (n, k) = (50, 3);
        let parts = linearization_parts(&s, n, k).unwrap();
        let rebuilt = CompanionMatrix::limit(&s) + &parts.b * Complex::new(1.0 / n as f64, 0.0) + &parts.r;
        let direct = CompanionMatrix::at(&s, n + k).unwrap();
        assert!((rebuilt - direct).iter().all(|v| v.norm() < 1e-15));
        let s1 = space(&[(0, 1)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let parts = linearization_parts(&s1, 10, 0).unwrap();
        assert!((parts.b[(0, 0)] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn entry_bound_for_the_two_root_example() {
        let s = space(&[(0, 1), (1, 2)], WeightSequence::harmonic(1.0, 2.0).unwrap());
        let v = product_norm(&s, 1000, 2, true).unwrap();
        assert!(v <= 1.0 - 1.8 / 1000.0, "{v}");
    }
}
