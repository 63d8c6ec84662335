//! `H(K) = phi H^2 + span{K(., z_j)}`: splitting a coefficient prefix into a
//! Hardy-space part `g` and boundary coefficients `b`, and rebuilding it.

pub mod encode;
pub mod gram;
pub mod polys;

use serde::{Deserialize, Serialize};

pub use encode::{
    boundary_tail_factor, boundary_values, bp_apply, bp_matrix, chat_apply, chat_column_norms,
    chat_matrix, PermissibleSequence, ENFORCE_TOL,
};
pub use gram::{boundary_coeffs, gram_matrix, GramMatrix, GramSummary, GRAM_COND_CAP};
pub use polys::{p_polynomials, q_bound_constant, q_eval, q_polynomial, q_recursion_residual, q_weights};

use crate::basis::{boundary_rows, h2_coeffs};
use crate::error::{Error, Result};
use crate::linalg::{condition_number, least_squares, CMatrix, CVector};
use crate::recursion::PowerTable;
use crate::{Complex, Space};

/// How the boundary coefficients `b` are found.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BoundaryMethod {
    /// Least-squares fit of `b` so that `B_p(alpha - sum b_j k_j)` vanishes on
    /// the upper half of the prefix. Exact on the prefix when `g` is
    /// supported below `N/2`.
    #[default]
    TailFit,
    /// Solve the kernel system at the roots with boundary values taken from
    /// the prefix, then encode with `C-hat`.
    Gram { tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub g: Vec<Complex>,
    pub b: Vec<Complex>,
    /// Max Taylor-coefficient mismatch of `f` against `phi g + sum b_j K(., z_j)`
    /// over degrees `0..=N-J`.
    pub residual: f64,
    pub gram: Option<GramSummary>,
    /// Condition number of the tail-fit least-squares matrix.
    pub fit_cond: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub alpha: Vec<Complex>,
    pub taylor: Vec<Complex>,
}

/// Coefficients of `K(., z_j)` in the basis: `conj(f_n(z_j))` for `n < len`.
pub fn kernel_coefficients(space: &Space, len: usize) -> Vec<Vec<Complex>> {
    boundary_rows(space, len)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.conj()).collect())
        .collect()
}

/// Taylor coefficients of `phi g` for degrees `0..g.len()`.
pub fn phi_times(space: &Space, g: &[Complex]) -> Vec<Complex> {
    let jj = space.j();
    (0..g.len())
        .map(|m| (0..=jj.min(m)).map(|k| space.beta(k) * g[m - k]).sum())
        .collect()
}

/// Solves `L alpha = t` by forward substitution:
/// `alpha_m = t_m - sum_{k=1}^{J} beta_k a_{m-k}^k alpha_{m-k}`.
pub fn alpha_from_taylor(space: &Space, taylor: &[Complex]) -> Vec<Complex> {
    let jj = space.j();
    let pw = PowerTable::new(space, taylor.len());
    let mut alpha: Vec<Complex> = Vec::with_capacity(taylor.len());
    for m in 0..taylor.len() {
        let mut v = taylor[m];
        for k in 1..=jj.min(m) {
            v -= space.beta(k) * pw.get(m - k, k) * alpha[m - k];
        }
        alpha.push(v);
    }
    alpha
}

/// Taylor coefficients of `phi g + sum_j b_j K(., z_j)` for degrees `0..len`,
/// and the basis coefficients of that function.
pub fn reconstruct(space: &Space, g: &[Complex], b: &[Complex], len: usize) -> Result<Reconstruction> {
    if b.len() != space.j() {
        return Err(Error::config(format!("{} boundary coefficients for {} roots", b.len(), space.j())));
    }
    let mut gg = g.to_vec();
    gg.resize(len, Complex::new(0.0, 0.0));
    let mut taylor = phi_times(space, &gg);
    for (kj, &bj) in kernel_coefficients(space, len).iter().zip(b) {
        if bj == Complex::new(0.0, 0.0) {
            continue;
        }
        for (t, y) in taylor.iter_mut().zip(h2_coeffs(space, kj)) {
            *t += bj * y;
        }
    }
    Ok(Reconstruction {
        alpha: alpha_from_taylor(space, &taylor),
        taylor,
    })
}

/// Splits `f = sum_{n<N} alpha_n f_n` as `phi g + sum_j b_j K(., z_j)`.
pub fn decompose(space: &Space, alpha: &[Complex], method: BoundaryMethod) -> Result<Decomposition> {
    let len = alpha.len();
    let jj = space.j();
    if len < 4 * (jj + 1) {
        return Err(Error::config(format!("prefix of length {len} is too short to decompose")));
    }
    let kernels = kernel_coefficients(space, len);
    let (g, b, gram, fit_cond) = match method {
        BoundaryMethod::TailFit => {
            let g0 = bp_apply(space, alpha);
            let gk: Vec<Vec<Complex>> = kernels.iter().map(|k| bp_apply(space, k)).collect();
            let lo = len / 2;
            let m = CMatrix::from_fn(len - lo, jj, |r, j| gk[j][lo + r]);
            let rhs = CVector::from_fn(len - lo, |r, _| g0[lo + r]);
            let b: Vec<Complex> = least_squares(&m, &rhs)?.iter().copied().collect();
            let mut g = g0;
            for (gj, &bj) in gk.iter().zip(&b) {
                for (x, y) in g.iter_mut().zip(gj) {
                    *x -= bj * y;
                }
            }
            (g, b, None, Some(condition_number(&m)))
        }
        BoundaryMethod::Gram { tol } => {
            let gm = gram_matrix(space, tol)?;
            let b = boundary_coeffs(&boundary_values(space, alpha), &gm)?;
            let mut corrected = alpha.to_vec();
            for (kj, &bj) in kernels.iter().zip(&b) {
                for (x, y) in corrected.iter_mut().zip(kj) {
                    *x -= bj * y;
                }
            }
            let seq = PermissibleSequence::enforce_vanishing(space, corrected)?;
            (chat_apply(space, &seq)?, b, Some(gm.summary()), None)
        }
    };

    let f = h2_coeffs(space, alpha);
    let rebuilt = reconstruct(space, &g, &b, len)?;
    let residual = (0..=len - jj)
        .map(|m| (f[m] - rebuilt.taylor[m]).norm())
        .fold(0.0, f64::max);
    Ok(Decomposition {
        g,
        b,
        residual,
        gram,
        fit_cond,
    })
}

/// `B_n = [f_{n+r}(z_j)]_{r, j}` with its factors `D_1 C_n D_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSection {
    pub b: CMatrix,
    /// `C_n[r][j] = phi_j(a_{n+r} z_j) z_j^r`.
    pub c: CMatrix,
    /// `diag(1 - a_{n+r})`.
    pub d1: Vec<f64>,
    /// `diag(z_j^n)`.
    pub d2: Vec<Complex>,
    /// `V D_3` with `V[r][j] = z_j^r`, `D_3 = diag(phi_j(z_j))`.
    pub limit: CMatrix,
    pub cond: f64,
    pub invertible: bool,
}

impl FiniteSection {
    /// `max |C_n - V D_3|`.
    pub fn limit_gap(&self) -> f64 {
        (&self.c - &self.limit).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |B_n - D_1 C_n D_2|`.
    pub fn factor_residual(&self) -> f64 {
        let jj = self.b.nrows();
        let mut worst: f64 = 0.0;
        for r in 0..jj {
            for j in 0..jj {
                let v = self.d1[r] * self.c[(r, j)] * self.d2[j];
                worst = worst.max((v - self.b[(r, j)]).norm());
            }
        }
        worst
    }
}

/// `phi_j(x) = prod_{l != j} (1 - w_l x)`.
fn phi_without(space: &Space, j: usize, x: Complex) -> Complex {
    space
        .cfg()
        .conjugates()
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != j)
        .fold(Complex::new(1.0, 0.0), |acc, (_, &w)| acc * (1.0 - w * x))
}

/// Condition numbers above this count as singular in [`finite_section_matrix`].
pub const SECTION_COND_CAP: f64 = 1e12;

pub fn finite_section_matrix(space: &Space, n: usize) -> FiniteSection {
    let jj = space.j();
    let roots = space.cfg().roots();
    let pows: Vec<Vec<Complex>> = (0..jj).map(|j| crate::basis::root_powers(space, j, n + jj)).collect();
    let d1: Vec<f64> = (0..jj).map(|r| space.deficit(n + r)).collect();
    let d2: Vec<Complex> = (0..jj).map(|j| pows[j][n]).collect();
    let c = CMatrix::from_fn(jj, jj, |r, j| phi_without(space, j, roots[j] * space.a(n + r)) * pows[j][r]);
    let limit = CMatrix::from_fn(jj, jj, |r, j| pows[j][r] * phi_without(space, j, roots[j]));
    let rows = boundary_rows(space, n + jj);
    let b = CMatrix::from_fn(jj, jj, |r, j| rows[j][n + r]);
    let cond = condition_number(&b);
    FiniteSection {
        invertible: cond.is_finite() && cond <= SECTION_COND_CAP,
        b,
        c,
        d1,
        d2,
        limit,
        cond,
    }
}
