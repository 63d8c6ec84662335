//! Thin wrappers over nalgebra for the dense problems that show up: spectral
//! norms, small pivoted solves with a condition cap, least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::Complex;

pub type CMatrix = DMatrix<Complex>;
pub type CVector = DVector<Complex>;

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// 2-norm condition number from the singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `m x = rhs` by partially pivoted LU after checking the condition
/// number against `cap`. Returns the solution and the condition number.
pub fn solve_capped(m: &CMatrix, rhs: &CVector, cap: f64) -> Result<(CVector, f64)> {
    if !m.is_square() || m.nrows() != rhs.len() {
        return Err(Error::Internal(format!(
            "solve: {}x{} system with {} right-hand entries",
            m.nrows(),
            m.ncols(),
            rhs.len()
        )));
    }
    let cond = condition_number(m);
    if !(cond <= cap) {
        return Err(Error::IllConditioned { cond, cap });
    }
    let x = m
        .clone()
        .lu()
        .solve(rhs)
        .ok_or(Error::IllConditioned {
            cond: f64::INFINITY,
            cap,
        })?;
    Ok((x, cond))
}

/// Minimum-norm least-squares solution of `m x ~ rhs`.
pub fn least_squares(m: &CMatrix, rhs: &CVector) -> Result<CVector> {
    m.clone()
        .svd(true, true)
        .solve(rhs, 1e-14)
        .map_err(|e| Error::Internal(format!("least squares: {e}")))
}

/// Smallest eigenvalue of a Hermitian matrix (the Hermitian part is used).
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()) * Complex::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Vector 2-norm of a complex slice.
pub fn norm2(v: &[Complex]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
