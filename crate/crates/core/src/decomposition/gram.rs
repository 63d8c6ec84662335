//! Kernel values between the boundary roots and the solve for the boundary
//! coefficients `b`.

use serde::{Deserialize, Serialize};

use crate::basis::kernel_eval;
use crate::error::{Error, Result};
use crate::linalg::{condition_number, solve_capped, CMatrix, CVector};
use crate::{Complex, Space};

/// Condition-number cap for the boundary solve.
pub const GRAM_COND_CAP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    /// `a[(i, j)] = K(z_i, z_j)`.
    pub a: CMatrix,
    /// Tail bound of each entry, row-major.
    pub tail_bounds: Vec<f64>,
    pub cond: f64,
    /// `max |a_ij - conj(a_ji)|`.
    pub hermitian_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GramSummary {
    pub cond: f64,
    pub hermitian_defect: f64,
    pub max_tail_bound: f64,
}

impl GramMatrix {
    pub fn summary(&self) -> GramSummary {
        GramSummary {
            cond: self.cond,
            hermitian_defect: self.hermitian_defect,
            max_tail_bound: self.tail_bounds.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// Kernel values at all pairs of roots, each to within `tol`.
pub fn gram_matrix(space: &Space, tol: f64) -> Result<GramMatrix> {
    let jj = space.j();
    let roots = space.cfg().roots();
    let mut a = CMatrix::zeros(jj, jj);
    let mut tail_bounds = vec![0.0; jj * jj];
    for i in 0..jj {
        for j in 0..jj {
            let kv = kernel_eval(space, roots[i], roots[j], tol)?;
            a[(i, j)] = kv.value;
            tail_bounds[i * jj + j] = kv.tail_bound;
        }
    }
    let mut defect: f64 = 0.0;
    for i in 0..jj {
        for j in 0..jj {
            defect = defect.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    let allowed = 2.0 * (jj * jj) as f64 * tol;
    if defect > allowed {
        return Err(Error::Internal(format!(
            "kernel matrix not Hermitian: defect {defect:.3e} above {allowed:.1e}"
        )));
    }
    Ok(GramMatrix {
        cond: condition_number(&a),
        a,
        tail_bounds,
        hermitian_defect: defect,
    })
}

/// Solves `sum_j b_j K(z_i, z_j) = f(z_i)`, so that `f - sum_j b_j K(., z_j)`
/// vanishes at every root.
pub fn boundary_coeffs(f_values: &[Complex], gram: &GramMatrix) -> Result<Vec<Complex>> {
    if f_values.len() != gram.a.nrows() {
        return Err(Error::config(format!(
            "{} boundary values for {} roots",
            f_values.len(),
            gram.a.nrows()
        )));
    }
    let (b, _) = solve_capped(&gram.a, &CVector::from_column_slice(f_values), GRAM_COND_CAP)?;
    Ok(b.iter().copied().collect())
}
