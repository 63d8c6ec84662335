//! The two encodings of `alpha -> g`: the lower-triangular `B_p` (valid for
//! every sequence) and the upper-triangular `C-hat` (valid on sequences whose
//! function vanishes at the roots).

use serde::{Deserialize, Serialize};

use super::gram::GRAM_COND_CAP;
use super::polys::q_weights;
use crate::banded::ColumnBandMatrix;
use crate::basis::{boundary_rows, root_powers, CompensatedSum};
use crate::error::{Error, Result};
use crate::linalg::{solve_capped, CMatrix, CVector};
use crate::recursion::PowerTable;
use crate::{Complex, Space};

/// Target for `max_j |sum_n alpha_n f_n(z_j)|` after enforcement.
pub const ENFORCE_TOL: f64 = 1e-10;

const ENFORCE_ROUNDS: usize = 4;

/// A coefficient prefix `alpha_0..alpha_N`, optionally certified to vanish at
/// the roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermissibleSequence {
    alpha: Vec<Complex>,
    vanishing: bool,
    residual: Option<f64>,
}

impl PermissibleSequence {
    /// An unflagged sequence.
    pub fn new(alpha: Vec<Complex>) -> Self {
        PermissibleSequence {
            alpha,
            vanishing: false,
            residual: None,
        }
    }

    /// Measures the boundary values and sets the flag if they are within
    /// [`ENFORCE_TOL`].
    pub fn checked(space: &Space, alpha: Vec<Complex>) -> Self {
        let r = max_abs(&boundary_values(space, &alpha));
        PermissibleSequence {
            alpha,
            vanishing: r <= ENFORCE_TOL,
            residual: Some(r),
        }
    }

    /// Orthogonal projection of `alpha` onto the prefixes that vanish at every
    /// root: `alpha - W^* (W W^*)^{-1} W alpha` with `W[j][n] = f_n(z_j)`.
    pub fn enforce_vanishing(space: &Space, alpha: Vec<Complex>) -> Result<Self> {
        let w = boundary_rows(space, alpha.len());
        let jj = w.len();
        let mut gram = CMatrix::zeros(jj, jj);
        for i in 0..jj {
            for j in 0..jj {
                gram[(i, j)] = dot(&w[i], &w[j]);
            }
        }
        let mut alpha = alpha;
        let mut r = max_abs(&apply_rows(&w, &alpha));
        for _ in 0..ENFORCE_ROUNDS {
            if r <= ENFORCE_TOL {
                break;
            }
            let rhs = CVector::from_vec(apply_rows(&w, &alpha));
            let (x, _) = solve_capped(&gram, &rhs, GRAM_COND_CAP)?;
            for (j, row) in w.iter().enumerate() {
                for (a, f) in alpha.iter_mut().zip(row) {
                    *a -= f.conj() * x[j];
                }
            }
            r = max_abs(&apply_rows(&w, &alpha));
        }
        Ok(PermissibleSequence {
            alpha,
            vanishing: r <= ENFORCE_TOL,
            residual: Some(r),
        })
    }

    pub fn alpha(&self) -> &[Complex] {
        &self.alpha
    }

    pub fn into_alpha(self) -> Vec<Complex> {
        self.alpha
    }

    pub fn is_vanishing(&self) -> bool {
        self.vanishing
    }

    /// `max_j |sum_n alpha_n f_n(z_j)|` when it was measured.
    pub fn residual(&self) -> Option<f64> {
        self.residual
    }
}

/// `sum_{n<N} conj(x_n) y_n`, as `<y, x>`.
fn dot(x: &[Complex], y: &[Complex]) -> Complex {
    let mut acc = CompensatedSum::new();
    for (a, b) in x.iter().zip(y) {
        acc.add(a * b.conj());
    }
    acc.value()
}

fn apply_rows(w: &[Vec<Complex>], alpha: &[Complex]) -> Vec<Complex> {
    w.iter()
        .map(|row| {
            let mut acc = CompensatedSum::new();
            for (f, a) in row.iter().zip(alpha) {
                acc.add(f * a);
            }
            acc.value()
        })
        .collect()
}

fn max_abs(v: &[Complex]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `f(z_j) = sum_{n<N} alpha_n f_n(z_j)` from the prefix.
pub fn boundary_values(space: &Space, alpha: &[Complex]) -> Vec<Complex> {
    apply_rows(&boundary_rows(space, alpha.len()), alpha)
}

/// `B_j(N)` with `|sum_{n>=N} alpha_n f_n(z_j)| <= B_j(N) ||alpha_{>=N}||`, or
/// `None` when the squared deficits are not summable.
pub fn boundary_tail_factor(space: &Space, j: usize, n: usize) -> Option<f64> {
    let tail = if n == 0 {
        space.deficit(0).powi(2) + space.weights().deficit_sq_tail(0)?
    } else {
        space.weights().deficit_sq_tail(n - 1)?
    };
    let d = space.weights().sup_deficit_from(n);
    let z = space.cfg().roots()[j];
    let c: f64 = space
        .cfg()
        .conjugates()
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != j)
        .map(|(_, &wl)| (Complex::new(1.0, 0.0) - wl * z).norm() + d)
        .product();
    Some(c * tail.sqrt())
}

/// `g = B_p alpha` by the recursion
/// `g_n = alpha_n + sum_{k=1}^{J} beta_k (a_{n-k}^k alpha_{n-k} - g_{n-k})`.
pub fn bp_apply(space: &Space, alpha: &[Complex]) -> Vec<Complex> {
    let jj = space.j();
    let pw = PowerTable::new(space, alpha.len());
    let mut g: Vec<Complex> = Vec::with_capacity(alpha.len());
    for n in 0..alpha.len() {
        let mut v = alpha[n];
        for k in 1..=jj.min(n) {
            v += space.beta(k) * (alpha[n - k] * pw.get(n - k, k) - g[n - k]);
        }
        g.push(v);
    }
    g
}

/// `g = C-hat alpha`, i.e. `g_n = alpha_n - sum_{k>=n} Q_{n-1-k}(a_k) alpha_k`.
///
/// Since `Q_{n-1-k}(a_k) = sum_j gamma_j z_j^{1-n} f_k(z_j)`, each row is a
/// suffix sum of `f_k(z_j) alpha_k`.
pub fn chat_apply(space: &Space, seq: &PermissibleSequence) -> Result<Vec<Complex>> {
    if !seq.is_vanishing() {
        return Err(Error::precondition(
            "C-hat encodes only sequences vanishing at the roots; enforce or check them first",
        ));
    }
    let alpha = seq.alpha();
    let len = alpha.len();
    let gamma = q_weights(space)?;
    let w = boundary_rows(space, len);
    let mut g = alpha.to_vec();
    for (j, row) in w.iter().enumerate() {
        let inv = root_powers(space, j, len + 1);
        let mut suffix = CompensatedSum::new();
        for n in (0..len).rev() {
            suffix.add(row[n] * alpha[n]);
            // z_j^{1-n} = conj(z_j^{n-1}); for n = 0 this is z_j
            let zp = if n == 0 { space.cfg().roots()[j] } else { inv[n - 1].conj() };
            g[n] -= gamma[j] * zp * suffix.value();
        }
    }
    Ok(g)
}

/// The `size x size` section of `B_p`, with `p_{n-k}(a_k)` at `(n, k)`.
pub fn bp_matrix(space: &Space, size: usize) -> ColumnBandMatrix {
    let jj = space.j();
    ColumnBandMatrix::from_generator(size, size, |k| {
        let a = space.a(k);
        let mut col: Vec<Complex> = Vec::with_capacity(size - k);
        for n in 0..size - k {
            let mut v = if n <= jj { space.beta(n) * a.powi(n as i32) } else { Complex::new(0.0, 0.0) };
            for i in 1..=jj.min(n) {
                v -= space.beta(i) * col[n - i];
            }
            if n == 0 {
                v = Complex::new(1.0, 0.0);
            }
            col.push(v);
        }
        (k, col)
    })
}

/// Column `k` of `C-hat` above and on the diagonal: entry `n <= k` is
/// `delta_{nk} - Q_{n-1-k}(a_k)`.
pub fn chat_column(space: &Space, gamma: &[Complex], k: usize) -> Vec<Complex> {
    let a = space.a(k);
    let mut col = vec![Complex::new(0.0, 0.0); k + 1];
    col[k] = Complex::new(1.0, 0.0);
    for (j, &z) in space.cfg().roots().iter().enumerate() {
        let c = gamma[j] * space.phi().eval(z * a);
        // w^{n-1-k} = z^{k+1-n}, walked from n = k downwards
        let pows = root_powers(space, j, k + 2);
        for (n, entry) in col.iter_mut().enumerate() {
            *entry -= c * pows[k + 1 - n];
        }
    }
    col
}

/// The `size x size` section of `C-hat`.
pub fn chat_matrix(space: &Space, size: usize) -> Result<ColumnBandMatrix> {
    let gamma = q_weights(space)?;
    Ok(ColumnBandMatrix::from_generator(size, size, |k| (0, chat_column(space, &gamma, k))))
}

/// Euclidean norms of the first `size` columns of `C-hat`.
pub fn chat_column_norms(space: &Space, size: usize) -> Result<Vec<f64>> {
    let gamma = q_weights(space)?;
    Ok((0..size)
        .map(|k| chat_column(space, &gamma, k).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .collect())
}
