//! Column-segment storage for the lower-triangular matrices `L`, `C`, `B_p`
//! and the multiplication matrix, and for the upper-triangular `C-hat`.
//!
//! Each column keeps one contiguous run of rows. Entries outside the run are
//! zero, and entries at or beyond `nrows` are never stored.

use crate::linalg::CMatrix;
use crate::Complex;

/// A linear map that can be applied together with its adjoint.
pub trait Operator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[Complex]) -> Vec<Complex>;
    fn apply_adjoint(&self, y: &[Complex]) -> Vec<Complex>;
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Column {
    first_row: usize,
    values: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnBandMatrix {
    nrows: usize,
    cols: Vec<Column>,
}

impl ColumnBandMatrix {
    /// Builds an `nrows x ncols` matrix from a column generator returning
    /// `(first_row, values)`. Values falling past `nrows` are dropped.
    pub fn from_generator<F>(nrows: usize, ncols: usize, gen: F) -> Self
    where
        F: Fn(usize) -> (usize, Vec<Complex>),
    {
        let cols = (0..ncols).map(|n| Self::clip(nrows, gen(n))).collect();
        ColumnBandMatrix { nrows, cols }
    }

    /// Same as [`from_generator`](Self::from_generator), spreading columns
    /// over `threads` workers. The result does not depend on `threads`.
    pub fn from_generator_par<F>(nrows: usize, ncols: usize, threads: usize, gen: F) -> Self
    where
        F: Fn(usize) -> (usize, Vec<Complex>) + Sync,
    {
        let threads = threads.clamp(1, ncols.max(1));
        if threads == 1 {
            return Self::from_generator(nrows, ncols, gen);
        }
        let mut cols = vec![Column::default(); ncols];
        let gen = &gen;
        std::thread::scope(|scope| {
            // interleave so long and short columns are spread evenly
            let mut slots: Vec<Vec<(usize, &mut Column)>> = (0..threads).map(|_| Vec::new()).collect();
            for (n, col) in cols.iter_mut().enumerate() {
                slots[n % threads].push((n, col));
            }
            for slot in slots {
                scope.spawn(move || {
                    for (n, col) in slot {
                        *col = Self::clip(nrows, gen(n));
                    }
                });
            }
        });
        ColumnBandMatrix { nrows, cols }
    }

    fn clip(nrows: usize, (first_row, mut values): (usize, Vec<Complex>)) -> Column {
        let keep = nrows.saturating_sub(first_row).min(values.len());
        values.truncate(keep);
        Column { first_row, values }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Entry `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> Complex {
        let c = &self.cols[col];
        row.checked_sub(c.first_row)
            .and_then(|k| c.values.get(k).copied())
            .unwrap_or_default()
    }

    /// First stored row of column `n` and its stored values.
    pub fn column(&self, n: usize) -> (usize, &[Complex]) {
        let c = &self.cols[n];
        (c.first_row, &c.values)
    }

    /// Euclidean norm of every stored column.
    pub fn column_norms(&self) -> Vec<f64> {
        self.cols
            .iter()
            .map(|c| c.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    /// Leading `n x n` block.
    pub fn section(&self, n: usize) -> ColumnBandMatrix {
        let n_cols = n.min(self.cols.len());
        let cols = self.cols[..n_cols]
            .iter()
            .map(|c| Self::clip(n, (c.first_row, c.values.clone())))
            .collect();
        ColumnBandMatrix { nrows: n, cols }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.cols.len());
        for (n, c) in self.cols.iter().enumerate() {
            for (k, &v) in c.values.iter().enumerate() {
                m[(c.first_row + k, n)] = v;
            }
        }
        m
    }

    /// Adds `delta` to every stored entry on the main diagonal.
    pub fn shift_diagonal(&mut self, delta: Complex) {
        for (n, c) in self.cols.iter_mut().enumerate() {
            if let Some(k) = n.checked_sub(c.first_row) {
                if let Some(v) = c.values.get_mut(k) {
                    *v += delta;
                }
            }
        }
    }

    /// Drops the first subdiagonal from every column.
    pub fn remove_subdiagonal(&mut self) {
        for (n, c) in self.cols.iter_mut().enumerate() {
            if let Some(k) = (n + 1).checked_sub(c.first_row) {
                if let Some(v) = c.values.get_mut(k) {
                    *v = Complex::new(0.0, 0.0);
                }
            }
        }
    }
}

impl Operator for ColumnBandMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.cols.len()
    }

    fn apply(&self, x: &[Complex]) -> Vec<Complex> {
        let mut y = vec![Complex::new(0.0, 0.0); self.nrows];
        for (c, &xn) in self.cols.iter().zip(x) {
            if xn == Complex::new(0.0, 0.0) {
                continue;
            }
            for (yk, &v) in y[c.first_row..].iter_mut().zip(&c.values) {
                *yk += v * xn;
            }
        }
        y
    }

    fn apply_adjoint(&self, y: &[Complex]) -> Vec<Complex> {
        self.cols
            .iter()
            .map(|c| {
                c.values
                    .iter()
                    .zip(&y[c.first_row..])
                    .map(|(v, yk)| v.conj() * yk)
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn sample(n: usize) -> ColumnBandMatrix {
        ColumnBandMatrix::from_generator(n, n, |k| {
            (k, (0..4).map(|i| Complex::new((k + i) as f64, i as f64 - 1.0)).collect())
        })
    }

    #[test]
    fn apply_matches_dense() {
        let m = sample(7);
        let d = m.to_dense();
        let x: Vec<Complex> = (0..7).map(|i| Complex::new(i as f64, 1.0)).collect();
        let y = m.apply(&x);
        let yd = &d * CVector::from_vec(x.clone());
        for i in 0..7 {
            assert!((y[i] - yd[i]).norm() < 1e-12);
        }
        let z = m.apply_adjoint(&x);
        let zd = d.adjoint() * CVector::from_vec(x);
        for i in 0..7 {
            assert!((z[i] - zd[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn clipping_and_sections() {
        let m = sample(5);
        assert_eq!(m.column(4).1.len(), 1);
        assert_eq!(m.get(4, 3), m.to_dense()[(4, 3)]);
        let s = m.section(3);
        assert_eq!(s.nrows(), 3);
        assert_eq!(s.to_dense(), m.to_dense().view((0, 0), (3, 3)).into_owned());
    }

    #[test]
    fn parallel_generation_is_identical() {
        let gen = |k: usize| (k, vec![c(k as f64); 3]);
        let a = ColumnBandMatrix::from_generator(50, 50, gen);
        let b = ColumnBandMatrix::from_generator_par(50, 50, 4, gen);
        assert_eq!(a, b);
    }

    #[test]
    fn diagonal_edits() {
        let mut m = ColumnBandMatrix::from_generator(4, 4, |k| (k, vec![c(1.0), c(2.0)]));
        m.shift_diagonal(c(-1.0));
        m.remove_subdiagonal();
        assert_eq!(m.column_norms(), vec![0.0; 4]);
    }
}
