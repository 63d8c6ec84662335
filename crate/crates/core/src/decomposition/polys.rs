//! The polynomial families `p_n` (entries of `B_p`) and `Q_n` (the row
//! corrections that turn `B_p` into the upper-triangular `C-hat`).

use crate::error::Result;
use crate::poly::Poly;
use crate::symmetric::mu_weights;
use crate::{Complex, Space};

/// `p_0 = 1`, `p_n = beta_n x^n - sum_{i=1}^{n} beta_i p_{n-i}` (with
/// `beta_i = 0` past `J`, so the tail is the homogeneous rule).
pub fn p_polynomials(space: &Space, n_max: usize) -> Vec<Poly> {
    let jj = space.j();
    let mut out: Vec<Poly> = Vec::with_capacity(n_max + 1);
    out.push(Poly::one());
    for n in 1..=n_max {
        let mut p = if n <= jj {
            Poly::monomial(n, space.beta(n))
        } else {
            Poly::zero()
        };
        for i in 1..=n.min(jj) {
            p = &p - &out[n - i].scale(space.beta(i));
        }
        out.push(p);
    }
    out
}

/// `gamma_j = w_j^J / mu_j`.
pub fn q_weights(space: &Space) -> Result<Vec<Complex>> {
    let jj = space.j() as i32;
    Ok(space
        .cfg()
        .conjugates()
        .iter()
        .zip(mu_weights(space.cfg())?)
        .map(|(&w, mu)| w.powi(jj) / mu)
        .collect())
}

/// `Q_n(x) = sum_j gamma_j w_j^n phi(x z_j)` for any integer `n`.
pub fn q_polynomial(space: &Space, n: i64) -> Result<Poly> {
    let gamma = q_weights(space)?;
    let mut q = Poly::zero();
    for ((&z, &w), g) in space.cfg().roots().iter().zip(space.cfg().conjugates()).zip(gamma) {
        q = &q + &space.phi().scale_arg(z).scale(g * pow_int(w, n));
    }
    Ok(q)
}

/// `w^n` for a unimodular `w` and any integer `n`.
pub(crate) fn pow_int(w: Complex, n: i64) -> Complex {
    if n >= 0 {
        w.powu(n as u32)
    } else {
        w.conj().powu(n.unsigned_abs() as u32)
    }
}

/// `Q_n(x)` evaluated without forming the polynomial.
pub fn q_eval(space: &Space, gamma: &[Complex], n: i64, x: f64) -> Complex {
    space
        .cfg()
        .roots()
        .iter()
        .zip(space.cfg().conjugates())
        .zip(gamma)
        .map(|((&z, &w), &g)| g * pow_int(w, n) * space.phi().eval(z * x))
        .sum()
}

/// `|sum_{i=0}^{n} beta_i Q_{n-i}(x) - beta_{n+1}(x^{n+1} - 1)|`.
pub fn q_recursion_residual(space: &Space, n: usize, x: Complex) -> Result<f64> {
    let mut lhs = Complex::new(0.0, 0.0);
    for i in 0..=n.min(space.j()) {
        lhs += space.beta(i) * q_polynomial(space, (n - i) as i64)?.eval(x);
    }
    let rhs = space.beta(n + 1) * (x.powu(n as u32 + 1) - 1.0);
    Ok((lhs - rhs).norm())
}

/// Measured `c = max |Q_n(a_m)| / |1 - a_m|` over `|n| <= n_max`,
/// `m < m_max`.
pub fn q_bound_constant(space: &Space, n_max: i64, m_max: usize) -> Result<f64> {
    let gamma = q_weights(space)?;
    let mut best: f64 = 0.0;
    for m in 0..m_max {
        let a = space.a(m);
        let d = space.deficit(m).abs();
        // phi(a z_j) = (1 - a) phi_j(a z_j): evaluate the scaled values once
        let vals: Vec<Complex> = space.cfg().roots().iter().map(|&z| space.phi().eval(z * a)).collect();
        for n in -n_max..=n_max {
            let q: Complex = space
                .cfg()
                .conjugates()
                .iter()
                .zip(&gamma)
                .zip(&vals)
                .map(|((&w, &g), &v)| g * pow_int(w, n) * v)
                .sum();
            best = best.max(q.norm() / d);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recursion::c_column;
    use crate::{BoundaryConfig, WeightSequence};

    fn space(fr: &[(i64, u64)]) -> Space {
        Space::new(
            BoundaryConfig::from_fractions(fr).unwrap(),
            WeightSequence::harmonic(1.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn first_p_polynomials() {
        let s = space(&[(1, 5), (1, 2), (2, 3)]);
        let p = p_polynomials(&s, 4);
        assert_eq!(p[0], Poly::one());
        // p_1(x) = -beta_1 (1 - x)
        let b1 = s.beta(1);
        for x in [0.0, 0.3, 0.9] {
            assert!((p[1].eval_real(x) + b1 * (1.0 - x)).norm() < 1e-15);
        }
    }

    #[test]
    fn p_polynomials_are_columns_of_the_inverse_of_c() {
        let s = space(&[(0, 1)]);
        let p = p_polynomials(&s, 32);
        for k in 0..=32 {
            // B_p C = I, with column k of B_p holding p_n(a_k) at row n + k
            let col = c_column(&s, k, 32);
            for n in 0..=32 {
                let entry: Complex = (0..=n).map(|m| p[n - m].eval_real(s.a(k + m)) * col[m]).sum();
                let expect = if n == 0 { 1.0 } else { 0.0 };
                assert!((entry - expect).norm() < 1e-13, "k={k} n={n}: {entry}");
            }
        }
    }

    #[test]
    fn q_zero_for_one_root() {
        let s = space(&[(0, 1)]);
        let q0 = q_polynomial(&s, 0).unwrap();
        assert!((&q0 - &Poly::from_real(&[1.0, -1.0])).max_abs_coeff() < 1e-15);
        assert!(q_recursion_residual(&s, 0, Complex::new(0.4, 0.1)).unwrap() < 1e-15);
    }

    #[test]
    fn p_and_q_agree() {
        let s = space(&[(1, 7), (3, 5), (5, 6)]);
        let p = p_polynomials(&s, 12);
        for m in 1..=12 {
            let q = q_polynomial(&s, m as i64 - 1).unwrap();
            assert!((&p[m] - &q).max_abs_coeff() < 1e-12, "m={m}");
        }
    }
}
