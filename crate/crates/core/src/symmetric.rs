//! The boundary polynomial `phi(z) = prod_j (1 - w_j z)` and the symmetric
//! functions of the conjugate roots used by the Q-polynomial identities.

use crate::boundary::BoundaryConfig;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::Complex;

/// `phi(z) = prod_j (1 - w_j z) = sum_k beta_k z^k`, with `beta_0 = 1`.
pub fn phi_from_roots(cfg: &BoundaryConfig) -> Poly {
    let mut coeffs = vec![Complex::new(1.0, 0.0)];
    for &w in cfg.conjugates() {
        let mut next = vec![Complex::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= w * c;
        }
        coeffs = next;
    }
    Poly::new(coeffs)
}

/// Elementary symmetric polynomials `e_0 .. e_J` of `points`.
pub fn elementary_symmetric(points: &[Complex]) -> Vec<Complex> {
    let mut e = vec![Complex::new(1.0, 0.0)];
    for &x in points {
        e.push(Complex::new(0.0, 0.0));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1];
            e[k] += x * prev;
        }
    }
    e
}

/// `h_0 .. h_{k_max}` via `h_k = sum_{i=1}^{J} (-1)^{i+1} e_i h_{k-i}`.
pub fn homogeneous_sequence(k_max: usize, points: &[Complex]) -> Vec<Complex> {
    let e = elementary_symmetric(points);
    let mut h = Vec::with_capacity(k_max + 1);
    h.push(Complex::new(1.0, 0.0));
    for k in 1..=k_max {
        let mut acc = Complex::new(0.0, 0.0);
        for i in 1..=points.len().min(k) {
            let term = e[i] * h[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        h.push(acc);
    }
    h
}

/// Complete homogeneous symmetric polynomial `h_k`; zero for `k < 0`.
pub fn homogeneous_symmetric(k: i64, points: &[Complex]) -> Complex {
    if k < 0 {
        return Complex::new(0.0, 0.0);
    }
    homogeneous_sequence(k as usize, points)[k as usize]
}

/// `mu_j = prod_{k != j} (w_j - w_k)`.
pub fn mu_weights(cfg: &BoundaryConfig) -> Result<Vec<Complex>> {
    let w = cfg.conjugates();
    let floor = cfg.tol_sep().powi(w.len().saturating_sub(1) as i32);
    w.iter()
        .enumerate()
        .map(|(j, &wj)| {
            let mu = w
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(Complex::new(1.0, 0.0), |acc, (_, &wk)| acc * (wj - wk));
            if mu.norm() < floor {
                Err(Error::config(format!(
                    "mu_{j} = {mu} vanishes: roots are not separated"
                )))
            } else {
                Ok(mu)
            }
        })
        .collect()
}

/// `sum_j w_j^m / mu_j`, which equals `h_{m-J+1}(w_1..w_J)`.
pub fn louck_power_sum(m: usize, cfg: &BoundaryConfig) -> Result<Complex> {
    let mu = mu_weights(cfg)?;
    Ok(cfg
        .conjugates()
        .iter()
        .zip(&mu)
        .map(|(&w, &mu)| w.powu(m as u32) / mu)
        .sum())
}

/// `|sum_j w_j^m / mu_j - h_{m-J+1}(w)|`.
pub fn louck_residual(m: usize, cfg: &BoundaryConfig) -> Result<f64> {
    let lhs = louck_power_sum(m, cfg)?;
    let rhs = homogeneous_symmetric(m as i64 - cfg.len() as i64 + 1, cfg.conjugates());
    Ok((lhs - rhs).norm())
}

/// `|sum_{i=0}^{m} beta_i h_{m-i}(w)|`, which vanishes for `m >= 1`.
pub fn homogeneous_sum_residual(m: usize, cfg: &BoundaryConfig) -> f64 {
    let phi = phi_from_roots(cfg);
    let h = homogeneous_sequence(m, cfg.conjugates());
    (0..=m)
        .map(|i| phi.coeff(i) * h[m - i])
        .sum::<Complex>()
        .norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(fr: &[(i64, u64)]) -> BoundaryConfig {
        BoundaryConfig::from_fractions(fr).unwrap()
    }

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn phi_examples() {
        let p = phi_from_roots(&cfg(&[(0, 1), (1, 2)]));
        assert_eq!(p, Poly::from_real(&[1.0, 0.0, -1.0]));
        let p = phi_from_roots(&cfg(&[(0, 1)]));
        assert_eq!(p, Poly::from_real(&[1.0, -1.0]));
        // cube roots of unity: direct multiplication of (1 - w z) factors
        let p = phi_from_roots(&cfg(&[(0, 1), (1, 3), (2, 3)]));
        let expect = [1.0, 0.0, 0.0, -1.0];
        for (k, &e) in expect.iter().enumerate() {
            assert!(close(p.coeff(k), Complex::new(e, 0.0), 1e-15), "k={k}: {}", p.coeff(k));
        }
    }

    #[test]
    fn phi_leading_coefficient_is_product_of_negated_conjugates() {
        let c = cfg(&[(1, 5), (2, 7), (5, 6)]);
        let p = phi_from_roots(&c);
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.coeff(0), Complex::new(1.0, 0.0));
        let prod: Complex = c.conjugates().iter().map(|w| -w).product();
        assert!(close(p.coeff(3), prod, 1e-15));
    }

    #[test]
    fn homogeneous_examples() {
        let pts = [Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)];
        assert_eq!(homogeneous_symmetric(-1, &pts), Complex::new(0.0, 0.0));
        assert_eq!(homogeneous_symmetric(0, &pts), Complex::new(1.0, 0.0));
        assert!(close(homogeneous_symmetric(1, &pts), Complex::new(0.0, 0.0), 1e-15));
        assert!(close(homogeneous_symmetric(2, &pts), Complex::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_weights(&cfg(&[(0, 1)])).unwrap(), vec![Complex::new(1.0, 0.0)]);
        let mu = mu_weights(&cfg(&[(0, 1), (1, 2)])).unwrap();
        assert!(close(mu[0], Complex::new(2.0, 0.0), 1e-15));
        assert!(close(mu[1], Complex::new(-2.0, 0.0), 1e-15));
        for m in mu_weights(&cfg(&[(0, 1), (1, 3), (2, 3)])).unwrap() {
            assert!((m.norm() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn louck_examples() {
        let c = cfg(&[(0, 1), (1, 2)]);
        assert!(close(louck_power_sum(2, &c).unwrap(), Complex::new(0.0, 0.0), 1e-15));
        assert!(close(louck_power_sum(3, &c).unwrap(), Complex::new(1.0, 0.0), 1e-15));
        let c1 = cfg(&[(3, 7)]);
        assert!(close(louck_power_sum(0, &c1).unwrap(), Complex::new(1.0, 0.0), 1e-15));
    }
}
