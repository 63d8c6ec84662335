//! Dense complex polynomials in ascending-degree coefficient form.

use std::ops::{Add, Mul, Neg, Sub};

use crate::Complex;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    /// Builds a polynomial, dropping exactly-zero leading coefficients.
    pub fn new(coeffs: Vec<Complex>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Complex::new(1.0, 0.0))
    }

    pub fn constant(c: Complex) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Complex) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == Complex::new(0.0, 0.0)) {
            self.coeffs.pop();
        }
    }

    /// Drops leading coefficients with modulus at most `tol`.
    pub fn trimmed(mut self, tol: f64) -> Self {
        while self.coeffs.last().is_some_and(|c| c.norm() <= tol) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; zero outside the stored range.
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn eval_real(&self, x: f64) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// `x -> p(s x)`.
    pub fn scale_arg(&self, s: Complex) -> Poly {
        let mut pow = Complex::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * pow);
            pow *= s;
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: Complex) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest coefficient modulus (the sup norm of the coefficient vector).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Free-function form of [`Poly::eval`].
pub fn eval_poly(poly: &Poly, x: Complex) -> Complex {
    poly.eval(x)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn normalization_drops_zero_leading_terms() {
        let p = Poly::new(vec![c(1.0), c(2.0), c(0.0), c(0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Poly::new(vec![c(0.0)]).degree(), None);
    }

    #[test]
    fn horner_matches_expanded_form() {
        let p = Poly::from_real(&[1.0, 0.0, -1.0]);
        assert_eq!(p.eval(c(1.0)), c(0.0));
        assert_eq!(p.eval(c(0.0)), c(1.0));
        assert!((p.eval(c(0.5)) - c(0.75)).norm() < 1e-15);
        let z = Complex::new(0.3, -0.7);
        assert!((p.eval(z) - (1.0 - z * z)).norm() < 1e-15);
    }

    #[test]
    fn arithmetic() {
        let a = Poly::from_real(&[1.0, -1.0]);
        let b = Poly::from_real(&[1.0, 1.0]);
        assert_eq!(&a * &b, Poly::from_real(&[1.0, 0.0, -1.0]));
        assert_eq!(&a + &b, Poly::from_real(&[2.0]));
        assert_eq!(&a - &a, Poly::zero());
        assert_eq!((&a * &b).derivative(), Poly::from_real(&[0.0, -2.0]));
        assert_eq!(a.scale_arg(c(2.0)), Poly::from_real(&[1.0, -2.0]));
    }
}
