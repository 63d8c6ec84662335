//! Finite-bandwidth reproducing kernels built from a polynomial with roots on
//! the unit circle.
//!
//! Given distinct unimodular roots `z_1..z_J` and weights `a_n -> 1`, the
//! functions `f_n(z) = z^n phi(a_n z)` with `phi(z) = prod (1 - conj(z_j) z)`
//! form an orthonormal basis of a space `H(K)`. This crate evaluates the
//! kernel, runs the banded coefficient recursions relating `H(K)` to the Hardy
//! space, estimates the norms of the resulting operators and computes the
//! decomposition `H(K) = phi H^2 + span K(., z_j)`.

pub mod banded;
pub mod basis;
pub mod boundary;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod linalg;
pub mod multiplier;
pub mod poly;
pub mod recursion;
pub mod symmetric;
pub mod weights;

pub use boundary::{Angle, BoundaryConfig};
pub use error::{Error, Result};
pub use poly::Poly;
pub use weights::{TailRule, WeightSequence};

pub type Complex = num_complex::Complex64;

/// Roots, weights and the boundary polynomial, bundled once so that `beta_k`
/// is not recomputed by every routine.
#[derive(Debug, Clone)]
pub struct Space {
    cfg: BoundaryConfig,
    weights: WeightSequence,
    phi: Poly,
}

impl Space {
    pub fn new(cfg: BoundaryConfig, weights: WeightSequence) -> Result<Self> {
        weights.validate()?;
        let phi = symmetric::phi_from_roots(&cfg);
        if phi.degree() != Some(cfg.len()) {
            return Err(Error::Internal("phi has the wrong degree".into()));
        }
        Ok(Space { cfg, weights, phi })
    }

    pub fn cfg(&self) -> &BoundaryConfig {
        &self.cfg
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn phi(&self) -> &Poly {
        &self.phi
    }

    /// Number of roots `J`.
    pub fn j(&self) -> usize {
        self.cfg.len()
    }

    /// `beta_k`, zero outside `0..=J`.
    pub fn beta(&self, k: usize) -> Complex {
        self.phi.coeff(k)
    }

    /// `a_n`.
    pub fn a(&self, n: usize) -> f64 {
        self.weights.a(n)
    }

    /// `1 - a_n`.
    pub fn deficit(&self, n: usize) -> f64 {
        self.weights.deficit(n)
    }
}
