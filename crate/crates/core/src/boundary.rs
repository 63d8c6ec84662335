//! Boundary roots `z_j` on the unit circle and their conjugates `w_j = 1/z_j`.
//!
//! Roots are preferably given as rational angle fractions `q` with
//! `z = exp(2 pi i q)`. Keeping the fraction around makes the search for a
//! common return time of the powers `z_j^mu` exact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex;

pub const DEFAULT_TOL_UNIT: f64 = 1e-12;
pub const DEFAULT_TOL_SEP: f64 = 1e-9;

/// A reduced fraction `num/den` in `[0, 1)`, read as a fraction of a full turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Angle {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

impl Angle {
    /// Builds `num/den` reduced modulo one full turn. Negative numerators wrap.
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::config("angle denominator must be positive"));
        }
        let num = num.rem_euclid(den as i64) as u64;
        let g = gcd(num, den).max(1);
        Ok(Angle {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Fractional part of `mu * q`, computed exactly.
    pub fn times(&self, mu: u64) -> Angle {
        let num = ((self.num as u128 * mu as u128) % self.den as u128) as u64;
        let g = gcd(num, self.den).max(1);
        Angle {
            num: num / g,
            den: self.den / g,
        }
    }

    /// `exp(2 pi i q)`. Multiples of a quarter turn are returned exactly.
    pub fn to_unit(&self) -> Complex {
        if (4 * self.num).is_multiple_of(self.den) {
            return match 4 * self.num / self.den {
                0 => Complex::new(1.0, 0.0),
                1 => Complex::new(0.0, 1.0),
                2 => Complex::new(-1.0, 0.0),
                _ => Complex::new(0.0, -1.0),
            };
        }
        let theta = 2.0 * std::f64::consts::PI * (self.num as f64 / self.den as f64);
        Complex::new(theta.cos(), theta.sin())
    }

    /// `|exp(2 pi i q) - 1| = 2 |sin(pi q)|`, without forming the exponential.
    pub fn chord_to_one(&self) -> f64 {
        let x = self.num as f64 / self.den as f64;
        2.0 * (std::f64::consts::PI * x).sin().abs()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::config(format!("invalid angle fraction {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                Angle::new(n, d)
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Angle::new(n, 1)
            }
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The `J` distinct unimodular roots of `phi` and their conjugates.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryConfig {
    roots: Vec<Complex>,
    conjugates: Vec<Complex>,
    angles: Option<Vec<Angle>>,
    tol_unit: f64,
    tol_sep: f64,
}

impl BoundaryConfig {
    pub fn from_angles(angles: &[Angle]) -> Result<Self> {
        let roots: Vec<Complex> = angles.iter().map(Angle::to_unit).collect();
        let mut cfg = Self::build(roots, DEFAULT_TOL_UNIT, DEFAULT_TOL_SEP)?;
        cfg.angles = Some(angles.to_vec());
        Ok(cfg)
    }

    /// Convenience for tests and examples: `(num, den)` pairs.
    pub fn from_fractions(fractions: &[(i64, u64)]) -> Result<Self> {
        let angles = fractions
            .iter()
            .map(|&(n, d)| Angle::new(n, d))
            .collect::<Result<Vec<_>>>()?;
        Self::from_angles(&angles)
    }

    /// `j` distinct rational angles with denominators up to `max_den`.
    pub fn random_rational<R: rand::Rng + ?Sized>(rng: &mut R, j: usize, max_den: u64) -> Result<Self> {
        use rand::seq::SliceRandom;
        let mut pool: Vec<Angle> = Vec::new();
        for den in 1..=max_den {
            for num in 0..den {
                if gcd(num, den) == 1 {
                    pool.push(Angle::new(num as i64, den)?);
                }
            }
        }
        if j == 0 || j > pool.len() {
            return Err(Error::config(format!("cannot draw {j} distinct angles with denominators <= {max_den}")));
        }
        let angles: Vec<Angle> = pool.choose_multiple(rng, j).copied().collect();
        Self::from_angles(&angles)
    }

    pub fn from_points(points: &[Complex]) -> Result<Self> {
        Self::from_points_with_tolerances(points, DEFAULT_TOL_UNIT, DEFAULT_TOL_SEP)
    }

    pub fn from_points_with_tolerances(
        points: &[Complex],
        tol_unit: f64,
        tol_sep: f64,
    ) -> Result<Self> {
        Self::build(points.to_vec(), tol_unit, tol_sep)
    }

    fn build(roots: Vec<Complex>, tol_unit: f64, tol_sep: f64) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::config("at least one boundary root is required"));
        }
        for (j, z) in roots.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::config(format!("root {j} is not finite")));
            }
            if (z.norm() - 1.0).abs() > tol_unit {
                return Err(Error::config(format!(
                    "root {j} = {z} is not on the unit circle (|z| = {:.15})",
                    z.norm()
                )));
            }
        }
        for j in 0..roots.len() {
            for k in 0..j {
                let gap = (roots[j] - roots[k]).norm();
                if gap <= tol_sep {
                    return Err(Error::config(format!(
                        "roots {k} and {j} coincide (separation {gap:.3e} <= {tol_sep:.1e})"
                    )));
                }
            }
        }
        let conjugates: Vec<Complex> = roots.iter().map(|z| z.conj()).collect();
        for (z, w) in roots.iter().zip(&conjugates) {
            if ((z * w) - 1.0).norm() > tol_unit {
                return Err(Error::Internal("w_j z_j != 1".into()));
            }
        }
        Ok(BoundaryConfig {
            roots,
            conjugates,
            angles: None,
            tol_unit,
            tol_sep,
        })
    }

    /// Number of roots `J`.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Complex] {
        &self.roots
    }

    pub fn conjugates(&self) -> &[Complex] {
        &self.conjugates
    }

    pub fn angles(&self) -> Option<&[Angle]> {
        self.angles.as_deref()
    }

    pub fn tol_unit(&self) -> f64 {
        self.tol_unit
    }

    pub fn tol_sep(&self) -> f64 {
        self.tol_sep
    }

    /// Index of the root within `tol_unit` of `z`, if any.
    pub fn root_index(&self, z: Complex) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| (r - z).norm() <= self.tol_unit.max(1e-12))
    }

    /// Smallest pairwise root separation (infinite for `J = 1`).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for j in 0..self.roots.len() {
            for k in 0..j {
                best = best.min((self.roots[j] - self.roots[k]).norm());
            }
        }
        best
    }
}
