//! The basis `f_n(z) = z^n phi(a_n z)`, kernel evaluation with certified
//! truncation bounds, natural-domain diagnostics and the coefficient map into
//! the Hardy space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Complex, Space};

/// Recompute running powers from scratch this often to stop rounding drift.
const RESEED_EVERY: usize = 4096;
/// Largest truncation index the kernel evaluator will try.
pub const MAX_KERNEL_TERMS: usize = 1 << 31;

/// Compensated (Neumaier) summation of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex,
    comp: Complex,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex) {
        self.sum.re = neumaier(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = neumaier(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex {
        self.sum + self.comp
    }
}

fn neumaier(sum: f64, x: f64, comp: &mut f64) -> f64 {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *comp += (sum - t) + x;
    } else {
        *comp += (x - t) + sum;
    }
    t
}

/// Taylor coefficients of `f_n`: `beta_k a_n^k` at degrees `n..=n+J`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub n: usize,
    pub taylor: Vec<Complex>,
}

impl BasisElement {
    /// Coefficient of `z^degree`.
    pub fn coeff(&self, degree: usize) -> Complex {
        degree
            .checked_sub(self.n)
            .and_then(|k| self.taylor.get(k).copied())
            .unwrap_or_default()
    }
}

pub fn basis_coeffs(space: &Space, n: usize) -> BasisElement {
    let a = space.a(n);
    let mut pow = 1.0;
    let mut taylor = Vec::with_capacity(space.j() + 1);
    for k in 0..=space.j() {
        taylor.push(space.beta(k) * pow);
        pow *= a;
    }
    BasisElement { n, taylor }
}

/// Where a point sits relative to the natural domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointKind {
    /// `|z| < 1`, carrying `|z|`.
    Interior(f64),
    /// `z = z_j`.
    Special(usize),
    Outside,
}

pub fn classify(space: &Space, z: Complex) -> PointKind {
    if let Some(j) = space.cfg().root_index(z) {
        return PointKind::Special(j);
    }
    let r = z.norm();
    if r < 1.0 {
        PointKind::Interior(r)
    } else {
        PointKind::Outside
    }
}

/// `phi(a z)` in product form. At a root the vanishing factor is replaced by
/// the exact deficit `1 - a_n`, avoiding cancellation.
fn phi_scaled(space: &Space, n: usize, z: Complex, kind: PointKind) -> Complex {
    let a = space.a(n);
    let w = space.cfg().conjugates();
    match kind {
        PointKind::Special(j) => {
            let mut prod = Complex::new(space.deficit(n), 0.0);
            for (l, &wl) in w.iter().enumerate() {
                if l != j {
                    prod *= Complex::new(1.0, 0.0) - wl * z * a;
                }
            }
            prod
        }
        _ => w
            .iter()
            .fold(Complex::new(1.0, 0.0), |acc, &wl| acc * (Complex::new(1.0, 0.0) - wl * z * a)),
    }
}

/// `f_n(z)`.
pub fn eval_f(space: &Space, n: usize, z: Complex) -> Complex {
    let kind = classify(space, z);
    z.powu(n as u32) * phi_scaled(space, n, z, kind)
}

/// `z_j^k` for `k < len`, exact for rational angles.
pub fn root_powers(space: &Space, j: usize, len: usize) -> Vec<Complex> {
    if let Some(angles) = space.cfg().angles() {
        return (0..len).map(|k| angles[j].times(k as u64).to_unit()).collect();
    }
    let z = space.cfg().roots()[j];
    let mut out = Vec::with_capacity(len);
    let mut pow = Complex::new(1.0, 0.0);
    for k in 0..len {
        if k % RESEED_EVERY == 0 {
            pow = z.powu(k as u32);
        }
        out.push(pow);
        pow *= z;
    }
    out
}

/// `W[j][n] = f_n(z_j)` for `n < len`, using the exact deficit factor.
pub fn boundary_rows(space: &Space, len: usize) -> Vec<Vec<Complex>> {
    (0..space.j())
        .map(|j| {
            let z = space.cfg().roots()[j];
            root_powers(space, j, len)
                .into_iter()
                .enumerate()
                .map(|(n, zp)| zp * phi_scaled(space, n, z, PointKind::Special(j)))
                .collect()
        })
        .collect()
}

/// A kernel value with a certified bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex,
    /// Terms `0..=truncation_n` were summed.
    pub truncation_n: usize,
    pub tail_bound: f64,
}

/// `sum_k |beta_k| A^k` with `A = sup_k |a_k|`: a bound on `|phi(a_k z)|`
/// over the closed disk.
fn phi_majorant(space: &Space) -> f64 {
    let a_sup = space.weights().sup_abs_from(0);
    (0..=space.j())
        .map(|k| space.beta(k).norm() * a_sup.powi(k as i32))
        .sum()
}

/// `C_i = prod_{l != i} (|1 - w_l z_i| + d)` with `d = sup_{k > n} |1 - a_k|`,
/// so that `|f_k(z_i)| <= C_i |1 - a_k|` for every `k > n`.
fn special_constant(space: &Space, i: usize, n: usize) -> f64 {
    let d = space.weights().sup_deficit_from(n + 1);
    let z = space.cfg().roots()[i];
    space
        .cfg()
        .conjugates()
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != i)
        .map(|(_, &wl)| (Complex::new(1.0, 0.0) - wl * z).norm() + d)
        .product()
}

/// Bound on `sum_{k > n} |f_k(z) f_k(w)|`, `None` when no majorant converges.
fn tail_bound(space: &Space, z: PointKind, w: PointKind, n: usize) -> Option<f64> {
    let geometric = |r: f64| {
        if r == 0.0 {
            0.0
        } else {
            r.powf(n as f64 + 1.0) / (1.0 - r)
        }
    };
    match (z, w) {
        (PointKind::Special(i), PointKind::Special(j)) => {
            let tail = space.weights().deficit_sq_tail(n)?;
            Some(special_constant(space, i, n) * special_constant(space, j, n) * tail)
        }
        (PointKind::Special(i), PointKind::Interior(r))
        | (PointKind::Interior(r), PointKind::Special(i)) => {
            let d = space.weights().sup_deficit_from(n + 1);
            Some(special_constant(space, i, n) * d * phi_majorant(space) * geometric(r))
        }
        (PointKind::Interior(rz), PointKind::Interior(rw)) => {
            Some(phi_majorant(space).powi(2) * geometric(rz * rw))
        }
        _ => None,
    }
}

fn domain_error(z: Complex, reason: &str) -> Error {
    Error::Domain {
        re: z.re,
        im: z.im,
        reason: reason.into(),
    }
}

/// Smallest `n` (up to bisection granularity) with `tail(n) <= tol`.
fn find_truncation(tol: f64, tail: impl Fn(usize) -> f64) -> Result<usize> {
    if tail(0) <= tol {
        return Ok(0);
    }
    let mut hi = 1usize;
    while tail(hi) > tol {
        if hi >= MAX_KERNEL_TERMS {
            return Err(Error::Truncation(format!(
                "tail bound {:.3e} still above {tol:.1e} after {MAX_KERNEL_TERMS} terms",
                tail(hi)
            )));
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `K(z, w) = sum_n f_n(z) conj(f_n(w))` to within `tol`.
pub fn kernel_eval(space: &Space, z: Complex, w: Complex, tol: f64) -> Result<KernelValue> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::config(format!("kernel tolerance must be positive, got {tol}")));
    }
    let kz = classify(space, z);
    let kw = classify(space, w);
    if kz == PointKind::Outside {
        return Err(domain_error(z, "not in the open disk and not a root of phi"));
    }
    if kw == PointKind::Outside {
        return Err(domain_error(w, "not in the open disk and not a root of phi"));
    }
    if tail_bound(space, kz, kw, 0).is_none() {
        let at = if matches!(kz, PointKind::Special(_)) { z } else { w };
        return Err(domain_error(at, "sum of squared deficits diverges at this root"));
    }
    let tail = |n| tail_bound(space, kz, kw, n).unwrap_or(f64::INFINITY);
    // half the budget for the tail, half for rounding in the sum
    let n_max = find_truncation(0.5 * tol, tail)?;

    let rho = z * w.conj();
    let mut pow = Complex::new(1.0, 0.0);
    let mut acc = CompensatedSum::new();
    for k in 0..=n_max {
        if k % RESEED_EVERY == 0 {
            pow = rho.powu(k as u32);
        }
        let term = pow * phi_scaled(space, k, z, kz) * phi_scaled(space, k, w, kw).conj();
        acc.add(term);
        pow *= rho;
    }
    Ok(KernelValue {
        value: acc.value(),
        truncation_n: n_max,
        tail_bound: tail(n_max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainReport {
    /// `(N, sum_{n < N} |f_n(z)|^2)` at dyadic `N`.
    pub partial_sums: Vec<(usize, f64)>,
    pub verdict: DomainVerdict,
}

/// Relative mass added by the last doubling below which the series is called
/// converging.
pub const DOMAIN_CONVERGED: f64 = 1e-6;
/// Relative growth over the last doubling at or above which it is called
/// diverging. A constant term size gives growth 1.
pub const DOMAIN_DIVERGED: f64 = 0.5;
/// Largest ratio of consecutive doubling increments that counts as geometric
/// decay of the increments.
pub const DOMAIN_RATIO: f64 = 0.75;
/// Relative bound on the geometrically extrapolated remainder for the
/// decaying-increment rule.
pub const DOMAIN_TAIL: f64 = 1e-5;

/// Partial sums of `sum |f_n(z)|^2` at `N = 16, 32, ...` up to `n_max`, with a
/// heuristic verdict. Not a proof either way.
pub fn domain_report(space: &Space, z: Complex, n_max: usize) -> Result<DomainReport> {
    if n_max < 16 {
        return Err(Error::precondition("domain report needs at least 16 terms"));
    }
    let kind = match classify(space, z) {
        PointKind::Outside if z.norm() > 1.0 => PointKind::Outside,
        PointKind::Outside => PointKind::Interior(1.0),
        k => k,
    };
    let mut checkpoints = Vec::new();
    let mut c = 16;
    while c < n_max {
        checkpoints.push(c);
        c *= 2;
    }
    checkpoints.push(n_max);

    let r = z.norm();
    let mut acc = 0.0;
    let mut comp = 0.0;
    let mut partial_sums = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    let mut rpow = 1.0;
    for n in 0..n_max {
        if n % RESEED_EVERY == 0 {
            rpow = r.powi(n as i32);
        }
        let term = rpow * rpow * phi_scaled(space, n, z, kind).norm_sqr();
        acc = neumaier(acc, term, &mut comp);
        rpow *= r;
        if n + 1 == checkpoints[next] {
            partial_sums.push((n + 1, acc + comp));
            next += 1;
        }
    }

    let verdict = match partial_sums.len() {
        0 | 1 => DomainVerdict::Inconclusive,
        len => {
            let prev = partial_sums[len - 2].1;
            let last = partial_sums[len - 1].1;
            if !last.is_finite() {
                DomainVerdict::Diverging
            } else if last == 0.0
                || (last - prev) <= DOMAIN_CONVERGED * last
                || geometric_tail(&partial_sums).is_some_and(|t| t <= DOMAIN_TAIL * last)
            {
                DomainVerdict::Converging
            } else if (last - prev) >= DOMAIN_DIVERGED * prev {
                DomainVerdict::Diverging
            } else {
                DomainVerdict::Inconclusive
            }
        }
    };
    Ok(DomainReport {
        partial_sums,
        verdict,
    })
}

/// Remainder estimate `d r / (1 - r)` when the last three doubling increments
/// shrink by at least `DOMAIN_RATIO` each time; `r` is the largest ratio.
fn geometric_tail(partial_sums: &[(usize, f64)]) -> Option<f64> {
    let len = partial_sums.len();
    if len < 5 {
        return None;
    }
    let d: Vec<f64> = partial_sums[len - 4..]
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .collect();
    let mut r: f64 = 0.0;
    for w in d.windows(2) {
        if !(w[0] > 0.0) || w[1] < 0.0 {
            return None;
        }
        r = r.max(w[1] / w[0]);
    }
    (r <= DOMAIN_RATIO).then(|| d[2] * r / (1.0 - r))
}

/// Taylor coefficients `y_m = sum_k alpha_{m-k} beta_k a_{m-k}^k` of
/// `sum_{n < len} alpha_n f_n`, for degrees `0..len + J`.
pub fn h2_coeffs(space: &Space, alpha: &[Complex]) -> Vec<Complex> {
    let jj = space.j();
    let mut y = vec![Complex::new(0.0, 0.0); alpha.len() + jj];
    for (n, &al) in alpha.iter().enumerate() {
        if al == Complex::new(0.0, 0.0) {
            continue;
        }
        for (k, &t) in basis_coeffs(space, n).taylor.iter().enumerate() {
            y[n + k] += al * t;
        }
    }
    y
}

/// The Cauchy-Schwarz constant `c = (sum_k |beta_k|^2 A^{2k})^{1/2}` with
/// `A = sup_n |a_n|`, so that `|y_m|^2 <= c^2 sum_k |alpha_{m-k}|^2` and
/// `sum |y_m|^2 <= (J + 1) c^2 sum |alpha_n|^2`.
pub fn h2_constant(space: &Space) -> f64 {
    let a_sup = space.weights().sup_abs_from(0);
    (0..=space.j())
        .map(|k| (space.beta(k).norm() * a_sup.powi(k as i32)).powi(2))
        .sum::<f64>()
        .sqrt()
}
