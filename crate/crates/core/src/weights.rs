//! Weight sequences `a_n -> 1` with nonvanishing deficits `1 - a_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form rule used beyond the end of a tabulated prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    /// `a_n = 1 - p/(n + offset)`.
    Harmonic { p: f64, offset: f64 },
    /// `a_n = 1 - 1/(n + 2)^p`.
    PowerLaw { p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSequence {
    /// `a_n = 1 - p/(n + offset)`.
    Harmonic {
        p: f64,
        #[serde(default = "default_offset")]
        offset: f64,
    },
    /// `a_n = 1 - 1/(n + 2)^p`.
    PowerLaw { p: f64 },
    /// Explicit `a_0 .. a_{T-1}` followed by a closed-form tail evaluated at
    /// the absolute index `n`.
    Table { values: Vec<f64>, tail: TailRule },
}

fn default_offset() -> f64 {
    2.0
}

impl TailRule {
    fn deficit(&self, n: usize) -> f64 {
        match *self {
            TailRule::Harmonic { p, offset } => p / (n as f64 + offset),
            TailRule::PowerLaw { p } => (n as f64 + 2.0).powf(-p),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TailRule::Harmonic { p, offset } => {
                if !(p.is_finite() && p > 0.0) {
                    return Err(Error::config(format!("harmonic rate p must be positive, got {p}")));
                }
                if !(offset.is_finite() && offset > 0.0) {
                    return Err(Error::config(format!(
                        "harmonic offset must be positive, got {offset}"
                    )));
                }
            }
            TailRule::PowerLaw { p } => {
                if !(p.is_finite() && p > 0.0) {
                    return Err(Error::config(format!("power-law exponent must be positive, got {p}")));
                }
            }
        }
        Ok(())
    }

    fn rate(&self) -> Option<f64> {
        match *self {
            TailRule::Harmonic { p, .. } => Some(p),
            TailRule::PowerLaw { p: 1.0 } => Some(1.0),
            TailRule::PowerLaw { .. } => None,
        }
    }

    /// Upper bound on `sum_{k >= from} deficit(k)^2` by integral comparison.
    fn deficit_sq_sum_from(&self, from: usize) -> Option<f64> {
        match *self {
            TailRule::Harmonic { p, offset } => {
                // 1/(k+c)^2 <= int_{k-1+c}^{k+c} dx/x^2
                let x0 = from as f64 - 1.0 + offset;
                if x0 > 0.0 {
                    Some(p * p / x0)
                } else {
                    let first = self.deficit(from).powi(2);
                    Some(first + p * p / (x0 + 1.0))
                }
            }
            TailRule::PowerLaw { p } => {
                if p <= 0.5 {
                    return None;
                }
                let x0 = from as f64 + 1.0;
                Some(x0.powf(1.0 - 2.0 * p) / (2.0 * p - 1.0))
            }
        }
    }

    /// `sup_{n >= from} (n + shift) * deficit(n)`.
    fn scaled_deficit_sup(&self, from: usize, shift: f64) -> Option<f64> {
        let at = |n: usize| (n as f64 + shift) * self.deficit(n);
        match *self {
            // p (n + shift)/(n + offset) is monotone with limit p
            TailRule::Harmonic { p, .. } => Some(at(from).max(p)),
            TailRule::PowerLaw { p } => {
                if p < 1.0 {
                    None
                } else if p == 1.0 {
                    Some(at(from).max(1.0))
                } else {
                    // (n + shift)(n + 2)^{-p} has a single maximum.
                    let peak = ((2.0 - p * shift) / (p - 1.0)).max(from as f64);
                    let mut best = at(from);
                    for n in [peak.floor() as usize, peak.ceil() as usize] {
                        if n >= from {
                            best = best.max(at(n));
                        }
                    }
                    Some(best)
                }
            }
        }
    }
}

impl WeightSequence {
    pub fn harmonic(p: f64, offset: f64) -> Result<Self> {
        let w = WeightSequence::Harmonic { p, offset };
        w.validate()?;
        Ok(w)
    }

    pub fn power_law(p: f64) -> Result<Self> {
        let w = WeightSequence::PowerLaw { p };
        w.validate()?;
        Ok(w)
    }

    pub fn table(values: Vec<f64>, tail: TailRule) -> Result<Self> {
        let w = WeightSequence::Table { values, tail };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightSequence::Harmonic { p, offset } => TailRule::Harmonic {
                p: *p,
                offset: *offset,
            }
            .validate(),
            WeightSequence::PowerLaw { p } => TailRule::PowerLaw { p: *p }.validate(),
            WeightSequence::Table { values, tail } => {
                tail.validate()?;
                for (n, &a) in values.iter().enumerate() {
                    if !a.is_finite() {
                        return Err(Error::config(format!("table weight a_{n} is not finite")));
                    }
                    if a == 1.0 {
                        return Err(Error::config(format!("table weight a_{n} equals 1")));
                    }
                }
                Ok(())
            }
        }
    }

    fn tail_rule(&self) -> TailRule {
        match self {
            WeightSequence::Harmonic { p, offset } => TailRule::Harmonic {
                p: *p,
                offset: *offset,
            },
            WeightSequence::PowerLaw { p } => TailRule::PowerLaw { p: *p },
            WeightSequence::Table { tail, .. } => *tail,
        }
    }

    fn table_len(&self) -> usize {
        match self {
            WeightSequence::Table { values, .. } => values.len(),
            _ => 0,
        }
    }

    /// `a_n`.
    pub fn a(&self, n: usize) -> f64 {
        match self {
            WeightSequence::Table { values, .. } if n < values.len() => values[n],
            _ => 1.0 - self.tail_rule().deficit(n),
        }
    }

    /// `1 - a_n`, computed without cancellation for the closed-form kinds.
    pub fn deficit(&self, n: usize) -> f64 {
        match self {
            WeightSequence::Table { values, .. } if n < values.len() => 1.0 - values[n],
            _ => self.tail_rule().deficit(n),
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<f64> {
        (0..len).map(|n| self.a(n)).collect()
    }

    /// The asymptotic rate `p` when `n (1 - a_n) -> p` holds, `None` otherwise.
    ///
    /// Holds for every harmonic sequence and for the power law only at `p = 1`.
    pub fn rate(&self) -> Option<f64> {
        self.tail_rule().rate()
    }

    /// The parameter `p` of the closed-form rule (of the tail rule for tables).
    pub fn p(&self) -> f64 {
        match self.tail_rule() {
            TailRule::Harmonic { p, .. } | TailRule::PowerLaw { p } => p,
        }
    }

    /// Upper bound on `sum_{k > n} (1 - a_k)^2`; `None` when the series diverges.
    pub fn deficit_sq_tail(&self, n: usize) -> Option<f64> {
        let start = n + 1;
        let t = self.table_len();
        let mut head = 0.0;
        if start < t {
            head = (start..t).map(|k| self.deficit(k).powi(2)).sum();
        }
        self.tail_rule()
            .deficit_sq_sum_from(start.max(t))
            .map(|tail| head + tail)
    }

    /// `sup_{k >= from} |a_k|`.
    pub fn sup_abs_from(&self, from: usize) -> f64 {
        let t = self.table_len();
        let mut best: f64 = 0.0;
        for k in from..t {
            best = best.max(self.a(k).abs());
        }
        // closed-form tails increase monotonically towards 1
        let k0 = from.max(t);
        best.max(self.a(k0).abs()).max(1.0)
    }

    /// `sup_{k >= from} |1 - a_k|`.
    pub fn sup_deficit_from(&self, from: usize) -> f64 {
        let t = self.table_len();
        let mut best: f64 = 0.0;
        for k in from..t {
            best = best.max(self.deficit(k).abs());
        }
        best.max(self.deficit(from.max(t)).abs())
    }

    /// `sup_{n >= from} (n + shift) |1 - a_n|`, or `None` if unbounded.
    pub fn scaled_deficit_sup(&self, from: usize, shift: f64) -> Option<f64> {
        let t = self.table_len();
        let mut best: f64 = 0.0;
        for n in from..t {
            best = best.max((n as f64 + shift) * self.deficit(n).abs());
        }
        self.tail_rule()
            .scaled_deficit_sup(from.max(t), shift)
            .map(|s| s.max(best))
    }

    /// Sampled check that `|1 - a_n|` is nonincreasing on `[from, until)` and
    /// nonzero everywhere below `until`.
    pub fn check_convergence(&self, from: usize, until: usize) -> bool {
        if (0..until).any(|n| self.deficit(n) == 0.0) {
            return false;
        }
        (from.max(1)..until).all(|n| self.deficit(n).abs() <= self.deficit(n - 1).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_values() {
        let w = WeightSequence::harmonic(1.0, 2.0).unwrap();
        assert_eq!(w.a(0), 0.5);
        assert!((w.a(3) - 4.0 / 5.0).abs() < 1e-15);
        assert_eq!(w.rate(), Some(1.0));
        assert!(w.check_convergence(0, 1000));
    }

    #[test]
    fn power_law_rate_only_at_one() {
        assert_eq!(WeightSequence::power_law(1.0).unwrap().rate(), Some(1.0));
        assert_eq!(WeightSequence::power_law(2.0).unwrap().rate(), None);
        let w = WeightSequence::power_law(2.0).unwrap();
        assert!((w.a(0) - 0.75).abs() < 1e-15);
        assert!((w.a(1) - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(WeightSequence::harmonic(0.0, 2.0).is_err());
        assert!(WeightSequence::harmonic(1.0, 0.0).is_err());
        assert!(WeightSequence::power_law(-1.0).is_err());
        let tail = TailRule::PowerLaw { p: 2.0 };
        assert!(WeightSequence::table(vec![0.5, 1.0], tail).is_err());
        assert!(WeightSequence::table(vec![0.5, f64::NAN], tail).is_err());
    }

    #[test]
    fn table_switches_to_tail() {
        let tail = TailRule::Harmonic { p: 1.0, offset: 2.0 };
        let w = WeightSequence::table(vec![0.1, 0.2], tail).unwrap();
        assert_eq!(w.a(1), 0.2);
        assert!((w.a(2) - 0.75).abs() < 1e-15);
        assert_eq!(w.rate(), Some(1.0));
    }

    #[test]
    fn deficit_tail_bounds_dominate_partial_sums() {
        let cases = [
            WeightSequence::harmonic(1.0, 2.0).unwrap(),
            WeightSequence::harmonic(0.3, 0.5).unwrap(),
            WeightSequence::power_law(2.0).unwrap(),
            WeightSequence::power_law(0.75).unwrap(),
            WeightSequence::table(vec![0.9, -0.5, 0.3], TailRule::PowerLaw { p: 1.5 }).unwrap(),
        ];
        for w in &cases {
            for n in [0usize, 1, 5, 40] {
                let bound = w.deficit_sq_tail(n).unwrap();
                let partial: f64 = (n + 1..200_000).map(|k| w.deficit(k).powi(2)).sum();
                assert!(partial <= bound, "{w:?} n={n}: {partial} > {bound}");
            }
        }
        assert!(WeightSequence::power_law(0.5).unwrap().deficit_sq_tail(3).is_none());
    }

    #[test]
    fn scaled_deficit_sup_dominates_samples() {
        let cases = [
            WeightSequence::harmonic(0.75, 2.0).unwrap(),
            WeightSequence::harmonic(2.0, 5.0).unwrap(),
            WeightSequence::power_law(1.0).unwrap(),
            WeightSequence::power_law(3.0).unwrap(),
        ];
        for w in &cases {
            for shift in [1.0, 2.0, 4.0] {
                let sup = w.scaled_deficit_sup(10, shift).unwrap();
                for n in 10..20_000 {
                    let v = (n as f64 + shift) * w.deficit(n);
                    assert!(v <= sup * (1.0 + 1e-14), "{w:?} shift {shift} n {n}: {v} > {sup}");
                }
            }
        }
        assert!(WeightSequence::power_law(0.5).unwrap().scaled_deficit_sup(0, 1.0).is_none());
    }
}
