//! The JSON experiment configuration.

use serde::{Deserialize, Serialize};

use crate::boundary::{Angle, BoundaryConfig};
use crate::error::{Error, Result};
use crate::recursion::containment::MAX_SECTION;
use crate::weights::WeightSequence;
use crate::{Complex, Space};

/// A complex number as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<ComplexJson> for Complex {
    fn from(c: ComplexJson) -> Complex {
        Complex::new(c.re, c.im)
    }
}

impl From<Complex> for ComplexJson {
    fn from(c: Complex) -> ComplexJson {
        ComplexJson { re: c.re, im: c.im }
    }
}

/// A root given as a fraction of a full turn (`"1/6"`) or as a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootSpec {
    Angle(Angle),
    Point(ComplexJson),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Containment,
    DivergenceExample,
    Decomposition,
    Multiplier,
    KernelEval,
    Identities,
    Domain,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Containment => "containment",
            ExperimentKind::DivergenceExample => "divergence-example",
            ExperimentKind::Decomposition => "decomposition",
            ExperimentKind::Multiplier => "multiplier",
            ExperimentKind::KernelEval => "kernel-eval",
            ExperimentKind::Identities => "identities",
            ExperimentKind::Domain => "domain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointPair {
    pub z: ComplexJson,
    pub w: ComplexJson,
}

/// Optional experiment-specific settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// containment: also run the comparison matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<bool>,
    /// kernel-eval: point pairs; all root pairs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PointPair>>,
    /// domain: points to probe; a default set when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<ComplexJson>>,
    /// domain: number of series terms summed at each point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// decomposition, identities: number of random trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// decomposition: degree of the random `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// identities: largest number of roots in the random configs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_roots: Option<usize>,
    /// multiplier: radius of the circle for the constant-expansion check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub roots: Vec<RootSpec>,
    pub weights: WeightSequence,
    pub experiment: ExperimentKind,
    pub truncations: Vec<usize>,
    pub tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    /// Output path prefix; the CLI flag overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Exit with code 4 when any verdict is inconclusive or failed.
    #[serde(default)]
    pub assert: bool,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::config(format!("config does not parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncations.is_empty() {
            return Err(Error::config("truncation list is empty"));
        }
        for &n in &self.truncations {
            if !n.is_power_of_two() {
                return Err(Error::config(format!("truncation {n} is not a power of two")));
            }
            if n > MAX_SECTION {
                return Err(Error::config(format!("truncation {n} exceeds the cap {MAX_SECTION}")));
            }
        }
        if self.truncations.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("truncations must be strictly increasing"));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(Error::config(format!("tolerance {} is not in (0, 1e-2]", self.tolerance)));
        }
        if self.roots.is_empty() {
            return Err(Error::config("at least one root is required"));
        }
        if let Some(r) = self.params.radius {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::config(format!("radius {r} is not in (0, 1)")));
            }
        }
        if let Some(t) = self.params.terms {
            if !(16..=1 << 31).contains(&t) {
                return Err(Error::config(format!("terms {t} is not in [16, 2^31]")));
            }
        }
        self.weights.validate()?;
        self.boundary()?;
        Ok(())
    }

    pub fn boundary(&self) -> Result<BoundaryConfig> {
        let angles: Option<Vec<Angle>> = self
            .roots
            .iter()
            .map(|r| match r {
                RootSpec::Angle(a) => Some(*a),
                RootSpec::Point(_) => None,
            })
            .collect();
        match angles {
            Some(a) => BoundaryConfig::from_angles(&a),
            None => {
                let pts: Vec<Complex> = self
                    .roots
                    .iter()
                    .map(|r| match r {
                        RootSpec::Angle(a) => a.to_unit(),
                        RootSpec::Point(p) => (*p).into(),
                    })
                    .collect();
                BoundaryConfig::from_points(&pts)
            }
        }
    }

    pub fn space(&self) -> Result<Space> {
        Space::new(self.boundary()?, self.weights.clone())
    }

    pub fn max_truncation(&self) -> usize {
        *self.truncations.last().expect("validated nonempty")
    }
}
