use std::fmt;
use std::str::FromStr;

use qpslab_core::{Corruption, LieGroup};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Pairing,
    CartanDirac,
    DorfmanClosure,
    Double,
    LemmaKernel,
    Regact,
    GsTheorem1,
    GsTheorem2,
    Bivector,
    DiagramGs,
    LeafForm,
    WeylFiber,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Pairing,
        Suite::CartanDirac,
        Suite::DorfmanClosure,
        Suite::Double,
        Suite::LemmaKernel,
        Suite::Regact,
        Suite::GsTheorem1,
        Suite::GsTheorem2,
        Suite::Bivector,
        Suite::DiagramGs,
        Suite::LeafForm,
        Suite::WeylFiber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pairing => "pairing",
            Suite::CartanDirac => "cartan-dirac",
            Suite::DorfmanClosure => "dorfman-closure",
            Suite::Double => "double",
            Suite::LemmaKernel => "lemma-kernel",
            Suite::Regact => "regact",
            Suite::GsTheorem1 => "gs-theorem1",
            Suite::GsTheorem2 => "gs-theorem2",
            Suite::Bivector => "bivector",
            Suite::DiagramGs => "diagram-gs",
            Suite::LeafForm => "leaf-form",
            Suite::WeylFiber => "weyl-fiber",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl FromStr for Backend {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(CliError::Usage(format!("unknown backend {other:?}"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub suite: Suite,
    pub group: String,
    pub backend: Backend,
    pub samples: usize,
    pub seed: u64,
    /// Relative tolerance of the float backend.
    pub tolerance: Option<f64>,
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    /// Negative-control hook; never set in normal use.
    pub corruption: Corruption,
}

impl CampaignConfig {
    pub fn new(suite: Suite, group: &str) -> Self {
        CampaignConfig {
            suite,
            group: group.to_string(),
            backend: Backend::Exact,
            samples: 10,
            seed: 0,
            tolerance: None,
            jobs: 0,
            corruption: Corruption::None,
        }
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn corrupt(mut self, corruption: Corruption) -> Self {
        self.corruption = corruption;
        self
    }

    /// The group context the campaign runs in.
    pub fn validate(&self) -> Result<LieGroup, CliError> {
        if self.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
            }
        }
        let ctx = LieGroup::parse(&self.group).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(ctx.with_corruption(self.corruption))
    }

    /// Everything that determines the verdicts; `jobs` is left out so that
    /// reports do not depend on scheduling.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "suite": self.suite.name(),
            "group": self.group.to_ascii_lowercase(),
            "backend": self.backend.to_string(),
            "samples": self.samples,
            "seed": self.seed,
        });
        if self.backend == Backend::Float {
            v["tolerance"] = json!(self.tolerance.unwrap_or(qpslab_core::scalar::DEFAULT_FLOAT_TOLERANCE));
        }
        if self.corruption != Corruption::None {
            v["corruption"] = json!(self.corruption.to_string());
        }
        v
    }
}
