//! Experiment configuration read from TOML.

use std::path::PathBuf;

use almostrep::almostrep::Family;
use almostrep::cohomology::ChainTerm;
use almostrep::linalg::TraceKind;
use almostrep::obstruction::{CycleSpec, SweepConfig};
use serde::Deserialize;

/// `cycle = "hopf"`, `cycle = "std"`, or an array of `{ k, a, b }` tables.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CycleField {
    Named(String),
    Terms(Vec<ChainTerm>),
}

impl CycleField {
    pub fn resolve(&self) -> Result<CycleSpec, String> {
        match self {
            CycleField::Named(name) => parse_cycle_name(name),
            CycleField::Terms(terms) => Ok(CycleSpec::Terms(terms.clone())),
        }
    }
}

pub fn parse_cycle_name(name: &str) -> Result<CycleSpec, String> {
    match name {
        "hopf" => Ok(CycleSpec::Hopf),
        "std" | "standard" => Ok(CycleSpec::Standard),
        other => Err(format!("unknown cycle {other:?} (expected \"hopf\", \"std\" or a list of terms)")),
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub family: Family,
    pub cycle: CycleField,
    pub n_grid: Vec<usize>,
    #[serde(default = "default_ps")]
    pub ps: Vec<f64>,
    #[serde(default = "default_trace")]
    pub trace: TraceKind,
    #[serde(default)]
    pub eps_perturb: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    pub n0: Option<usize>,
    pub defect_threshold: Option<f64>,
}

fn default_ps() -> Vec<f64> {
    vec![2.0, f64::INFINITY]
}

fn default_trace() -> TraceKind {
    TraceKind::Unnormalized
}

fn default_out_dir() -> PathBuf {
    PathBuf::from(".")
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// The validated sweep this config describes.
    pub fn to_sweep(&self) -> Result<SweepConfig, String> {
        let mut sweep = SweepConfig::new(self.family, self.cycle.resolve()?, self.n_grid.clone());
        sweep.ps = self.ps.clone();
        sweep.trace = self.trace;
        sweep.eps_perturb = self.eps_perturb;
        sweep.seed = self.seed;
        if let Some(n0) = self.n0 {
            sweep.n0 = n0;
        }
        if let Some(t) = self.defect_threshold {
            sweep.defect_threshold = t;
        }
        sweep.validate().map_err(|e| e.to_string())?;
        Ok(sweep)
    }
}
