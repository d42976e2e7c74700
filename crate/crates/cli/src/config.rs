use std::path::PathBuf;

use repeatprune::generators::{AuctionParams, PerturbationSpec};
use repeatprune::Schedule;
use serde::{Deserialize, Serialize};

use crate::error::{read_file, CliError, CliResult};

/// Everything needed to reproduce one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainConfig,
    /// Rounds per trial, `T`.
    pub horizon: usize,
    pub schedule: Schedule,
    pub trials: usize,
    pub root_seed: u64,
    /// Reuse one instance sequence for every trial instead of drawing a
    /// fresh sequence per trial. Sequences read from files are always fixed.
    #[serde(default)]
    pub fixed_sequence: bool,
    #[serde(default)]
    pub csv_path: Option<PathBuf>,
    #[serde(default)]
    pub summary_path: Option<PathBuf>,
    /// Worker threads; 0 means one per available core.
    #[serde(default)]
    pub parallelism: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainConfig {
    ShortestPath { graph: GraphSource, perturbation: PerturbationSpec },
    /// `k` parallel edges, one of which weighs zero each round.
    Tight { k: usize },
    Lp { program: LpSource },
    StringSearch { source: SearchSource },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSource {
    Grid {
        width: usize,
        height: usize,
        /// Multiplies the `U(0.5, 1.5)` base weights.
        #[serde(default = "one")]
        weight_scale: f64,
        #[serde(default)]
        source: Option<usize>,
        #[serde(default)]
        terminal: Option<usize>,
    },
    /// Edge-list file with base weights.
    File { path: PathBuf, source: usize, terminal: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LpSource {
    /// Synthetic auction relaxation; objectives are Gaussian perturbations of the bid values.
    Auction {
        #[serde(flatten)]
        params: AuctionParams,
        sigma: f64,
    },
    /// LP file plus an objectives file whose first `T` lines are the sequence.
    File { path: PathBuf, objectives: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SearchSource {
    Synthetic {
        text_len: usize,
        pattern_len: usize,
        alphabet: String,
        hotspots: usize,
        plant_prob: f64,
    },
    /// Instance-stream file whose first `T` instances are the sequence.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

impl DomainConfig {
    pub fn name(&self) -> &'static str {
        match self {
            DomainConfig::ShortestPath { .. } => "shortest-path",
            DomainConfig::Tight { .. } => "tight",
            DomainConfig::Lp { .. } => "lp",
            DomainConfig::StringSearch { .. } => "string-search",
        }
    }
}

impl ExperimentConfig {
    pub fn new(domain: DomainConfig) -> Self {
        ExperimentConfig {
            domain,
            horizon: 30,
            schedule: Schedule::InverseSqrt,
            trials: 200,
            root_seed: 0,
            fixed_sequence: false,
            csv_path: None,
            summary_path: None,
            parallelism: 0,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.horizon == 0 {
            return Err(CliError::config("horizon must be at least 1"));
        }
        if self.trials == 0 {
            return Err(CliError::config("trials must be at least 1"));
        }
        self.schedule.validate()?;
        if let Schedule::Custom { values } = &self.schedule {
            if values.len() < self.horizon {
                return Err(CliError::config(format!(
                    "custom schedule has {} values but the horizon is {}",
                    values.len(),
                    self.horizon
                )));
            }
        }
        match &self.domain {
            DomainConfig::ShortestPath { perturbation, graph } => {
                perturbation.validate()?;
                if let GraphSource::Grid { weight_scale, .. } = graph {
                    if !(*weight_scale > 0.0 && weight_scale.is_finite()) {
                        return Err(CliError::config("weight_scale must be positive"));
                    }
                }
            }
            DomainConfig::Tight { k } if *k == 0 => return Err(CliError::config("k must be at least 1")),
            DomainConfig::Lp { program: LpSource::Auction { params, sigma } } => {
                params.validate()?;
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(CliError::config("sigma must be positive"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        Self::from_json(&read_file(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
