use std::path::{Path, PathBuf};

use quadsearch::analytic::RhoGrid;
use quadsearch::ProblemSpec;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Run,
    Verify,
    Cost,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Placement {
    #[serde(rename = "first")]
    First,
    #[serde(rename = "seeded-random")]
    SeededRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

/// JSON configuration accepted by every subcommand.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub catalog_size: Option<u64>,
    /// Explicit 1-based target items.
    pub targets: Option<Vec<u64>>,
    pub num_targets: Option<u64>,
    pub placement: Option<Placement>,
    pub placement_seed: Option<u64>,
    pub q_max: Option<u32>,
    pub q_list: Option<Vec<u32>>,
    pub rho_grid: Option<GridConfig>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    /// Explicit iteration count for `cost`.
    pub iterations: Option<u32>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<Format>,
    /// Overrides the verification threshold.
    pub tolerance: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn catalog_size(&self) -> Result<u64, CliError> {
        self.catalog_size
            .ok_or_else(|| CliError::Config("missing field `catalog_size`".into()))
    }

    pub fn has_problem(&self) -> bool {
        self.catalog_size.is_some()
    }

    /// Number of targets without materializing them.
    pub fn target_count(&self) -> Result<u64, CliError> {
        match (&self.targets, self.num_targets) {
            (Some(list), _) => Ok(list.len() as u64),
            (None, Some(n)) => Ok(n),
            (None, None) => Err(CliError::Config(
                "missing targets: give `targets` or `num_targets`".into(),
            )),
        }
    }

    pub fn problem(&self) -> Result<ProblemSpec, CliError> {
        let catalog = self.catalog_size()?;
        let spec = match (&self.targets, self.num_targets) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either `targets` or `num_targets`, not both".into(),
                ))
            }
            (Some(list), None) => ProblemSpec::new(catalog, list.iter().copied()),
            (None, Some(n)) => match self.placement.unwrap_or(Placement::First) {
                Placement::First => ProblemSpec::first(catalog, n),
                Placement::SeededRandom => {
                    ProblemSpec::seeded_random(catalog, n, self.placement_seed.unwrap_or(self.seed()))
                }
            },
            (None, None) => {
                return Err(CliError::Config(
                    "missing targets: give `targets` or `num_targets`".into(),
                ))
            }
        };
        spec.map_err(CliError::from)
    }

    pub fn grid(&self) -> RhoGrid {
        self.rho_grid
            .map(|g| RhoGrid {
                start: g.start,
                stop: g.stop,
                step: g.step,
            })
            .unwrap_or_default()
    }

    pub fn q_list(&self) -> Vec<u32> {
        match (&self.q_list, self.q_max) {
            (Some(list), _) => list.clone(),
            (None, Some(max)) => (0..=max).collect(),
            (None, None) => vec![0, 1, 2],
        }
    }
}
