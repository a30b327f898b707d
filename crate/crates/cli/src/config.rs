use std::path::{Path, PathBuf};

use adiabatic_paths::dynamics::Method;
use adiabatic_paths::effpot::TrackConfig;
use adiabatic_paths::operators::{EntryDistribution, EntryKind, Proposal};
use adiabatic_paths::study::SatGapStudyConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    #[default]
    Symmetric,
    Random3sat,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    #[default]
    Full,
    Collective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Figure,
    #[default]
    Track,
    Mc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InstanceConfig {
    pub source: Source,
    pub n: usize,
    /// Clause count for random 3-SAT.
    pub clauses: usize,
    pub path: Option<PathBuf>,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig { source: Source::Symmetric, n: 8, clauses: 24, path: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationSection {
    pub proposal: Proposal,
    pub kind: EntryKind,
    pub half_width: f64,
}

impl Default for PerturbationSection {
    fn default() -> Self {
        let d = EntryDistribution::default();
        PerturbationSection { proposal: Proposal::None, kind: d.kind, half_width: d.half_width }
    }
}

impl PerturbationSection {
    pub fn dist(&self) -> EntryDistribution {
        EntryDistribution { kind: self.kind, half_width: self.half_width }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub space: Space,
    pub points: usize,
    /// Golden-section tolerance in `s` for the minimum gap.
    pub refine: Option<f64>,
    /// Collective sector only: add the fixed two-body extra term.
    pub include_he: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { space: Space::Full, points: 201, refine: None, include_he: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionConfig {
    pub times: Vec<f64>,
    /// When set, replaces `times` with `c / min_gap^2`.
    pub time_factor: Option<f64>,
    pub steps: usize,
    /// Raises `steps` so that no step exceeds this length.
    pub max_dt: Option<f64>,
    pub method: Method,
    pub norm_tol: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            times: vec![10.0],
            time_factor: None,
            steps: 1000,
            max_dt: Some(0.25),
            method: Method::PiecewiseEigen,
            norm_tol: adiabatic_paths::dynamics::NORM_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EffpotConfig {
    pub mode: Mode,
    pub matrix_file: Option<PathBuf>,
    pub no_he: bool,
    pub trials: usize,
    pub ds: f64,
    pub tol: f64,
    pub continuity_bound: f64,
    pub global_check_every: Option<usize>,
    pub theta_points: usize,
}

impl Default for EffpotConfig {
    fn default() -> Self {
        let t = TrackConfig::default();
        EffpotConfig {
            mode: Mode::Track,
            matrix_file: None,
            no_he: false,
            trials: 1000,
            ds: t.ds,
            tol: t.tol,
            continuity_bound: t.continuity_bound,
            global_check_every: None,
            theta_points: adiabatic_paths::effpot::FIGURE_THETA_POINTS,
        }
    }
}

impl EffpotConfig {
    pub fn track(&self) -> TrackConfig {
        TrackConfig {
            ds: self.ds,
            tol: self.tol,
            continuity_bound: self.continuity_bound,
            global_check_every: self.global_check_every,
            ..TrackConfig::default()
        }
    }
}

/// Everything a run depends on. Loaded from TOML, overridden by flags and
/// echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub seed: u64,
    pub format: Format,
    /// Not echoed, so outputs do not depend on where they are written.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    pub instance: InstanceConfig,
    pub perturbation: PerturbationSection,
    pub scan: ScanConfig,
    pub evolution: EvolutionConfig,
    pub effpot: EffpotConfig,
    pub study: SatGapStudyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            seed: 0,
            format: Format::Csv,
            out: None,
            instance: InstanceConfig::default(),
            perturbation: PerturbationSection::default(),
            scan: ScanConfig::default(),
            evolution: EvolutionConfig::default(),
            effpot: EffpotConfig::default(),
            study: SatGapStudyConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig::default();
        c.seed = 7;
        c.scan.refine = Some(1e-8);
        c.effpot.mode = Mode::Mc;
        c.evolution.time_factor = Some(100.0);
        let text = toml::to_string(&c).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let c: RunConfig = toml::from_str("seed = 3\n[instance]\nn = 5\n").unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.instance.n, 5);
        assert_eq!(c.scan, ScanConfig::default());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<RunConfig>("sede = 3\n").is_err());
    }
}
