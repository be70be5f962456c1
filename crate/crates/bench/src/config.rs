//! Experiment configuration, read from TOML.
//!
//! ```toml
//! generator = "sb"            # sb | mb | urban | terrain
//! worlds = 10                 # world seeds seed..seed+worlds
//! seed = 0
//! rules = ["igha-0", "igha-inf", "iha"]
//! budget = 100000
//! termination = "schedule"    # schedule | exhaustive
//! out = "out"
//!
//! [bottleneck]                # generator parameters, all optional
//! walls = 1
//! ```
//!
//! Instead of a generator, `map` and `query_file` name files on disk; the
//! domain is then given by `domain`.

use std::path::{Path, PathBuf};

use ighastar::search::{ScheduleSpec, Termination};
use ighastar::worlds::{BottleneckParams, TerrainParams, UrbanParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rules::RuleSpec;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Point,
    Car,
    Kinodynamic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Sb,
    Mb,
    Urban,
    Terrain,
}

impl Generator {
    pub fn domain(self) -> DomainKind {
        match self {
            Generator::Sb | Generator::Mb => DomainKind::Point,
            Generator::Urban => DomainKind::Car,
            Generator::Terrain => DomainKind::Kinodynamic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Sb => "sb",
            Generator::Mb => "mb",
            Generator::Urban => "urban",
            Generator::Terrain => "terrain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminationMode {
    #[default]
    Schedule,
    Exhaustive,
}

impl From<TerminationMode> for Termination {
    fn from(t: TerminationMode) -> Self {
        match t {
            TerminationMode::Schedule => Termination::Schedule,
            TerminationMode::Exhaustive => Termination::Exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generator: Option<Generator>,
    /// Number of generated worlds.
    pub worlds: u64,
    /// Seed of the first world; also seeds the bootstrap.
    pub seed: u64,
    pub map: Option<PathBuf>,
    pub query_file: Option<PathBuf>,
    /// Required with `map`; implied by `generator` otherwise.
    pub domain: Option<DomainKind>,
    /// Overrides the generator's schedule.
    pub schedule: Option<ScheduleSpec>,
    pub rules: Vec<String>,
    pub budget: u64,
    /// Queries per world; overrides the generator parameter.
    pub queries: Option<usize>,
    pub termination: TerminationMode,
    pub first_path_only: bool,
    pub check_invariants: bool,
    pub out: PathBuf,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
    pub bottleneck: BottleneckParams,
    pub urban: UrbanParams,
    pub terrain: TerrainParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            generator: None,
            worlds: 1,
            seed: 0,
            map: None,
            query_file: None,
            domain: None,
            schedule: None,
            rules: vec!["igha-0".into(), "igha-inf".into()],
            budget: 100_000,
            queries: None,
            termination: TerminationMode::Schedule,
            first_path_only: false,
            check_invariants: false,
            out: PathBuf::from("out"),
            jobs: 0,
            bottleneck: BottleneckParams::default(),
            urban: UrbanParams::default(),
            terrain: TerrainParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.into(),
            source,
        })?;
        let mut config = Self::from_toml(&text).map_err(|source| ConfigError::Toml {
            path: path.into(),
            source,
        })?;
        // file paths are relative to the config file
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut config.map, &mut config.query_file].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn domain(&self) -> Result<DomainKind, ConfigError> {
        match (self.generator, self.domain) {
            (Some(g), Some(d)) if g.domain() != d => Err(ConfigError::Invalid(format!(
                "generator `{}` drives the {:?} domain, not {d:?}",
                g.name(),
                g.domain()
            ))),
            (Some(g), _) => Ok(g.domain()),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(ConfigError::Invalid("`domain` is required with `map`".into())),
        }
    }

    pub fn rule_specs(&self) -> Result<Vec<RuleSpec>, ConfigError> {
        let mut specs = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            let spec: RuleSpec = r.parse().map_err(ConfigError::Invalid)?;
            if specs.contains(&spec) {
                return Err(ConfigError::Invalid(format!("rule `{spec}` listed twice")));
            }
            specs.push(spec);
        }
        Ok(specs)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.budget == 0 {
            return Err(ConfigError::Invalid("budget must be positive".into()));
        }
        if self.rules.is_empty() {
            return Err(ConfigError::Invalid("rule list is empty".into()));
        }
        self.rule_specs()?;
        match (self.generator, &self.map, &self.query_file) {
            (Some(_), None, None) => {
                if self.worlds == 0 {
                    return Err(ConfigError::Invalid("worlds must be positive".into()));
                }
            }
            (None, Some(_), Some(_)) => {}
            (None, Some(_), None) | (None, None, Some(_)) => {
                return Err(ConfigError::Invalid("`map` and `query_file` go together".into()))
            }
            (None, None, None) => {
                return Err(ConfigError::Invalid("set `generator`, or `map` and `query_file`".into()))
            }
            (Some(_), _, _) => {
                return Err(ConfigError::Invalid("`generator` and `map` are exclusive".into()))
            }
        }
        self.domain()?;
        if matches!(&self.schedule, Some(s) if s.levels == 0) {
            return Err(ConfigError::Invalid("schedule has no levels".into()));
        }
        if self.queries == Some(0) {
            return Err(ConfigError::Invalid("queries must be positive".into()));
        }
        Ok(())
    }

    /// Generator parameters with the config-level overrides applied.
    pub fn bottleneck_params(&self) -> BottleneckParams {
        let mut p = self.bottleneck.clone();
        if let Some(n) = self.queries {
            p.queries = n;
        }
        if let Some(s) = &self.schedule {
            p.schedule = s.clone();
        }
        if self.generator == Some(Generator::Mb) && p.walls < 2 {
            p.walls = 3;
        }
        p
    }

    pub fn urban_params(&self) -> UrbanParams {
        let mut p = self.urban.clone();
        if let Some(n) = self.queries {
            p.queries = n;
        }
        if let Some(s) = &self.schedule {
            p.schedule = s.clone();
        }
        p
    }

    pub fn terrain_params(&self) -> TerrainParams {
        let mut p = self.terrain.clone();
        if let Some(n) = self.queries {
            p.queries = n;
        }
        if let Some(s) = &self.schedule {
            p.schedule = s.clone();
        }
        p
    }

    /// Schedule the planners run with.
    pub fn schedule_spec(&self) -> Result<ScheduleSpec, ConfigError> {
        if let Some(s) = &self.schedule {
            return Ok(s.clone());
        }
        Ok(match self.domain()? {
            DomainKind::Point => self.bottleneck.schedule.clone(),
            DomainKind::Car => self.urban.schedule.clone(),
            DomainKind::Kinodynamic => self.terrain.schedule.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = ExperimentConfig::from_toml("generator = \"sb\"\nrules = [\"dsr\", \"dr\"]\n").unwrap();
        c.validate().unwrap();
        assert_eq!(c.domain().unwrap(), DomainKind::Point);
        assert_eq!(c.rule_specs().unwrap().len(), 2);
    }

    #[test]
    fn nested_generator_params() {
        let c = ExperimentConfig::from_toml("generator = \"mb\"\n[bottleneck]\nwalls = 4\ngap_min = 0.7\n").unwrap();
        let p = c.bottleneck_params();
        assert_eq!((p.walls, p.gap_min), (4, 0.7));
    }

    #[test]
    fn mb_defaults_to_three_walls() {
        let c = ExperimentConfig::from_toml("generator = \"mb\"").unwrap();
        assert_eq!(c.bottleneck_params().walls, 3);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "generator = \"sb\"\nbudget = 0",
            "generator = \"sb\"\nrules = []",
            "generator = \"sb\"\nrules = [\"fast\"]",
            "generator = \"sb\"\nrules = [\"dr\", \"igha-inf\"]",
            "map = \"a.occ\"",
            "map = \"a.occ\"\nquery_file = \"q.csv\"",
            "",
        ] {
            let c = ExperimentConfig::from_toml(text).unwrap();
            assert!(c.validate().is_err(), "{text:?} accepted");
        }
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn file_source() {
        let c = ExperimentConfig::from_toml("map = \"a.occ\"\nquery_file = \"q.csv\"\ndomain = \"car\"").unwrap();
        c.validate().unwrap();
        assert_eq!(c.domain().unwrap(), DomainKind::Car);
    }
}
