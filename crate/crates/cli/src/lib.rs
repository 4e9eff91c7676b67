//! Configuration loading, seeded experiment runs and CSV output for the
//! `moea` binary.

pub mod config;
pub mod demo;
pub mod experiment;
pub mod output;
pub mod problems;
pub mod score;

pub use config::{load_config, parse_config, ConfigError, RunConfig};
pub use experiment::{execute, run_experiment, Experiment, ExperimentError, SeedRun};
pub use problems::Registry;

/// Command-line overrides applied on top of a loaded config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seeds: Option<Vec<u64>>,
    pub out: Option<std::path::PathBuf>,
    pub generations: Option<usize>,
    pub population: Option<usize>,
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<(), ConfigError> {
        if let Some(s) = &self.seeds {
            cfg.seeds = s.clone();
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(g) = self.generations {
            cfg.engine.generations = g;
        }
        if let Some(n) = self.population {
            cfg.engine.population_size = n;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        cfg.validate()
    }
}
