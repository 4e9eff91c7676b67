//! Key-value run configuration.
//!
//! One `key = value` pair per line. `#` starts a comment. Keys:
//!
//! | key | value |
//! |-----|-------|
//! | `problem` | `FON`, `DEBDISC`, `SERVO` or a registered name |
//! | `population` / `pop` | population size |
//! | `generations` | generation count |
//! | `p_crossover`, `p_mutation` | probabilities |
//! | `tournament` | tournament size |
//! | `sharing` | `dynamic`, `none` or a fixed distance |
//! | `alpha` | sharing exponent |
//! | `normalize` | `true` / `false` |
//! | `elitism` | `sps`, `rank-only`, `none` |
//! | `mating_restriction` | `true` / `false` |
//! | `goal_domination` | `violation-set`, `full-vector` |
//! | `spec` | a full specification tree, e.g. `or(goal=[..], goal=[..])` |
//! | `goal`, `hard`, `pg`, `pf` | a single-leaf specification, one key per line |
//! | `seeds` | `0,1,2`, `0..5` or `0..=4` |
//! | `out` | output directory |
//! | `reference` | reference point for the covered-area measure |
//! | `beyond` | `exclude` or `reject` points beyond the reference |
//! | `threads` | worker slots for seeds |

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use moea_core::engine::Elitism;
use moea_core::metrics::BeyondReference;
use moea_core::{parse_spec, EngineConfig, GoalDomination, ServoGoals, SharingMode, SpecTree};

use crate::problems::Registry;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// First and last offending line, 1-based; `None` for whole-file problems.
    pub lines: Option<(usize, usize)>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            lines: Some((line, line)),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            lines: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lines {
            Some((a, b)) if a == b => write!(f, "line {a}: {}", self.message),
            Some((a, b)) => write!(f, "lines {a}-{b}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub engine: EngineConfig,
    /// Specification text as written; empty means the problem default.
    pub spec_text: String,
    pub spec: SpecTree,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    pub reference: Option<Vec<f64>>,
    pub beyond: BeyondReference,
    pub threads: usize,
}

impl RunConfig {
    pub fn new(problem: &str, registry: &Registry) -> Result<Self, ConfigError> {
        let m = registry
            .objectives(problem)
            .ok_or_else(|| ConfigError::general(format!("unknown problem {problem:?}")))?;
        Ok(Self {
            problem: problem.to_string(),
            engine: EngineConfig::default(),
            spec_text: String::new(),
            spec: default_spec(problem, m),
            seeds: vec![0],
            out: PathBuf::from("out"),
            reference: None,
            beyond: BeyondReference::Exclude,
            threads: 1,
        })
    }

    pub fn num_objectives(&self) -> usize {
        self.spec.leaves().first().map_or(0, |l| l.dims())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.seeds.is_empty() {
            return Err(ConfigError::general("at least one seed is required"));
        }
        if self.threads == 0 {
            return Err(ConfigError::general("threads must be at least 1"));
        }
        self.engine
            .validate()
            .map_err(|e| ConfigError::general(e.to_string()))
    }
}

fn default_spec(problem: &str, m: usize) -> SpecTree {
    if problem.eq_ignore_ascii_case("SERVO") {
        ServoGoals::default().spec()
    } else {
        SpecTree::pareto(m)
    }
}

pub fn load_config(path: &Path, registry: &Registry) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::general(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, registry)
}

const LEAF_KEYS: [&str; 4] = ["goal", "hard", "pg", "pf"];

pub fn parse_config(text: &str, registry: &Registry) -> Result<RunConfig, ConfigError> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, "expected `key = value`"))?;
        let key = key.trim().to_ascii_lowercase();
        let key = if key == "pop" {
            "population".to_string()
        } else {
            key
        };
        if let Some(prev) = seen.insert(key.clone(), line) {
            return Err(ConfigError::at(
                line,
                format!("duplicate key `{key}` (first on line {prev})"),
            ));
        }
        entries.push((line, key, value.trim().to_string()));
    }

    let problem = entries
        .iter()
        .find(|(_, k, _)| k == "problem")
        .map(|(_, _, v)| v.to_ascii_uppercase())
        .unwrap_or_else(|| "FON".to_string());
    let problem_line = seen.get("problem").copied();
    let mut cfg = RunConfig::new(&problem, registry).map_err(|e| ConfigError {
        lines: problem_line.map(|l| (l, l)),
        ..e
    })?;
    let m = registry.objectives(&problem).unwrap_or(2);

    let mut leaf_parts: Vec<(usize, String)> = Vec::new();
    let mut spec_line = None;
    for (line, key, value) in &entries {
        let line = *line;
        let bad =
            |what: &str| ConfigError::at(line, format!("invalid {what} {value:?} for `{key}`"));
        let e = &mut cfg.engine;
        match key.as_str() {
            "problem" => {}
            "population" => e.population_size = value.parse().map_err(|_| bad("integer"))?,
            "generations" => e.generations = value.parse().map_err(|_| bad("integer"))?,
            "p_crossover" => e.p_crossover = value.parse().map_err(|_| bad("number"))?,
            "p_mutation" => e.p_mutation = value.parse().map_err(|_| bad("number"))?,
            "tournament" => e.tournament_size = value.parse().map_err(|_| bad("integer"))?,
            "alpha" => e.alpha = value.parse().map_err(|_| bad("number"))?,
            "normalize" => e.normalize = parse_bool(value).ok_or_else(|| bad("boolean"))?,
            "mating_restriction" => {
                e.mating_restriction = parse_bool(value).ok_or_else(|| bad("boolean"))?
            }
            "sharing" => {
                e.sharing = match value.to_ascii_lowercase().as_str() {
                    "dynamic" => SharingMode::Dynamic,
                    "none" | "off" => SharingMode::None,
                    v => SharingMode::Fixed(v.parse().map_err(|_| bad("sharing mode"))?),
                }
            }
            "elitism" => {
                e.elitism = match value.to_ascii_lowercase().as_str() {
                    "sps" => Elitism::Sps,
                    "rank-only" | "rank_only" => Elitism::RankOnly,
                    "none" | "off" => Elitism::None,
                    _ => return Err(bad("elitism")),
                }
            }
            "goal_domination" => {
                e.goal_domination = match value.to_ascii_lowercase().as_str() {
                    "violation-set" | "violation_set" => GoalDomination::ViolationSet,
                    "full-vector" | "full_vector" => GoalDomination::FullVector,
                    _ => return Err(bad("reading")),
                }
            }
            "seeds" => cfg.seeds = parse_seeds(value).ok_or_else(|| bad("seed list"))?,
            "out" => cfg.out = PathBuf::from(value),
            "reference" => cfg.reference = Some(parse_list(value).ok_or_else(|| bad("point"))?),
            "beyond" => {
                cfg.beyond = match value.to_ascii_lowercase().as_str() {
                    "exclude" => BeyondReference::Exclude,
                    "reject" => BeyondReference::Reject,
                    _ => return Err(bad("policy")),
                }
            }
            "threads" => cfg.threads = value.parse().map_err(|_| bad("integer"))?,
            "spec" => spec_line = Some(line),
            k if LEAF_KEYS.contains(&k) => leaf_parts.push((line, format!("{k} = {value}"))),
            _ => return Err(ConfigError::at(line, format!("unknown key `{key}`"))),
        }
    }

    let leaf_form = spec_line.is_none();
    let (text, lines) = match (spec_line, leaf_parts.is_empty()) {
        (Some(l), true) => {
            let v = &entries.iter().find(|(line, _, _)| *line == l).unwrap().2;
            (v.clone(), (l, l))
        }
        (Some(l), false) => {
            return Err(ConfigError::at(
                l,
                "`spec` cannot be combined with goal/hard/pg/pf keys",
            ));
        }
        (None, false) => {
            let first = leaf_parts.first().unwrap().0;
            let last = leaf_parts.last().unwrap().0;
            let text = leaf_parts
                .iter()
                .map(|(_, p)| p.as_str())
                .collect::<Vec<_>>()
                .join("; ");
            (text, (first, last))
        }
        (None, true) => (String::new(), (0, 0)),
    };
    if !text.is_empty() {
        cfg.spec = parse_spec(&text, m).map_err(|e| {
            let mut message = e.to_string();
            // columns refer to the joined leaf text, not to the file
            if leaf_form {
                if let Some(i) = message.find("column ") {
                    if let Some(j) = message[i..].find(": ") {
                        message.replace_range(i..i + j + 2, "");
                    }
                }
            }
            ConfigError {
                lines: Some(lines),
                message,
            }
        })?;
        cfg.spec_text = text;
    }
    if let Some(r) = &cfg.reference {
        if r.len() != m {
            let l = seen["reference"];
            return Err(ConfigError::at(
                l,
                format!("reference needs {m} components, got {}", r.len()),
            ));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

/// `[a, b, ...]` or a bare comma list of numbers.
pub fn parse_list(v: &str) -> Option<Vec<f64>> {
    let inner = v.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect()
}

/// Comma list, `a..b` (exclusive) or `a..=b`; parts may be mixed.
pub fn parse_seeds(v: &str) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    for part in v.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..=") {
            out.extend(a.trim().parse::<u64>().ok()?..=b.trim().parse::<u64>().ok()?);
        } else if let Some((a, b)) = part.split_once("..") {
            out.extend(a.trim().parse::<u64>().ok()?..b.trim().parse::<u64>().ok()?);
        } else {
            out.push(part.parse().ok()?);
        }
    }
    (!out.is_empty()).then_some(out)
}
