use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use moea_cli::config::{parse_seeds, ConfigError};
use moea_cli::score::{read_fronts, render_scores, score_fronts};
use moea_cli::{demo, load_config, parse_config, run_experiment, Overrides, Registry, RunConfig};
use moea_core::metrics::BeyondReference;

#[derive(Parser)]
#[command(
    name = "moea",
    version,
    about = "Goal-sequence multi-objective evolutionary optimizer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark experiment from a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run the servo controller design study.
    Servo {
        /// Defaults to the shipped servo config.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Compute SSC and UD for fronts in a CSV file.
    Score {
        #[arg(long)]
        front: PathBuf,
        /// Reference point, comma separated.
        #[arg(long = "ref", default_value = "1,1")]
        reference: String,
        /// Sharing distance for UD; derived from each front when omitted.
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_enum, default_value_t = Beyond::Exclude)]
        beyond: Beyond,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a shipped configuration, or `all` of them.
    Demo {
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args, Clone, Default)]
struct OverrideArgs {
    /// Seed list, e.g. `0,1,2` or `0..5`.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Beyond {
    Exclude,
    Reject,
}

enum Failure {
    Config(anyhow::Error),
    Run(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.into())
    }
}

fn overrides(a: &OverrideArgs) -> Result<Overrides, Failure> {
    let seeds = match &a.seed {
        Some(s) => Some(
            parse_seeds(s)
                .ok_or_else(|| Failure::Config(anyhow::anyhow!("invalid seed list {s:?}")))?,
        ),
        None => None,
    };
    Ok(Overrides {
        seeds,
        out: a.out.clone(),
        generations: a.generations,
        population: a.pop,
        threads: a.threads,
    })
}

fn execute(cfg: &RunConfig, registry: &Registry) -> Result<(), Failure> {
    let exp = run_experiment(cfg, registry).map_err(|e| Failure::Run(e.into()))?;
    for r in &exp.runs {
        log::info!(
            "seed {}: front {} ud {:.4} neval {}",
            r.artifact.seed,
            r.artifact.front().len(),
            r.metrics.ud,
            r.metrics.neval
        );
    }
    if exp.complete() {
        Ok(())
    } else {
        Err(Failure::Run(anyhow::anyhow!(
            "{} of {} seeds failed; see {}",
            exp.failures.len(),
            cfg.seeds.len(),
            cfg.out.join("MANIFEST").display()
        )))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let registry = Registry::default();
    match cli.command {
        Command::Run {
            config,
            overrides: o,
        } => {
            let mut cfg = load_config(&config, &registry)
                .with_context(|| format!("in {}", config.display()))
                .map_err(Failure::Config)?;
            overrides(&o)?.apply(&mut cfg)?;
            execute(&cfg, &registry)
        }
        Command::Servo {
            config,
            overrides: o,
        } => {
            let mut cfg = match config {
                Some(p) => load_config(&p, &registry)
                    .with_context(|| format!("in {}", p.display()))
                    .map_err(Failure::Config)?,
                None => parse_config(demo::find("servo").expect("shipped").config, &registry)?,
            };
            if cfg.problem != "SERVO" {
                return Err(Failure::Config(anyhow::anyhow!(
                    "servo expects problem = SERVO, found {}",
                    cfg.problem
                )));
            }
            overrides(&o)?.apply(&mut cfg)?;
            execute(&cfg, &registry)
        }
        Command::Score {
            front,
            reference,
            sigma,
            beyond,
            out,
        } => {
            let reference = moea_cli::config::parse_list(&reference).ok_or_else(|| {
                Failure::Config(anyhow::anyhow!("invalid reference point {reference:?}"))
            })?;
            let file = std::fs::File::open(&front)
                .with_context(|| format!("cannot open {}", front.display()))
                .map_err(Failure::Config)?;
            let fronts = read_fronts(file).map_err(|e| Failure::Run(e.into()))?;
            let beyond = match beyond {
                Beyond::Exclude => BeyondReference::Exclude,
                Beyond::Reject => BeyondReference::Reject,
            };
            let scores = score_fronts(&fronts, &reference, sigma, beyond)
                .map_err(|e| Failure::Run(e.into()))?;
            let table = render_scores(&scores);
            match out {
                Some(p) => std::fs::write(&p, table)
                    .with_context(|| format!("cannot write {}", p.display()))
                    .map_err(Failure::Run)?,
                None => print!("{table}"),
            }
            Ok(())
        }
        Command::Demo {
            name,
            list,
            overrides: o,
        } => {
            if list || name.is_none() {
                for d in demo::DEMOS {
                    println!("{:<22} {}", d.name, d.summary);
                }
                return Ok(());
            }
            let name = name.unwrap();
            let chosen: Vec<&demo::Demo> = if name == "all" {
                demo::DEMOS.iter().collect()
            } else {
                vec![demo::find(&name)
                    .ok_or_else(|| Failure::Config(anyhow::anyhow!("no demo named {name:?}")))?]
            };
            let o = overrides(&o)?;
            for d in chosen {
                let mut cfg = parse_config(d.config, &registry)?;
                let mut o = o.clone();
                if let (Some(base), true) = (&o.out, name == "all") {
                    o.out = Some(base.join(d.name));
                }
                o.apply(&mut cfg)?;
                log::info!("demo {}: {}", d.name, d.summary);
                execute(&cfg, &registry)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(2)
        }
    }
}
