//! Seeded runs and the files they produce.

use std::path::Path;

use log::{info, warn};
use moea_core::metrics::front_sigma;
use moea_core::servo::{simulate_pid, simulate_rpt, Response, ServoObjectives, HORIZON};
use moea_core::{evolve, Error as CoreError, MetricReport, RunArtifact, ServoProblem, SpecTree};
use statrs::statistics::{Data, OrderStatistics};

use crate::config::RunConfig;
use crate::output::{num, write_all, OutputFile, Table};
use crate::problems::Registry;

#[derive(Debug)]
pub enum ExperimentError {
    UnknownProblem(String),
    Io(std::io::Error),
}

impl std::fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::UnknownProblem(p) => write!(f, "unknown problem {p:?}"),
            Self::Io(e) => write!(f, "cannot write outputs: {e}"),
        }
    }
}

impl std::error::Error for ExperimentError {}

impl From<std::io::Error> for ExperimentError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

/// One finished seed.
#[derive(Debug, Clone)]
pub struct SeedRun {
    pub artifact: RunArtifact,
    pub metrics: MetricReport,
    /// Covered area, only for two-objective problems.
    pub ssc: Option<f64>,
}

#[derive(Debug)]
pub struct Experiment {
    pub runs: Vec<SeedRun>,
    pub failures: Vec<(u64, String)>,
    pub files: Vec<OutputFile>,
}

impl Experiment {
    pub fn complete(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn file(&self, name: &str) -> Option<&OutputFile> {
        self.files.iter().find(|f| f.path == Path::new(name))
    }
}

/// Runs every seed of `cfg`, renders the outputs and writes them to
/// `cfg.out` with a manifest. Failed seeds are recorded, not fatal.
pub fn run_experiment(cfg: &RunConfig, registry: &Registry) -> Result<Experiment, ExperimentError> {
    let exp = execute(cfg, registry)?;
    let notes: Vec<String> = exp
        .failures
        .iter()
        .map(|(s, e)| format!("seed {s} failed: {e}"))
        .collect();
    write_all(&cfg.out, &exp.files, exp.complete(), &notes)?;
    info!(
        "wrote {} files to {}",
        exp.files.len() + 1,
        cfg.out.display()
    );
    Ok(exp)
}

/// Runs and renders without touching the filesystem.
pub fn execute(cfg: &RunConfig, registry: &Registry) -> Result<Experiment, ExperimentError> {
    if registry.objectives(&cfg.problem).is_none() {
        return Err(ExperimentError::UnknownProblem(cfg.problem.clone()));
    }
    let results = run_seeds(cfg, registry);
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for (seed, r) in cfg.seeds.iter().zip(results) {
        match r {
            Ok(run) => runs.push(run),
            Err(e) => {
                warn!("seed {seed} failed: {e}");
                failures.push((*seed, e.to_string()));
            }
        }
    }
    let files = render(cfg, &runs);
    Ok(Experiment {
        runs,
        failures,
        files,
    })
}

fn run_seeds(cfg: &RunConfig, registry: &Registry) -> Vec<Result<SeedRun, CoreError>> {
    let one = |seed: u64| -> Result<SeedRun, CoreError> {
        let problem = registry
            .create(&cfg.problem)
            .expect("problem checked before running");
        let engine = moea_core::EngineConfig {
            seed,
            ..cfg.engine.clone()
        };
        let artifact = evolve(problem.as_ref(), &cfg.spec, &engine)?;
        score(cfg, artifact)
    };
    let workers = cfg.threads.min(cfg.seeds.len()).max(1);
    if workers == 1 {
        return cfg.seeds.iter().map(|&s| one(s)).collect();
    }
    let mut slots: Vec<Option<Result<SeedRun, CoreError>>> =
        (0..cfg.seeds.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let one = &one;
                scope.spawn(move || {
                    (w..cfg.seeds.len())
                        .step_by(workers)
                        .map(|i| (i, one(cfg.seeds[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every seed ran"))
        .collect()
}

/// Default reference point for the covered-area measure: both benchmark
/// fronts lie inside the unit box.
pub fn default_reference(m: usize) -> Vec<f64> {
    vec![1.0; m]
}

fn score(cfg: &RunConfig, artifact: RunArtifact) -> Result<SeedRun, CoreError> {
    let front: Vec<Vec<f64>> = artifact
        .front()
        .iter()
        .map(|m| m.objective.as_slice().to_vec())
        .collect();
    let m = front.first().map_or(0, |f| f.len());
    let reference = cfg
        .reference
        .clone()
        .unwrap_or_else(|| default_reference(m));
    let sigma = front_sigma(&front)?;
    let ud = moea_core::ud(&front, sigma, 1.0)?;
    let ssc = if m == 2 {
        Some(moea_core::metrics::ssc_with(
            &front, &reference, cfg.beyond,
        )?)
    } else {
        None
    };
    let metrics = MetricReport {
        ssc: ssc.unwrap_or(f64::NAN),
        ud,
        neval: artifact.neval,
        sigma,
        reference_point: reference,
    };
    Ok(SeedRun {
        artifact,
        metrics,
        ssc,
    })
}

fn render(cfg: &RunConfig, runs: &[SeedRun]) -> Vec<OutputFile> {
    let mut files = vec![
        OutputFile::new("front.csv", front_csv(runs)),
        OutputFile::new("sigma_trace.csv", sigma_csv(runs)),
        OutputFile::new("metrics.csv", metrics_csv(runs)),
        OutputFile::new("stats.csv", stats_csv(runs)),
    ];
    let goals = goal_points(&cfg.spec);
    for run in runs {
        let seed = run.artifact.seed;
        files.push(OutputFile::new(
            format!("plots/front_{seed}.dat"),
            front_dat(&run.artifact, &goals),
        ));
        files.push(OutputFile::new(
            format!("plots/sigma_{seed}.dat"),
            sigma_dat(&run.artifact),
        ));
    }
    if cfg.problem == "SERVO" {
        files.extend(servo_files(runs, goals.first().map(|g| g.as_slice())));
    }
    files
}

pub fn front_csv(runs: &[SeedRun]) -> Vec<u8> {
    let (n, m) = runs
        .first()
        .and_then(|r| r.artifact.population.members.first())
        .map_or((0, 0), |i| (i.decision.len(), i.objective.len()));
    let mut header = vec![
        "run_id".to_string(),
        "generation".into(),
        "member_id".into(),
    ];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend((1..=m).map(|i| format!("f{i}")));
    header.extend(["rank".to_string(), "niche".into()]);
    let mut t = Table::new(&header);
    for run in runs {
        let a = &run.artifact;
        let generation = a.traces.last().map_or(0, |t| t.generation);
        for (id, ind) in a.population.members.iter().enumerate() {
            let mut row = vec![a.seed.to_string(), generation.to_string(), id.to_string()];
            row.extend(ind.decision.iter().map(|&v| num(v)));
            row.extend(ind.objective.iter().map(|&v| num(v)));
            row.extend([ind.rank.to_string(), num(ind.niche_count)]);
            t.row(row);
        }
    }
    t.into_bytes()
}

pub fn sigma_csv(runs: &[SeedRun]) -> Vec<u8> {
    let mut t = Table::new(&[
        "run_id",
        "generation",
        "d_min",
        "d_max",
        "d",
        "sigma",
        "front_size",
        "comparisons",
    ]);
    for run in runs {
        for tr in &run.artifact.traces {
            t.row([
                run.artifact.seed.to_string(),
                tr.generation.to_string(),
                num(tr.d_min),
                num(tr.d_max),
                num(tr.d),
                num(tr.sigma),
                tr.front.len().to_string(),
                tr.comparisons.to_string(),
            ]);
        }
    }
    t.into_bytes()
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn metrics_csv(runs: &[SeedRun]) -> Vec<u8> {
    let mut t = Table::new(&["run_id", "ssc", "ud", "neval", "sigma_used", "ref_point"]);
    for run in runs {
        let r = &run.metrics;
        let reference: Vec<String> = r.reference_point.iter().map(|&v| num(v)).collect();
        t.row([
            run.artifact.seed.to_string(),
            opt_num(run.ssc),
            num(r.ud),
            r.neval.to_string(),
            num(r.sigma),
            reference.join(";"),
        ]);
    }
    t.into_bytes()
}

/// Minimum, quartiles and maximum of `values`.
pub fn five_numbers(values: &[f64]) -> Option<[f64; 5]> {
    if values.is_empty() {
        return None;
    }
    let mut d = Data::new(values.to_vec());
    Some([
        d.quantile(0.0),
        d.lower_quartile(),
        d.median(),
        d.upper_quartile(),
        d.quantile(1.0),
    ])
}

pub fn stats_csv(runs: &[SeedRun]) -> Vec<u8> {
    let mut t = Table::new(&["metric", "runs", "min", "q1", "median", "q3", "max"]);
    let columns: [(&str, Vec<f64>); 4] = [
        ("ssc", runs.iter().filter_map(|r| r.ssc).collect()),
        ("ud", runs.iter().map(|r| r.metrics.ud).collect()),
        (
            "neval",
            runs.iter().map(|r| r.metrics.neval as f64).collect(),
        ),
        (
            "sigma",
            runs.iter().map(|r| r.artifact.final_sigma()).collect(),
        ),
    ];
    for (name, values) in columns {
        if let Some(q) = five_numbers(&values) {
            let mut row = vec![name.to_string(), values.len().to_string()];
            row.extend(q.iter().map(|&v| num(v)));
            t.row(row);
        }
    }
    t.into_bytes()
}

fn goal_points(spec: &SpecTree) -> Vec<Vec<f64>> {
    spec.leaves()
        .iter()
        .filter_map(|l| l.goal.as_ref().map(|g| g.goal.clone()))
        .collect()
}

/// Rank-1 objectives sorted by the first objective, then one annotation
/// block per goal.
pub fn front_dat(a: &RunArtifact, goals: &[Vec<f64>]) -> Vec<u8> {
    let mut pts: Vec<&[f64]> = a.front().iter().map(|m| m.objective.as_slice()).collect();
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]));
    let m = pts.first().map_or(0, |p| p.len());
    let cols: Vec<String> = (1..=m).map(|i| format!("f{i}")).collect();
    let mut s = format!("# {}\n", cols.join(" "));
    for p in pts {
        s.push_str(&p.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    for g in goals {
        s.push_str("\n\n# goal\n");
        s.push_str(&g.iter().map(|&v| num(v)).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    s.into_bytes()
}

pub fn sigma_dat(a: &RunArtifact) -> Vec<u8> {
    let mut s = String::from("# generation sigma d\n");
    for t in &a.traces {
        s.push_str(&format!("{} {} {}\n", t.generation, num(t.sigma), num(t.d)));
    }
    s.into_bytes()
}

/// Index into `front` of the member whose worst goal ratio is smallest.
pub fn best_compromise(front: &[&[f64]], goal: &[f64]) -> Option<usize> {
    let worst = |f: &[f64]| {
        f.iter()
            .zip(goal)
            .map(|(v, g)| v / g)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    (0..front.len()).min_by(|&a, &b| worst(front[a]).total_cmp(&worst(front[b])))
}

fn response_rows(t: &mut Table, id: &str, resp: &Response) {
    for k in 0..resp.y.len() {
        t.row([
            id.to_string(),
            k.to_string(),
            num(resp.time(k)),
            num(resp.r),
            num(resp.u[k]),
            num(resp.y[k]),
        ]);
    }
}

fn servo_files(runs: &[SeedRun], goal: Option<&[f64]>) -> Vec<OutputFile> {
    let default_goal = moea_core::ServoGoals::default().to_vec();
    let goal = goal.unwrap_or(&default_goal);
    let problem = ServoProblem::default();
    let mut header = vec!["run_id".to_string(), "member_id".into()];
    header.extend(ServoObjectives::NAMES.iter().map(|n| n.to_string()));
    let mut tradeoff = Table::new(&header);
    let mut response = Table::new(&["run_id", "k", "t", "r", "u", "y"]);
    let mut out = Vec::new();
    for run in runs {
        let a = &run.artifact;
        let members = a.front();
        let objs: Vec<&[f64]> = members.iter().map(|m| m.objective.as_slice()).collect();
        let mut dat = format!("# {}\n", ServoObjectives::NAMES.join(" "));
        for (id, f) in objs.iter().enumerate() {
            let ratios: Vec<String> = f.iter().zip(goal).map(|(v, g)| num(v / g)).collect();
            dat.push_str(&ratios.join(" "));
            dat.push('\n');
            let mut row = vec![a.seed.to_string(), id.to_string()];
            row.extend(ratios);
            tradeoff.row(row);
        }
        out.push(OutputFile::new(
            format!("plots/tradeoff_{}.dat", a.seed),
            dat.into_bytes(),
        ));
        if let Some(best) = best_compromise(&objs, goal) {
            let x: &[f64] = &members[best].decision;
            let p: [f64; 6] = x.try_into().expect("servo decision has six parameters");
            if let Ok(resp) = problem.simulate(&p) {
                response_rows(&mut response, &a.seed.to_string(), &resp);
                out.push(OutputFile::new(
                    format!("plots/response_{}.dat", a.seed),
                    response_dat(&resp),
                ));
            }
        }
    }
    for (id, resp) in [
        ("pid", simulate_pid(1.0, HORIZON)),
        ("rpt", simulate_rpt(1.0, HORIZON)),
    ] {
        if let Ok(resp) = resp {
            response_rows(&mut response, id, &resp);
        }
    }
    out.push(OutputFile::new("tradeoff.csv", tradeoff.into_bytes()));
    out.push(OutputFile::new("response.csv", response.into_bytes()));
    out
}

fn response_dat(resp: &Response) -> Vec<u8> {
    let mut s = String::from("# t r u y\n");
    for k in 0..resp.y.len() {
        s.push_str(&format!(
            "{} {} {} {}\n",
            num(resp.time(k)),
            num(resp.r),
            num(resp.u[k]),
            num(resp.y[k])
        ));
    }
    s.into_bytes()
}
