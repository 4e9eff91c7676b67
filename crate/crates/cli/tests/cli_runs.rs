use std::process::Command;

use moea_cli::{execute, parse_config, run_experiment, Registry};

fn config(text: &str) -> moea_cli::RunConfig {
    parse_config(text, &Registry::default()).unwrap()
}

fn csv_rows(bytes: &[u8]) -> Vec<String> {
    String::from_utf8(bytes.to_vec())
        .unwrap()
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn zero_generations_writes_the_initial_population() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config("problem = FON\npopulation = 30\ngenerations = 0\nseeds = 7\n");
    cfg.out = dir.path().to_path_buf();
    let exp = run_experiment(&cfg, &Registry::default()).unwrap();
    assert!(exp.complete());
    let front = std::fs::read(dir.path().join("front.csv")).unwrap();
    let rows = csv_rows(&front);
    assert_eq!(rows.len(), 31);
    assert!(rows[0].starts_with("run_id,generation,member_id,x1,"));
    assert!(rows[1].starts_with("7,0,0,"));
    let manifest = std::fs::read_to_string(dir.path().join("MANIFEST")).unwrap();
    assert!(manifest.starts_with("status: complete"));
    for f in &exp.files {
        assert!(manifest.contains(&f.path.display().to_string()));
        let first = f.text().lines().next().unwrap();
        assert!(
            first.starts_with("run_id") || first.starts_with("metric") || first.starts_with('#')
        );
    }
}

#[test]
fn five_seeds_give_box_plot_statistics() {
    let cfg = config("problem = DEBDISC\npopulation = 20\ngenerations = 5\nseeds = 0..5\n");
    let exp = execute(&cfg, &Registry::default()).unwrap();
    let metrics = csv_rows(&exp.file("metrics.csv").unwrap().bytes);
    assert_eq!(metrics.len(), 6);
    assert_eq!(metrics[0], "run_id,ssc,ud,neval,sigma_used,ref_point");
    let stats = csv_rows(&exp.file("stats.csv").unwrap().bytes);
    assert_eq!(stats[0], "metric,runs,min,q1,median,q3,max");
    for name in ["ssc", "ud", "neval", "sigma"] {
        let row = stats
            .iter()
            .find(|r| r.starts_with(&format!("{name},")))
            .unwrap();
        let values: Vec<f64> = row.split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{row}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let text = "problem = FON\npopulation = 30\ngenerations = 10\nseeds = 1,2\ngoal = [0.7, 0.4]\n";
    let a = execute(&config(text), &Registry::default()).unwrap();
    let mut threaded = config(text);
    threaded.threads = 2;
    let b = execute(&threaded, &Registry::default()).unwrap();
    assert_eq!(a.files, b.files);
}

#[test]
fn servo_outputs_include_responses() {
    let cfg = config("problem = SERVO\npopulation = 20\ngenerations = 2\nnormalize = true\n");
    let exp = execute(&cfg, &Registry::default()).unwrap();
    let response = csv_rows(&exp.file("response.csv").unwrap().bytes);
    assert_eq!(response[0], "run_id,k,t,r,u,y");
    assert!(response.iter().any(|r| r.starts_with("pid,")));
    assert!(response.iter().any(|r| r.starts_with("rpt,")));
    assert!(exp.file("tradeoff.csv").is_some());
    assert!(exp.file("plots/tradeoff_0.dat").is_some());
}

#[test]
fn registered_problems_can_run() {
    let mut reg = Registry::default();
    reg.register("FON_ALIAS", 2, || {
        Box::new(moea_core::BenchmarkProblem::fon())
    });
    let cfg = parse_config(
        "problem = fon_alias\npopulation = 10\ngenerations = 1\n",
        &reg,
    )
    .unwrap();
    let exp = execute(&cfg, &reg).unwrap();
    assert_eq!(exp.runs.len(), 1);
}

#[test]
fn goal_runs_annotate_the_goal() {
    let cfg = config("problem = FON\npopulation = 20\ngenerations = 3\ngoal = [0.7, 0.4]\n");
    let exp = execute(&cfg, &Registry::default()).unwrap();
    let dat = exp.file("plots/front_0.dat").unwrap().text();
    assert!(dat.starts_with("# f1 f2\n"));
    assert!(dat.contains("# goal\n7.00000000e-1 4.00000000e-1\n"));
}

fn moea() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moea"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(
        &bad,
        "problem = FON\ngoal = [0.5, 0.5]\npg = [1, 1]\npf = [1, 0]\n",
    )
    .unwrap();
    let out = moea().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lines 2-4"));

    let good = dir.path().join("good.conf");
    std::fs::write(&good, "problem = FON\npopulation = 10\ngenerations = 2\n").unwrap();
    let target = dir.path().join("out");
    let out = moea()
        .args(["run", "--config"])
        .arg(&good)
        .args(["--seed", "3,4", "--out"])
        .arg(&target)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let metrics = std::fs::read_to_string(target.join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 3);

    let out = moea()
        .args(["score", "--front"])
        .arg(target.join("front.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.starts_with("run_id,points,ssc,ud,sigma_used\n3,"));

    let out = moea().args(["demo", "--list"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("fon_or_goals"));
    let out = moea().args(["demo", "missing"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

struct Broken(moea_core::ParameterSpace);

impl moea_core::Problem for Broken {
    fn name(&self) -> &str {
        "BROKEN"
    }

    fn space(&self) -> &moea_core::ParameterSpace {
        &self.0
    }

    fn num_objectives(&self) -> usize {
        2
    }

    fn evaluate(
        &self,
        _: &moea_core::DecisionVector,
    ) -> moea_core::Result<moea_core::ObjectiveVector> {
        Err(moea_core::Error::NonFiniteSignal(0))
    }
}

#[test]
fn failed_runs_mark_the_manifest_incomplete() {
    let mut reg = Registry::default();
    reg.register("BROKEN", 2, || {
        Box::new(Broken(
            moea_core::ParameterSpace::uniform(2, 0.0, 1.0).unwrap(),
        ))
    });
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = parse_config(
        "problem = broken\npopulation = 4\ngenerations = 1\nseeds = 0,1\n",
        &reg,
    )
    .unwrap();
    cfg.out = dir.path().to_path_buf();
    let exp = run_experiment(&cfg, &reg).unwrap();
    assert!(!exp.complete());
    assert_eq!(exp.failures.len(), 2);
    let manifest = std::fs::read_to_string(dir.path().join("MANIFEST")).unwrap();
    assert!(manifest.starts_with("status: incomplete"));
    assert!(manifest.contains("seed 1 failed"));
    assert!(dir.path().join("front.csv").exists());
}
