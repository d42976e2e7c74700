use std::path::Path;
use std::process::{Command, Output};

use repeatprune::generators::{AuctionParams, PerturbationSpec};
use repeatprune::Schedule;
use repeatprune_cli::experiment::CSV_HEADER;
use repeatprune_cli::{run_experiment_with_workers, DomainConfig, ExperimentConfig, GraphSource, LpSource, SearchSource};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repeatprune")).args(args).env_remove("REPEATPRUNE_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_grid() -> ExperimentConfig {
    ExperimentConfig {
        trials: 12,
        horizon: 15,
        ..ExperimentConfig::new(DomainConfig::ShortestPath {
            graph: GraphSource::Grid { width: 6, height: 5, weight_scale: 10.0, source: None, terminal: None },
            perturbation: PerturbationSpec::Gaussian { sigma: 1.0 },
        })
    }
}

#[test]
fn config_round_trips_through_json() {
    let configs = [
        small_grid(),
        ExperimentConfig {
            schedule: Schedule::Custom { values: vec![1.0, 0.1 + 0.2, 1.0 / 3.0] },
            horizon: 3,
            ..ExperimentConfig::new(DomainConfig::Lp {
                program: LpSource::Auction { params: AuctionParams { value_scale: 0.1, ..Default::default() }, sigma: 0.7 },
            })
        },
        ExperimentConfig {
            csv_path: Some("out/a.csv".into()),
            fixed_sequence: true,
            ..ExperimentConfig::new(DomainConfig::StringSearch { source: SearchSource::File { path: "s.txt".into() } })
        },
        ExperimentConfig::new(DomainConfig::Tight { k: 7 }),
    ];
    for c in configs {
        let json = c.to_json();
        let back = ExperimentConfig::from_json(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), json);
    }
    assert!(ExperimentConfig::from_json(r#"{"nonsense": 1}"#).is_err());
}

#[test]
fn single_round_full_exploration() {
    let cfg = ExperimentConfig { trials: 1, horizon: 1, schedule: Schedule::Constant { p: 1.0 }, ..small_grid() };
    let out = run_experiment_with_workers(&cfg, 1).unwrap();
    let csv = out.csv();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER);
    let fields: Vec<_> = lines[1].split(',').collect();
    assert_eq!(fields[0..3], ["0", "1", "true"]);
    assert_eq!(fields[5], "false");
}

#[test]
fn csv_rows_and_recount() {
    let out = run_experiment_with_workers(&small_grid(), 3).unwrap();
    let csv = out.csv();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12 * 15);
    let mistakes = rows.iter().filter(|r| r[5] == "true").count();
    assert_eq!(out.summary.mistake_fraction, mistakes as f64 / rows.len() as f64);
    for r in &rows {
        assert_eq!(r[7].is_empty(), r[2] == "false");
    }
    let mut sorted = rows.clone();
    sorted.sort_by_key(|r| (r[0].parse::<usize>().unwrap(), r[1].parse::<usize>().unwrap()));
    assert_eq!(sorted, rows);
}

#[test]
fn tight_summary_matches_closed_forms() {
    let cfg = ExperimentConfig {
        trials: 4000,
        schedule: Schedule::Constant { p: 0.5 },
        horizon: 12,
        ..ExperimentConfig::new(DomainConfig::Tight { k: 3 })
    };
    let s = run_experiment_with_workers(&cfg, 2).unwrap().summary;
    let e = s.bounds.tight.unwrap();
    assert!((s.s_star_size.mean - e.expected_s_star).abs() <= 4.0 * s.s_star_size.se);
    assert!((s.total_mistakes.mean - e.expected_mistakes).abs() <= 4.0 * s.total_mistakes.se);
}

#[test]
fn fixed_sequence_shares_instances() {
    let cfg = ExperimentConfig { fixed_sequence: true, schedule: Schedule::Constant { p: 1.0 }, ..small_grid() };
    let out = run_experiment_with_workers(&cfg, 2).unwrap();
    let first = &out.trials[0].baseline_work;
    assert!(out.trials.iter().all(|t| &t.baseline_work == first && t.s_star_size == out.trials[0].s_star_size));
}

#[test]
fn invalid_configs_are_rejected() {
    for cfg in [
        ExperimentConfig { trials: 0, ..small_grid() },
        ExperimentConfig { horizon: 0, ..small_grid() },
        ExperimentConfig { schedule: Schedule::Custom { values: vec![1.0] }, ..small_grid() },
        ExperimentConfig::new(DomainConfig::Tight { k: 0 }),
    ] {
        assert!(run_experiment_with_workers(&cfg, 1).is_err());
    }
}

#[test]
fn bounds_command() {
    let o = bin(&["bounds", "--mistake", "5", "1.0", "100", "--lower", "100", "30", "--tight", "5", "0.3", "30"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let value = |key: &str| -> f64 {
        text.lines().find(|l| l.starts_with(key)).unwrap().split_whitespace().last().unwrap().parse().unwrap()
    };
    assert_eq!(value("mistake_bound"), 0.0);
    assert_eq!(value("lower_bound_product"), 375.0);
    assert!((value("tight_expected_s_star") - 5.0 * (1.0 - 0.8f64.powi(30))).abs() < 1e-12);
    assert_eq!(bin(&["bounds"]).status.code(), Some(2));
    assert_eq!(bin(&["bounds", "--mistake", "5", "2.0", "10"]).status.code(), Some(2));
}

#[test]
fn verify_command() {
    let a = bin(&["verify", "--seed", "3", "--instances", "40"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = bin(&["verify", "--seed", "3", "--instances", "40"]);
    assert_eq!(a.stdout, b.stdout);
    let f = bin(&["verify", "--seed", "3", "--instances", "10", "--inject-fault"]);
    assert_eq!(f.status.code(), Some(1));
    assert!(stdout(&f).contains("counterexample (seed 3)"));
    assert_eq!(bin(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn run_writes_outputs_and_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let common = ["run", "--domain", "search", "--text-len", "40", "--pattern-len", "3", "--trials", "6", "-T", "10"];
    let run = |csv: &str, workers: &str| {
        let mut args = common.to_vec();
        let (c, s) = (path(csv), path(&format!("{csv}.json")));
        args.extend(["--csv", &c, "--summary", &s, "--parallelism", workers]);
        assert!(bin(&args).status.success());
        (std::fs::read(c).unwrap(), std::fs::read(s).unwrap())
    };
    let one = run("a.csv", "1");
    let four = run("b.csv", "4");
    assert_eq!(one, four);
    assert_eq!(String::from_utf8_lossy(&one.0).lines().count(), 61);
}

#[test]
fn gen_then_run_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    assert!(bin(&["gen", "grid", "--width", "4", "--height", "3", "--out", &p("g.txt")]).status.success());
    let o = bin(&["run", "--domain", "graph-file", "--graph", &p("g.txt"), "--source", "0", "--terminal", "11", "--trials", "3", "-T", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"mistake_fraction\""));

    let gen = bin(&["gen", "auction", "--bidders", "3", "--goods", "4", "--bids-per-bidder", "2", "--out", &p("lp.txt"), "--objectives", &p("x.txt"), "--rounds", "8"]);
    assert!(gen.status.success());
    let o = bin(&["run", "--domain", "lp-file", "--lp", &p("lp.txt"), "--objectives", &p("x.txt"), "--trials", "4", "-T", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let too_long = bin(&["run", "--domain", "lp-file", "--lp", &p("lp.txt"), "--objectives", &p("x.txt"), "-T", "9"]);
    assert_eq!(too_long.status.code(), Some(2));

    assert!(bin(&["gen", "search", "--text-len", "30", "--pattern-len", "2", "--rounds", "5", "--out", &p("s.txt")]).status.success());
    let o = bin(&["run", "--domain", "search-file", "--search", &p("s.txt"), "--trials", "2", "-T", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_and_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(&cfg_path, ExperimentConfig { trials: 2, horizon: 4, ..small_grid() }.to_json()).unwrap();
    let cfg = cfg_path.to_string_lossy();
    let printed = bin(&["run", "--config", &cfg, "--trials", "5", "--print-config"]);
    let back = ExperimentConfig::from_json(&stdout(&printed)).unwrap();
    assert_eq!((back.trials, back.horizon), (5, 4));
    assert!(bin(&["run", "--config", &cfg]).status.success());

    assert_eq!(bin(&["run", "--config", "/nonexistent/cfg.json"]).status.code(), Some(3));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "directed 2 1\n0 1 -3\n").unwrap();
    let o = bin(&["run", "--domain", "graph-file", "--graph", &bad.to_string_lossy(), "--source", "0", "--terminal", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(bin(&["run", "--schedule", "sometimes"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    let unwritable = Path::new("/nonexistent/dir/out.csv").to_string_lossy().into_owned();
    assert_eq!(bin(&["run", "--domain", "tight", "--trials", "1", "--csv", &unwritable]).status.code(), Some(3));
}

#[test]
fn worker_env_override() {
    std::env::set_var(repeatprune_cli::experiment::WORKERS_ENV, "3");
    assert_eq!(repeatprune_cli::experiment::worker_count(7), 3);
    std::env::remove_var(repeatprune_cli::experiment::WORKERS_ENV);
    assert_eq!(repeatprune_cli::experiment::worker_count(7), 7);
}
