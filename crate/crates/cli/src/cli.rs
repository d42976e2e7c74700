use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use repeatprune::generators::{objective_sequence, synth_auction_lp, AuctionParams, BundleSize, PerturbationSpec, SearchWorkload};
use repeatprune::rng::{stream, Purpose};
use repeatprune::string_search::InstanceStream;
use repeatprune::Schedule;

use crate::bounds::{bounds_table, format_table, BoundsQuery};
use crate::config::{DomainConfig, ExperimentConfig, GraphSource, LpSource, SearchSource};
use crate::error::{write_file, CliError, CliResult};
use crate::experiment::run_experiment;
use crate::verify::{run_named, run_verify, VerifyOptions, VerifyReport, SUITES};

#[derive(Debug, Parser)]
#[command(name = "repeatprune", version, about = "Learned search-space pruning for repeated computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a multi-trial experiment and write per-round CSV and a JSON summary.
    Run(Box<RunArgs>),
    /// Evaluate the closed-form bounds.
    Bounds(BoundsArgs),
    /// Check the solvers against brute force on random small instances.
    Verify(VerifyArgs),
    /// Export a generated base problem in its text format.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    /// Perturbed weights on a synthetic grid.
    Grid,
    /// Perturbed weights on an edge-list file.
    GraphFile,
    /// The k parallel-edge construction.
    Tight,
    /// Synthetic auction LP relaxation.
    Auction,
    /// LP file with an objectives file.
    LpFile,
    /// Synthetic string search with planted hotspots.
    Search,
    /// String-search instance stream file.
    SearchFile,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Load the experiment from a JSON config; other flags override its common fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "grid")]
    pub domain: DomainKind,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Rounds per trial.
    #[arg(long, short = 'T')]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `inverse-sqrt`, `constant:P`, or `custom:p1,p2,...`.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Worker threads (0 = all cores); the REPEATPRUNE_WORKERS variable takes precedence.
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Use the same instance sequence in every trial.
    #[arg(long)]
    pub fixed_sequence: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Print the resolved config as JSON and exit.
    #[arg(long)]
    pub print_config: bool,
    #[command(flatten)]
    pub domain_args: DomainArgs,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    #[arg(long, default_value_t = 30)]
    pub width: usize,
    #[arg(long, default_value_t = 30)]
    pub height: usize,
    #[arg(long, default_value_t = 1.0)]
    pub weight_scale: f64,
    /// Source vertex (grid default: top-left).
    #[arg(long)]
    pub source: Option<usize>,
    /// Terminal vertex (grid default: bottom-right).
    #[arg(long)]
    pub terminal: Option<usize>,
    /// Edge-list file for `graph-file`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Gaussian noise level for weights and objectives.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Use uniform weight perturbation with this clamp instead of Gaussian.
    #[arg(long)]
    pub clamp: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 10)]
    pub bidders: usize,
    #[arg(long, default_value_t = 30)]
    pub goods: usize,
    #[arg(long, default_value_t = 4)]
    pub bids_per_bidder: usize,
    #[arg(long, default_value_t = 0.5)]
    pub bundle_p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub value_scale: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub capacity_jitter: f64,
    /// LP file for `lp-file`.
    #[arg(long)]
    pub lp: Option<PathBuf>,
    /// Objectives file for `lp-file`.
    #[arg(long)]
    pub objectives: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub text_len: usize,
    #[arg(long, default_value_t = 6)]
    pub pattern_len: usize,
    #[arg(long, default_value = "ACGT")]
    pub alphabet: String,
    #[arg(long, default_value_t = 4)]
    pub hotspots: usize,
    #[arg(long, default_value_t = 0.9)]
    pub plant_prob: f64,
    /// Instance-stream file for `search-file`.
    #[arg(long)]
    pub search: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("formula").required(true).multiple(true)
    .args(["mistake", "mistake_sqrt", "size", "size_sqrt", "tight", "lower"])))]
pub struct BoundsArgs {
    /// Mistake bound for constant p.
    #[arg(long, num_args = 3, value_names = ["S_STAR", "P", "T"])]
    pub mistake: Option<Vec<f64>>,
    /// Mistake bound for p_i = 1/sqrt(i).
    #[arg(long, num_args = 2, value_names = ["S_STAR", "T"])]
    pub mistake_sqrt: Option<Vec<f64>>,
    /// Pruned-set size bound for constant p.
    #[arg(long, num_args = 4, value_names = ["S_STAR", "U", "P", "T"])]
    pub size: Option<Vec<f64>>,
    /// Pruned-set size bound for p_i = 1/sqrt(i).
    #[arg(long, num_args = 3, value_names = ["S_STAR", "U", "T"])]
    pub size_sqrt: Option<Vec<f64>>,
    /// Expected |S*| and mistakes of the parallel-edge construction.
    #[arg(long, num_args = 3, value_names = ["K", "P", "T"])]
    pub tight: Option<Vec<f64>>,
    /// Lower bound on the work-mistake product.
    #[arg(long, num_args = 2, value_names = ["M", "T"])]
    pub lower: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances per suite.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    /// Only run the named suite(s).
    #[arg(long)]
    pub suite: Vec<String>,
    /// Self-test: corrupt every witness and expect failures.
    #[arg(long)]
    pub inject_fault: bool,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub what: GenKind,
    /// Root seed; matches `run --seed` so exported problems are the ones a run would use.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Grid graph as an edge list.
    Grid {
        #[arg(long, default_value_t = 30)]
        width: usize,
        #[arg(long, default_value_t = 30)]
        height: usize,
        #[arg(long, default_value_t = 1.0)]
        weight_scale: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Auction LP, plus optionally a sequence of perturbed objectives.
    Auction {
        #[arg(long, default_value_t = 10)]
        bidders: usize,
        #[arg(long, default_value_t = 30)]
        goods: usize,
        #[arg(long, default_value_t = 4)]
        bids_per_bidder: usize,
        #[arg(long, default_value_t = 0.5)]
        bundle_p: f64,
        #[arg(long, default_value_t = 1.0)]
        value_scale: f64,
        #[arg(long, default_value_t = 1e-3)]
        capacity_jitter: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        objectives: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        rounds: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Planted string-search instances as an instance stream.
    Search {
        #[arg(long, default_value_t = 200)]
        text_len: usize,
        #[arg(long, default_value_t = 6)]
        pattern_len: usize,
        #[arg(long, default_value = "ACGT")]
        alphabet: String,
        #[arg(long, default_value_t = 4)]
        hotspots: usize,
        #[arg(long, default_value_t = 0.9)]
        plant_prob: f64,
        #[arg(long, default_value_t = 30)]
        rounds: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs a parsed command; returns the exit status on success.
pub fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Run(args) => {
            let config = resolve_config(&args)?;
            if args.print_config {
                println!("{}", config.to_json());
                return Ok(0);
            }
            let output = run_experiment(&config)?;
            output.write(&config)?;
            if config.summary_path.is_none() {
                println!("{}", output.summary_json());
            } else {
                let s = &output.summary;
                println!(
                    "{} trials x {} rounds: mistake fraction {:.4}, exploit/full work {}",
                    s.trials,
                    s.horizon,
                    s.mistake_fraction,
                    s.exploit_work_ratio.map_or("n/a".to_string(), |r| format!("{r:.4}"))
                );
            }
            Ok(0)
        }
        Command::Bounds(args) => {
            let rows = bounds_table(&bounds_query(&args)?)?;
            print!("{}", format_table(&rows));
            Ok(0)
        }
        Command::Verify(args) => {
            let report = verify(&args)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{report}");
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Gen(args) => {
            generate(&args)?;
            Ok(0)
        }
    }
}

pub fn parse_schedule(s: &str) -> CliResult<Schedule> {
    let bad = || CliError::config(format!("bad schedule `{s}`; use inverse-sqrt, constant:P or custom:p1,p2,..."));
    let schedule = match s.split_once(':') {
        None if s == "inverse-sqrt" => Schedule::InverseSqrt,
        Some(("constant", p)) => Schedule::Constant { p: p.parse().map_err(|_| bad())? },
        Some(("custom", ps)) => Schedule::Custom {
            values: ps.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?,
        },
        _ => return Err(bad()),
    };
    schedule.validate()?;
    Ok(schedule)
}

fn required(path: &Option<PathBuf>, flag: &str, domain: &str) -> CliResult<PathBuf> {
    path.clone().ok_or_else(|| CliError::config(format!("--{flag} is required for --domain {domain}")))
}

fn domain_config(kind: DomainKind, d: &DomainArgs) -> CliResult<DomainConfig> {
    let perturbation = match d.clamp {
        Some(clamp) => PerturbationSpec::Uniform { clamp },
        None => PerturbationSpec::Gaussian { sigma: d.sigma },
    };
    let auction = AuctionParams {
        bidders: d.bidders,
        goods: d.goods,
        bids_per_bidder: d.bids_per_bidder,
        bundle: BundleSize::Geometric { p: d.bundle_p },
        value_scale: d.value_scale,
        capacity_jitter: d.capacity_jitter,
    };
    Ok(match kind {
        DomainKind::Grid => DomainConfig::ShortestPath {
            graph: GraphSource::Grid {
                width: d.width,
                height: d.height,
                weight_scale: d.weight_scale,
                source: d.source,
                terminal: d.terminal,
            },
            perturbation,
        },
        DomainKind::GraphFile => {
            let (Some(source), Some(terminal)) = (d.source, d.terminal) else {
                return Err(CliError::config("--source and --terminal are required for --domain graph-file"));
            };
            DomainConfig::ShortestPath {
                graph: GraphSource::File { path: required(&d.graph, "graph", "graph-file")?, source, terminal },
                perturbation,
            }
        }
        DomainKind::Tight => DomainConfig::Tight { k: d.k },
        DomainKind::Auction => DomainConfig::Lp { program: LpSource::Auction { params: auction, sigma: d.sigma } },
        DomainKind::LpFile => DomainConfig::Lp {
            program: LpSource::File {
                path: required(&d.lp, "lp", "lp-file")?,
                objectives: required(&d.objectives, "objectives", "lp-file")?,
            },
        },
        DomainKind::Search => DomainConfig::StringSearch {
            source: SearchSource::Synthetic {
                text_len: d.text_len,
                pattern_len: d.pattern_len,
                alphabet: d.alphabet.clone(),
                hotspots: d.hotspots,
                plant_prob: d.plant_prob,
            },
        },
        DomainKind::SearchFile => {
            DomainConfig::StringSearch { source: SearchSource::File { path: required(&d.search, "search", "search-file")? } }
        }
    })
}

pub fn resolve_config(args: &RunArgs) -> CliResult<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(domain_config(args.domain, &args.domain_args)?),
    };
    if let Some(t) = args.trials {
        config.trials = t;
    }
    if let Some(h) = args.horizon {
        config.horizon = h;
    }
    if let Some(s) = args.seed {
        config.root_seed = s;
    }
    if let Some(s) = &args.schedule {
        config.schedule = parse_schedule(s)?;
    }
    if let Some(p) = args.parallelism {
        config.parallelism = p;
    }
    if args.fixed_sequence {
        config.fixed_sequence = true;
    }
    if args.csv.is_some() {
        config.csv_path = args.csv.clone();
    }
    if args.summary.is_some() {
        config.summary_path = args.summary.clone();
    }
    config.validate()?;
    Ok(config)
}

fn count(v: f64, what: &str) -> CliResult<usize> {
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(CliError::config(format!("{what} must be a non-negative integer, got {v}")))
    }
}

pub fn bounds_query(args: &BoundsArgs) -> CliResult<BoundsQuery> {
    let mut q = BoundsQuery::default();
    if let Some(v) = &args.mistake {
        q.mistake = Some((count(v[0], "|S*|")?, v[1], count(v[2], "T")?));
    }
    if let Some(v) = &args.mistake_sqrt {
        q.mistake_sqrt = Some((count(v[0], "|S*|")?, count(v[1], "T")?));
    }
    if let Some(v) = &args.size {
        q.size = Some((count(v[0], "|S*|")?, count(v[1], "|U|")?, v[2], count(v[3], "T")?));
    }
    if let Some(v) = &args.size_sqrt {
        q.size_sqrt = Some((count(v[0], "|S*|")?, count(v[1], "|U|")?, count(v[2], "T")?));
    }
    if let Some(v) = &args.tight {
        q.tight = Some((count(v[0], "k")?, v[1], count(v[2], "T")?));
    }
    if let Some(v) = &args.lower {
        q.lower = Some((count(v[0], "m")?, count(v[1], "T")?));
    }
    Ok(q)
}

pub fn verify(args: &VerifyArgs) -> CliResult<VerifyReport> {
    let options = VerifyOptions { seed: args.seed, instances: args.instances, inject_fault: args.inject_fault };
    if args.suite.is_empty() {
        return Ok(run_verify(&options));
    }
    let suites = args
        .suite
        .iter()
        .map(|name| {
            run_named(&options, name).ok_or_else(|| {
                let known: Vec<_> = SUITES.iter().map(|s| s.0).collect();
                CliError::config(format!("unknown suite `{name}`; known: {}", known.join(", ")))
            })
        })
        .collect::<CliResult<_>>()?;
    Ok(VerifyReport { seed: args.seed, suites })
}

fn generate(args: &GenArgs) -> CliResult<()> {
    let seed = args.seed;
    match &args.what {
        GenKind::Grid { width, height, weight_scale, out } => {
            let (graph, base) = repeatprune::generators::synth_grid_graph(*width, *height, &mut stream(seed, 0, Purpose::BaseProblem))?;
            let base = repeatprune::shortest_path::EdgeWeights::new(base.into_vec().into_iter().map(|w| w * weight_scale).collect())?;
            write_file(out, &graph.to_edge_list(&base)?)
        }
        GenKind::Auction {
            bidders,
            goods,
            bids_per_bidder,
            bundle_p,
            value_scale,
            capacity_jitter,
            out,
            objectives,
            rounds,
            sigma,
        } => {
            let params = AuctionParams {
                bidders: *bidders,
                goods: *goods,
                bids_per_bidder: *bids_per_bidder,
                bundle: BundleSize::Geometric { p: *bundle_p },
                value_scale: *value_scale,
                capacity_jitter: *capacity_jitter,
            };
            let lp = synth_auction_lp(&params, &mut stream(seed, 0, Purpose::BaseProblem))?;
            write_file(out, &lp.program.to_text())?;
            if let Some(path) = objectives {
                let (xs, _) = objective_sequence(&lp.program, &lp.objective, *sigma, *rounds, &mut stream(seed, 0, Purpose::Instances))?;
                let text: String = xs.iter().map(|x| x.to_line() + "\n").collect();
                write_file(path, &text)?;
            }
            Ok(())
        }
        GenKind::Search { text_len, pattern_len, alphabet, hotspots, plant_prob, rounds, out } => {
            let workload = SearchWorkload::random(
                *text_len,
                *pattern_len,
                alphabet.as_bytes().to_vec(),
                *hotspots,
                *plant_prob,
                &mut stream(seed, 0, Purpose::BaseProblem),
            )?;
            let instances = repeatprune::generators::synth_search_sequence(&workload, *rounds, &mut stream(seed, 0, Purpose::Instances))?;
            let text = InstanceStream { alphabet: alphabet.bytes().collect::<BTreeSet<u8>>(), instances }.to_text();
            write_file(out, &text)
        }
    }
}

