use std::fmt::Write as _;

use rayon::prelude::*;
use repeatprune::generators::{
    objective_sequence, synth_auction_lp, synth_grid_graph, synth_search_sequence, tight_construction,
    PerturbationSpec, SearchWorkload,
};
use repeatprune::lp::{LpOracle, LpProgram, Objective};
use repeatprune::rng::{derive_seed, stream, Purpose, StreamRng};
use repeatprune::shortest_path::{EdgeWeights, Graph, ShortestPathOracle};
use repeatprune::string_search::{InstanceStream, StringSearchOracle};
use repeatprune::pruning::{
    mistake_bound_for_schedule, mistake_bound_inverse_sqrt, pruned_size_bound, run_trial,
    tight_construction_expectations, DomainOracle, PrunerState, RoundRecord, Schedule, TightExpectations,
};
use serde::Serialize;

use crate::config::{DomainConfig, ExperimentConfig, GraphSource, LpSource, SearchSource};
use crate::error::{read_file, write_file, CliError, CliResult};

pub const CSV_HEADER: &str = "trial,round,explored,set_size,universe_size,mistake,work,witness_size";

/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "REPEATPRUNE_WORKERS";

/// One trial's pruner run and its paired always-explore baseline.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: usize,
    pub records: Vec<RoundRecord>,
    /// Work per round of the `p = 1` run on the same sequence.
    pub baseline_work: Vec<u64>,
    /// `|∪ S*(x_i)|` over the trial's sequence.
    pub s_star_size: usize,
    /// Objective draws rejected as degenerate while building the sequence.
    pub redraws: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub pruner_work: f64,
    pub baseline_work: f64,
    pub set_size: f64,
    pub mistake_rate: f64,
    pub explore_rate: f64,
}

/// Mean with its standard error across trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn of(samples: impl IntoIterator<Item = f64>) -> Estimate {
        let v: Vec<f64> = samples.into_iter().collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        Estimate { mean, se: (var / n).sqrt() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    /// Mistake bound at `p = min p_i`, averaged over trials' `|S*|`.
    pub mistake_bound: f64,
    /// `|S*| sqrt(T)`, for the inverse-square-root schedule.
    pub mistake_bound_sqrt: Option<f64>,
    pub pruned_size_bound: f64,
    pub tight: Option<TightExpectations>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub domain: String,
    pub trials: usize,
    pub horizon: usize,
    pub schedule: Schedule,
    pub root_seed: u64,
    pub universe_size: usize,
    /// Mistakes over all `trials · T` rounds.
    pub mistake_fraction: f64,
    pub total_mistakes: Estimate,
    pub s_star_size: Estimate,
    /// Per-trial mean of `|S_i|`.
    pub set_size: Estimate,
    pub explored_fraction: f64,
    pub mean_exploit_work: Option<f64>,
    pub mean_full_work: f64,
    /// `mean_exploit_work / mean_full_work`.
    pub exploit_work_ratio: Option<f64>,
    pub mean_pruner_work: f64,
    pub redrawn_objectives: usize,
    pub bounds: BoundsReport,
    pub per_round: Vec<RoundStats>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub trials: Vec<TrialResult>,
    pub summary: ExperimentSummary,
}

impl ExperimentOutput {
    /// Per-round CSV, sorted by `(trial, round)`.
    pub fn csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.trials.len() * self.summary.horizon);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            for r in &t.records {
                let witness = r.witness_size.map(|w| w.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    t.trial, r.round, r.explored, r.set_size, r.universe_size, r.mistake, r.work, witness
                )
                .unwrap();
            }
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }

    /// Writes the CSV and summary to the paths named in `config`, if any.
    pub fn write(&self, config: &ExperimentConfig) -> CliResult<()> {
        if let Some(path) = &config.csv_path {
            write_file(path, &self.csv())?;
        }
        if let Some(path) = &config.summary_path {
            write_file(path, &self.summary_json())?;
        }
        Ok(())
    }
}

/// Resolves the worker count: the env override wins, then the config, then all cores.
pub fn worker_count(configured: usize) -> usize {
    if let Some(n) = std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            return n;
        }
    }
    if configured > 0 {
        configured
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Runs every trial and aggregates. Output is independent of the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> CliResult<ExperimentOutput> {
    run_experiment_with_workers(config, worker_count(config.parallelism))
}

pub fn run_experiment_with_workers(config: &ExperimentConfig, workers: usize) -> CliResult<ExperimentOutput> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::config(e.to_string()))?;
    let (trials, universe_size) = pool.install(|| run_domain(config))?;
    let summary = summarize_trials(config, &trials, universe_size)?;
    Ok(ExperimentOutput { trials, summary })
}

fn run_domain(config: &ExperimentConfig) -> CliResult<(Vec<TrialResult>, usize)> {
    let root = config.root_seed;
    let horizon = config.horizon;
    let instance_rng = |trial: usize| {
        let index = if config.fixed_sequence { 0 } else { trial as u64 };
        stream(root, index, Purpose::Instances)
    };
    match &config.domain {
        DomainConfig::ShortestPath { graph, perturbation } => {
            let (graph, base) = load_graph(graph, root)?;
            let oracle = ShortestPathOracle::new(graph);
            let results = trials(config, &oracle, |trial| {
                let mut rng = instance_rng(trial);
                Ok((weight_sequence(&base, perturbation, horizon, &mut rng)?, 0))
            })?;
            Ok((results, oracle.universe_size()))
        }
        DomainConfig::Tight { k } => {
            let (graph, _) = tight_construction(*k, 1, &mut instance_rng(0))?;
            let oracle = ShortestPathOracle::new(graph);
            let results = trials(config, &oracle, |trial| {
                let (_, rounds) = tight_construction(*k, horizon, &mut instance_rng(trial))?;
                Ok((rounds, 0))
            })?;
            Ok((results, oracle.universe_size()))
        }
        DomainConfig::Lp { program: LpSource::Auction { params, sigma } } => {
            let lp = synth_auction_lp(params, &mut stream(root, 0, Purpose::BaseProblem))?;
            let oracle = LpOracle::new(lp.program);
            let results = trials(config, &oracle, |trial| {
                objective_sequence(oracle.program(), &lp.objective, *sigma, horizon, &mut instance_rng(trial))
            })?;
            Ok((results, oracle.universe_size()))
        }
        DomainConfig::Lp { program: LpSource::File { path, objectives } } => {
            let program = LpProgram::parse(&read_file(path)?).map_err(|source| CliError::Input { path: path.clone(), source })?;
            let xs = Objective::parse_lines(&read_file(objectives)?, program.cols())
                .map_err(|source| CliError::Input { path: objectives.clone(), source })?;
            let xs = take_prefix(xs, horizon, objectives)?;
            let oracle = LpOracle::new(program);
            let results = trials(config, &oracle, |_| Ok((xs.clone(), 0)))?;
            Ok((results, oracle.universe_size()))
        }
        DomainConfig::StringSearch { source: SearchSource::Synthetic { text_len, pattern_len, alphabet, hotspots, plant_prob } } => {
            let workload = SearchWorkload::random(
                *text_len,
                *pattern_len,
                alphabet.as_bytes().to_vec(),
                *hotspots,
                *plant_prob,
                &mut stream(root, 0, Purpose::BaseProblem),
            )?;
            let oracle = StringSearchOracle::new(*text_len, *pattern_len)?;
            let results = trials(config, &oracle, |trial| {
                Ok((synth_search_sequence(&workload, horizon, &mut instance_rng(trial))?, 0))
            })?;
            Ok((results, oracle.universe_size()))
        }
        DomainConfig::StringSearch { source: SearchSource::File { path } } => {
            let parsed = InstanceStream::parse(&read_file(path)?).map_err(|source| CliError::Input { path: path.clone(), source })?;
            let seq = take_prefix(parsed.instances, horizon, path)?;
            let (n, m) = (seq[0].text().len(), seq[0].pattern().len());
            let oracle = StringSearchOracle::new(n, m)?;
            let results = trials(config, &oracle, |_| Ok((seq.clone(), 0)))?;
            Ok((results, oracle.universe_size()))
        }
    }
}

fn take_prefix<T>(mut items: Vec<T>, horizon: usize, path: &std::path::Path) -> CliResult<Vec<T>> {
    if items.len() < horizon {
        return Err(CliError::config(format!(
            "{} holds {} instances but the horizon is {horizon}",
            path.display(),
            items.len()
        )));
    }
    items.truncate(horizon);
    Ok(items)
}

fn load_graph(source: &GraphSource, root: u64) -> CliResult<(Graph, EdgeWeights)> {
    match source {
        GraphSource::Grid { width, height, weight_scale, source, terminal } => {
            let (graph, base) = synth_grid_graph(*width, *height, &mut stream(root, 0, Purpose::BaseProblem))?;
            let graph = match (source, terminal) {
                (None, None) => graph,
                _ => graph.with_endpoints(source.unwrap_or(graph.source()), terminal.unwrap_or(graph.terminal()))?,
            };
            let base = EdgeWeights::new(base.into_vec().into_iter().map(|w| w * weight_scale).collect())?;
            Ok((graph, base))
        }
        GraphSource::File { path, source, terminal } => Graph::parse_edge_list(&read_file(path)?, *source, *terminal)
            .map_err(|source| CliError::Input { path: path.clone(), source }),
    }
}

/// Per-round perturbations of `base`.
pub fn weight_sequence(
    base: &EdgeWeights,
    perturbation: &PerturbationSpec,
    horizon: usize,
    rng: &mut StreamRng,
) -> repeatprune::Result<Vec<EdgeWeights>> {
    (0..horizon).map(|_| perturbation.apply(base, rng)).collect()
}

fn trials<O, F>(config: &ExperimentConfig, oracle: &O, sequence: F) -> CliResult<Vec<TrialResult>>
where
    O: DomainOracle,
    O::Instance: Send,
    F: Fn(usize) -> repeatprune::Result<(Vec<O::Instance>, usize)> + Sync,
{
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let (seq, redraws) = sequence(trial)?;
            run_one(config, oracle, trial, &seq, redraws).map_err(CliError::from)
        })
        .collect()
}

/// Plays the pruner and the paired `p = 1` baseline over one sequence.
pub fn run_one<O: DomainOracle>(
    config: &ExperimentConfig,
    oracle: &O,
    trial: usize,
    sequence: &[O::Instance],
    redraws: usize,
) -> repeatprune::Result<TrialResult> {
    let coins = derive_seed(config.root_seed, trial as u64, Purpose::Coins);
    let mut state = PrunerState::new(oracle.universe_size(), config.schedule.clone(), coins)?;
    state.run(oracle, sequence)?;
    let s_star_size = state.witness_union().len();
    let baseline = run_trial(oracle, sequence, &Schedule::Constant { p: 1.0 }, coins)?;
    Ok(TrialResult {
        trial,
        records: state.into_history(),
        baseline_work: baseline.iter().map(|r| r.work).collect(),
        s_star_size,
        redraws,
    })
}

fn summarize_trials(config: &ExperimentConfig, trials: &[TrialResult], universe_size: usize) -> CliResult<ExperimentSummary> {
    let horizon = config.horizon;
    let rounds = (trials.len() * horizon) as f64;
    let all = || trials.iter().flat_map(|t| t.records.iter());
    let total_mistakes = all().filter(|r| r.mistake).count();
    let explored = all().filter(|r| r.explored).count();
    let exploit: Vec<_> = all().filter(|r| !r.explored).map(|r| r.work as f64).collect();
    let mean_exploit_work = (!exploit.is_empty()).then(|| exploit.iter().sum::<f64>() / exploit.len() as f64);
    let mean_full_work = trials.iter().flat_map(|t| &t.baseline_work).map(|&w| w as f64).sum::<f64>() / rounds;

    let per_round = (0..horizon)
        .map(|i| {
            let n = trials.len() as f64;
            let mean = |f: &dyn Fn(&TrialResult) -> f64| trials.iter().map(f).sum::<f64>() / n;
            RoundStats {
                round: i + 1,
                pruner_work: mean(&|t| t.records[i].work as f64),
                baseline_work: mean(&|t| t.baseline_work[i] as f64),
                set_size: mean(&|t| t.records[i].set_size as f64),
                mistake_rate: mean(&|t| t.records[i].mistake as u8 as f64),
                explore_rate: mean(&|t| t.records[i].explored as u8 as f64),
            }
        })
        .collect();

    let mut mistake_bound = 0.0;
    let mut sqrt_bound = 0.0;
    let mut size_bound = 0.0;
    for t in trials {
        mistake_bound += mistake_bound_for_schedule(t.s_star_size, &config.schedule, horizon)?;
        sqrt_bound += mistake_bound_inverse_sqrt(t.s_star_size, horizon)?;
        size_bound += pruned_size_bound(t.s_star_size, universe_size, &config.schedule, horizon)?;
    }
    let n = trials.len() as f64;
    let tight = match (&config.domain, &config.schedule) {
        (DomainConfig::Tight { k }, Schedule::Constant { p }) => Some(tight_construction_expectations(*k, *p, horizon)?),
        _ => None,
    };

    Ok(ExperimentSummary {
        domain: config.domain.name().to_string(),
        trials: trials.len(),
        horizon,
        schedule: config.schedule.clone(),
        root_seed: config.root_seed,
        universe_size,
        mistake_fraction: total_mistakes as f64 / rounds,
        total_mistakes: Estimate::of(trials.iter().map(|t| t.records.iter().filter(|r| r.mistake).count() as f64)),
        s_star_size: Estimate::of(trials.iter().map(|t| t.s_star_size as f64)),
        set_size: Estimate::of(
            trials.iter().map(|t| t.records.iter().map(|r| r.set_size as f64).sum::<f64>() / horizon as f64),
        ),
        explored_fraction: explored as f64 / rounds,
        mean_exploit_work,
        mean_full_work,
        exploit_work_ratio: mean_exploit_work.map(|w| w / mean_full_work),
        mean_pruner_work: all().map(|r| r.work as f64).sum::<f64>() / rounds,
        redrawn_objectives: trials.iter().map(|t| t.redraws).sum(),
        bounds: BoundsReport {
            mistake_bound: mistake_bound / n,
            mistake_bound_sqrt: matches!(config.schedule, Schedule::InverseSqrt).then_some(sqrt_bound / n),
            pruned_size_bound: size_bound / n,
            tight,
        },
        per_round,
    })
}
