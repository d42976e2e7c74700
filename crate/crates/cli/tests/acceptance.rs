//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::time::Instant;

use rayon::prelude::*;
use repeatprune::generators::{
    objective_sequence, perturb_weights_gaussian, synth_auction_lp, synth_grid_graph, synth_search_sequence,
    AuctionParams, PerturbationSpec, SearchWorkload,
};
use repeatprune::lp::LpOracle;
use repeatprune::pruning::{mistake_bound, mistake_bound_inverse_sqrt, pruned_size_bound};
use repeatprune::rng::{derive_seed, stream, Purpose};
use repeatprune::shortest_path::ShortestPathOracle;
use repeatprune::string_search::StringSearchOracle;
use repeatprune::{Allowed, DomainOracle, Output, PrunedSet, PrunerState, Result, Schedule, Solved};
use repeatprune_cli::experiment::Estimate;
use repeatprune_cli::verify::{run_named, VerifyOptions};
use repeatprune_cli::{run_experiment_with_workers, DomainConfig, ExperimentConfig, GraphSource, LpSource, SearchSource};

struct Verdict {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 7] = [
        ("tight-construction closed forms", tight_closed_forms),
        ("mistake bound", mistake_bounds),
        ("pruned-size bound", pruned_size_bounds),
        ("exhaustive witness equivalence", witness_equivalence),
        ("brute-force oracles", brute_force_oracles),
        ("qualitative experiment reproduction", experiments),
        ("determinism and parallel-merge invariance", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        for note in &v.notes {
            println!("       {note}");
        }
        println!(
            "[{}] criterion {}: {name}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
        failed += !v.pass as usize;
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn config(domain: DomainConfig, trials: usize) -> ExperimentConfig {
    ExperimentConfig { trials, ..ExperimentConfig::new(domain) }
}

fn within(est: Estimate, want: f64, k: f64) -> bool {
    (est.mean - want).abs() <= k * est.se
}

fn tight_closed_forms() -> Verdict {
    let cfg = ExperimentConfig {
        schedule: Schedule::Constant { p: 0.3 },
        root_seed: 1,
        ..config(DomainConfig::Tight { k: 5 }, 20_000)
    };
    let s = run_experiment_with_workers(&cfg, 8).unwrap().summary;
    let e = s.bounds.tight.unwrap();
    let pass = within(s.s_star_size, e.expected_s_star, 3.0) && within(s.total_mistakes, e.expected_mistakes, 3.0);
    Verdict {
        pass,
        detail: format!(
            "k=5 p=0.3 T=30, 20000 trials: E|S*| {:.4} vs {:.4} (se {:.4}), E[mistakes] {:.4} vs {:.4} (se {:.4})",
            s.s_star_size.mean, e.expected_s_star, s.s_star_size.se, s.total_mistakes.mean, e.expected_mistakes, s.total_mistakes.se
        ),
        notes: vec![],
    }
}

/// A fixed sequence with its full solves cached; instances are indices into it.
struct Cached<'a, O: DomainOracle> {
    inner: &'a O,
    seq: Vec<O::Instance>,
    full: Vec<Solved<O::Solution>>,
    witness: Vec<PrunedSet>,
}

impl<'a, O: DomainOracle> Cached<'a, O> {
    fn new(inner: &'a O, seq: Vec<O::Instance>) -> Self {
        let full: Vec<_> = seq.iter().map(|x| inner.solve(x, Allowed::All).unwrap()).collect();
        let witness = seq.iter().zip(&full).map(|(x, f)| inner.witness(x, &f.output).unwrap()).collect();
        Cached { inner, seq, full, witness }
    }

    fn s_star(&self) -> usize {
        let mut u = PrunedSet::empty(self.inner.universe_size());
        for w in &self.witness {
            u.union_with(w);
        }
        u.len()
    }
}

impl<O: DomainOracle> DomainOracle for Cached<'_, O> {
    type Instance = usize;
    type Solution = O::Solution;

    fn universe_size(&self) -> usize {
        self.inner.universe_size()
    }

    fn solve(&self, i: &usize, allowed: Allowed<'_>) -> Result<Solved<O::Solution>> {
        match allowed {
            Allowed::All => Ok(self.full[*i].clone()),
            Allowed::Only(_) => self.inner.solve(&self.seq[*i], allowed),
        }
    }

    fn witness(&self, i: &usize, solution: &Output<O::Solution>) -> Result<PrunedSet> {
        if self.inner.same(solution, &self.full[*i].output) {
            Ok(self.witness[*i].clone())
        } else {
            self.inner.witness(&self.seq[*i], solution)
        }
    }

    fn same(&self, a: &Output<O::Solution>, b: &Output<O::Solution>) -> bool {
        self.inner.same(a, b)
    }
}

const HORIZON: usize = 30;
const SEQUENCES: u64 = 50;
const SEEDS: u64 = 2_000;
const CONSTANT_P: f64 = 0.3;

/// Per-sequence Monte Carlo: (|S*|, |U|, schedule, mistakes, mean |S_i|).
struct BoundRun {
    s_star: usize,
    universe: usize,
    schedule: Schedule,
    mistakes: Estimate,
    set_size: Estimate,
}

fn monte_carlo<O: DomainOracle>(oracle: &Cached<'_, O>, sequence: u64, schedule: &Schedule) -> BoundRun {
    let idx: Vec<usize> = (0..HORIZON).collect();
    let runs: Vec<(f64, f64)> = (0..SEEDS)
        .into_par_iter()
        .map(|seed| {
            let coins = derive_seed(1_000 + sequence, seed, Purpose::Coins);
            let mut state = PrunerState::new(oracle.universe_size(), schedule.clone(), coins).unwrap();
            state.run(oracle, &idx).unwrap();
            let h = state.history();
            let mistakes = h.iter().filter(|r| r.mistake).count() as f64;
            let size = h.iter().map(|r| r.set_size as f64).sum::<f64>() / HORIZON as f64;
            (mistakes, size)
        })
        .collect();
    BoundRun {
        s_star: oracle.s_star(),
        universe: oracle.universe_size(),
        schedule: schedule.clone(),
        mistakes: Estimate::of(runs.iter().map(|r| r.0)),
        set_size: Estimate::of(runs.iter().map(|r| r.1)),
    }
}

fn domain_runs<O: DomainOracle>(build: impl Fn(u64) -> (O, Vec<O::Instance>)) -> Vec<BoundRun> {
    let mut out = Vec::new();
    for sequence in 0..SEQUENCES {
        let (oracle, seq) = build(sequence);
        let cached = Cached::new(&oracle, seq);
        for schedule in [Schedule::Constant { p: CONSTANT_P }, Schedule::InverseSqrt] {
            out.push(monte_carlo(&cached, sequence, &schedule));
        }
    }
    out
}

fn grid_small(sequence: u64) -> (ShortestPathOracle, Vec<repeatprune::shortest_path::EdgeWeights>) {
    let (graph, base) = synth_grid_graph(4, 4, &mut stream(sequence, 0, Purpose::BaseProblem)).unwrap();
    let mut rng = stream(sequence, 0, Purpose::Instances);
    let seq = (0..HORIZON).map(|_| perturb_weights_gaussian(&base, 0.5, &mut rng).unwrap()).collect();
    (ShortestPathOracle::new(graph), seq)
}

fn auction_small(sequence: u64) -> (LpOracle, Vec<repeatprune::lp::Objective>) {
    let params = AuctionParams { bidders: 3, goods: 4, bids_per_bidder: 2, ..Default::default() };
    let lp = synth_auction_lp(&params, &mut stream(sequence, 0, Purpose::BaseProblem)).unwrap();
    let (seq, _) = objective_sequence(&lp.program, &lp.objective, 1.0, HORIZON, &mut stream(sequence, 0, Purpose::Instances)).unwrap();
    (LpOracle::new(lp.program), seq)
}

fn search_small(sequence: u64) -> (StringSearchOracle, Vec<repeatprune::string_search::SearchInstance>) {
    let w = SearchWorkload::random(24, 3, b"ab".to_vec(), 3, 0.6, &mut stream(sequence, 0, Purpose::BaseProblem)).unwrap();
    let seq = synth_search_sequence(&w, HORIZON, &mut stream(sequence, 0, Purpose::Instances)).unwrap();
    (StringSearchOracle::new(24, 3).unwrap(), seq)
}

fn all_domain_runs() -> &'static [(&'static str, Vec<BoundRun>)] {
    static RUNS: std::sync::OnceLock<Vec<(&'static str, Vec<BoundRun>)>> = std::sync::OnceLock::new();
    RUNS.get_or_init(|| {
        vec![
            ("shortest-path", domain_runs(grid_small)),
            ("lp", domain_runs(auction_small)),
            ("string-search", domain_runs(search_small)),
        ]
    })
}

fn mistake_limit(r: &BoundRun) -> f64 {
    match r.schedule {
        Schedule::InverseSqrt => mistake_bound_inverse_sqrt(r.s_star, HORIZON).unwrap(),
        Schedule::Constant { p } => mistake_bound(r.s_star, p, HORIZON).unwrap(),
        Schedule::Custom { .. } => unreachable!(),
    }
}

fn bound_check(
    what: &str,
    value: impl Fn(&BoundRun) -> Estimate,
    limit: impl Fn(&BoundRun) -> f64,
) -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for (domain, runs) in all_domain_runs() {
        let violations = runs.iter().filter(|r| value(r).mean > limit(r) + 3.0 * value(r).se).count();
        let tightest = runs
            .iter()
            .map(|r| value(r).mean / limit(r))
            .fold(0.0f64, f64::max);
        notes.push(format!(
            "{domain}: {} sequence/schedule pairs, {violations} above bound + 3se, max mean/bound {tightest:.3}",
            runs.len()
        ));
        pass &= violations == 0;
    }
    Verdict {
        pass,
        detail: format!("{what} over {SEQUENCES} fixed sequences x {{p={CONSTANT_P}, 1/sqrt(i)}} x {SEEDS} seeds per domain"),
        notes,
    }
}

fn mistake_bounds() -> Verdict {
    bound_check("mean total mistakes", |r| r.mistakes, mistake_limit)
}

fn pruned_size_bounds() -> Verdict {
    bound_check("mean per-round |S_i|", |r| r.set_size, |r| pruned_size_bound(r.s_star, r.universe, &r.schedule, HORIZON).unwrap())
}

fn suites(names: &[&str], instances: usize, seed: u64) -> (bool, Vec<String>) {
    let options = VerifyOptions { seed, instances, inject_fault: false };
    let mut pass = true;
    let mut notes = Vec::new();
    for name in names {
        let r = run_named(&options, name).unwrap();
        let compared = r.instances - r.skipped;
        pass &= r.passed() && compared >= instances.min(500);
        notes.push(format!(
            "{name}: {compared} instances compared, {} checks, {} failures{}",
            r.checks,
            r.failure_count,
            r.failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ));
    }
    (pass, notes)
}

fn witness_equivalence() -> Verdict {
    let (pass, notes) = suites(&["shortest-path/assumption", "lp/assumption", "string-search/assumption"], 300, 7);
    Verdict { pass, detail: "all 2^|U| subsets, |U| <= 12, per domain".into(), notes }
}

fn brute_force_oracles() -> Verdict {
    let (pass, notes) = suites(&["shortest-path/oracle", "lp/oracle", "string-search/oracle"], 1_000, 7);
    Verdict { pass, detail: ">= 500 random instances per solver".into(), notes }
}

fn grid(weight_scale: f64) -> ExperimentConfig {
    config(
        DomainConfig::ShortestPath {
            graph: GraphSource::Grid { width: 30, height: 30, weight_scale, source: None, terminal: None },
            perturbation: PerturbationSpec::Gaussian { sigma: 1.0 },
        },
        200,
    )
}

fn auction(value_scale: f64) -> ExperimentConfig {
    let params = AuctionParams { bidders: 10, goods: 30, bids_per_bidder: 4, value_scale, ..Default::default() };
    config(DomainConfig::Lp { program: LpSource::Auction { params, sigma: 1.0 } }, 200)
}

fn experiments() -> Verdict {
    let g = run_experiment_with_workers(&grid(100.0), 8).unwrap().summary;
    let a = run_experiment_with_workers(&auction(100.0), 8).unwrap().summary;
    let g_ratio = g.exploit_work_ratio.unwrap();
    let a_exploit = a.mean_exploit_work.unwrap();
    let pass = g.mistake_fraction <= 0.15 && g_ratio <= 0.5 && a.mistake_fraction <= 0.10 && a_exploit < a.mean_full_work;

    let g1 = run_experiment_with_workers(&grid(1.0), 8).unwrap().summary;
    let a1 = run_experiment_with_workers(&auction(1.0), 8).unwrap().summary;
    Verdict {
        pass,
        detail: format!(
            "grid 30x30 (weights x100): mistakes {:.4} (<= 0.15), exploit/full work {:.4} (<= 0.5); \
             auction 10x4 bids/30 goods (values x100): mistakes {:.4} (<= 0.10), exploit pivots {:.2} vs full {:.2}",
            g.mistake_fraction,
            g_ratio,
            a.mistake_fraction,
            a_exploit,
            a.mean_full_work
        ),
        notes: vec![format!(
            "reference at unit scale (noise comparable to weights/values): grid mistakes {:.4}, work ratio {:.4}; auction mistakes {:.4}, pivots {:.2} vs {:.2}",
            g1.mistake_fraction,
            g1.exploit_work_ratio.unwrap(),
            a1.mistake_fraction,
            a1.mean_exploit_work.unwrap(),
            a1.mean_full_work
        )],
    }
}

fn sorted_csv(cfg: &ExperimentConfig, workers: usize) -> (Vec<u8>, String) {
    let out = run_experiment_with_workers(cfg, workers).unwrap();
    let csv = out.csv();
    let mut lines: Vec<&str> = csv.lines().skip(1).collect();
    lines.sort_by_key(|l| {
        let mut f = l.split(',').map(|v| v.parse::<usize>().unwrap());
        (f.next().unwrap(), f.next().unwrap())
    });
    (lines.join("\n").into_bytes(), out.summary_json())
}

fn determinism() -> Verdict {
    let search = config(
        DomainConfig::StringSearch {
            source: SearchSource::Synthetic { text_len: 200, pattern_len: 6, alphabet: "ACGT".into(), hotspots: 4, plant_prob: 0.9 },
        },
        100,
    );
    let cases = [
        ("grid", ExperimentConfig { root_seed: 42, ..grid(100.0) }),
        ("auction", ExperimentConfig { root_seed: 42, ..auction(100.0) }),
        ("string-search", ExperimentConfig { root_seed: 42, ..search }),
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, cfg) in cases {
        let (csv1, sum1) = sorted_csv(&cfg, 1);
        let (csv8, sum8) = sorted_csv(&cfg, 8);
        let same = csv1 == csv8 && sum1 == sum8;
        notes.push(format!("{name}: {} CSV bytes, identical = {same}", csv1.len()));
        pass &= same;
    }
    Verdict { pass, detail: "root seed 42, parallelism 1 vs 8: sorted CSV and summary byte-identical".into(), notes }
}
