//! Randomized self-checks against brute force, with reproducible seeds.
//!
//! Every suite draws small instances from `stream(seed, index, Verify)` and
//! compares the production solvers with the enumeration oracles, or checks
//! that `f_S(x) = f(x)` holds exactly for the supersets of the witness over
//! all `2^|U|` subsets `S`.

use std::fmt;

use rand::Rng;
use repeatprune::lp::{lp_witness, simplex_solve, LpOracle, LpProgram, Objective};
use repeatprune::rng::{stream, Purpose, StreamRng};
use repeatprune::shortest_path::{dijkstra_canonical, EdgeWeights, Graph, ShortestPathOracle};
use repeatprune::string_search::{id_to_index, match_restricted, SearchInstance, StringSearchOracle};
use repeatprune::{Allowed, DomainOracle, Error, PrunedSet, UniverseId};
use repeatprune_oracles as brute;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Instances per suite.
    pub instances: usize,
    /// Test hook: flip one bit of every witness before checking it.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, instances: 200, inject_fault: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    /// Individual comparisons made.
    pub checks: u64,
    /// Instances skipped because the draw was degenerate.
    pub skipped: usize,
    /// First few counterexamples, each tagged with its instance index.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify seed {}", self.seed)?;
        for s in &self.suites {
            let verdict = if s.passed() { "PASS" } else { "FAIL" };
            write!(f, "{verdict} {:<24} {} instances, {} checks", s.name, s.instances, s.checks)?;
            if s.skipped > 0 {
                write!(f, ", {} degenerate draws skipped", s.skipped)?;
            }
            writeln!(f)?;
            for msg in &s.failures {
                writeln!(f, "    counterexample (seed {}): {msg}", self.seed)?;
            }
            if s.failure_count > s.failures.len() {
                writeln!(f, "    ... {} more", s.failure_count - s.failures.len())?;
            }
        }
        Ok(())
    }
}

const MAX_REPORTED: usize = 5;

type SuiteFn = fn(&VerifyOptions, &mut StreamRng, &mut Suite) -> Result<(), Error>;

/// Name and body of every suite, in report order.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("shortest-path/oracle", sp_brute_force),
    ("shortest-path/assumption", sp_assumption),
    ("lp/oracle", lp_brute_force),
    ("lp/assumption", lp_assumption),
    ("string-search/oracle", search_brute_force),
    ("string-search/assumption", search_assumption),
];

pub struct Suite {
    checks: u64,
    skipped: bool,
    failures: Vec<String>,
}

impl Suite {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }
}

pub fn run_verify(options: &VerifyOptions) -> VerifyReport {
    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(k, &(name, body))| run_suite(options, k as u64, name, body))
        .collect();
    VerifyReport { seed: options.seed, suites }
}

/// Runs one suite by name; `None` if no suite has that name.
pub fn run_named(options: &VerifyOptions, name: &str) -> Option<SuiteReport> {
    let k = SUITES.iter().position(|&(n, _)| n == name)?;
    Some(run_suite(options, k as u64, SUITES[k].0, SUITES[k].1))
}

fn run_suite(options: &VerifyOptions, k: u64, name: &'static str, body: SuiteFn) -> SuiteReport {
    let mut report = SuiteReport { name, instances: 0, checks: 0, skipped: 0, failures: Vec::new(), failure_count: 0 };
    for i in 0..options.instances {
        let index = (k << 32) | i as u64;
        let mut rng = stream(options.seed, index, Purpose::Verify);
        let mut suite = Suite { checks: 0, skipped: false, failures: Vec::new() };
        if let Err(e) = body(options, &mut rng, &mut suite) {
            suite.failures.push(format!("solver error: {e}"));
        }
        report.instances += 1;
        report.checks += suite.checks;
        report.skipped += suite.skipped as usize;
        report.failure_count += suite.failures.len();
        for msg in suite.failures {
            if report.failures.len() < MAX_REPORTED {
                report.failures.push(format!("instance {i}: {msg}"));
            }
        }
    }
    report
}

fn maybe_flip(options: &VerifyOptions, witness: &mut PrunedSet, rng: &mut StreamRng) {
    if options.inject_fault && witness.universe_size() > 0 {
        witness.toggle(UniverseId(rng.random_range(0..witness.universe_size())));
    }
}

/// Checks `f_S(x) = f(x) ⟺ S ⊇ witness` over every subset of the universe.
fn exhaustive<O: DomainOracle>(
    oracle: &O,
    instance: &O::Instance,
    witness: &PrunedSet,
    suite: &mut Suite,
) -> Result<(), Error> {
    let u = oracle.universe_size();
    assert!(u <= 16, "exhaustive check over {u} elements");
    let full = oracle.solve(instance, Allowed::All)?.output;
    for mask in 0..1u64 << u {
        let s = PrunedSet::from_mask(u, mask);
        let restricted = oracle.solve(instance, Allowed::Only(&s))?.output;
        let equal = oracle.same(&restricted, &full);
        let contains = s.is_superset(witness);
        suite.check(equal == contains, || {
            format!("S = {:?}, witness = {:?}: f_S = f is {equal} but S ⊇ witness is {contains}", s.to_vec(), witness.to_vec())
        });
    }
    Ok(())
}

fn random_graph(rng: &mut StreamRng, max_vertices: usize, max_arcs: usize) -> Result<(Graph, EdgeWeights), Error> {
    let v = rng.random_range(2..=max_vertices);
    let (s, t) = (0, v - 1);
    let undirected = rng.random_bool(0.3);
    let count = rng.random_range(1..=if undirected { max_arcs / 2 } else { max_arcs });
    let pairs: Vec<_> = (0..count)
        .map(|_| {
            let a = rng.random_range(0..v);
            let mut b = rng.random_range(0..v - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    let graph = if undirected { Graph::undirected(v, &pairs, s, t)? } else { Graph::directed(v, &pairs, s, t)? };
    // small integers keep every path weight exact, so ties are real ties
    let weights = (0..graph.edge_count()).map(|_| rng.random_range(0..=3) as f64).collect();
    Ok((graph, EdgeWeights::new(weights)?))
}

fn arcs_of(graph: &Graph) -> Vec<(usize, usize)> {
    graph.arcs().iter().map(|a| (a.tail, a.head)).collect()
}

fn sp_brute_force(_: &VerifyOptions, rng: &mut StreamRng, suite: &mut Suite) -> Result<(), Error> {
    let (graph, weights) = random_graph(rng, 8, 14)?;
    let arcs = arcs_of(&graph);
    let m = graph.edge_count();
    let subsets = [PrunedSet::full(m), PrunedSet::from_ids(m, (0..m).filter(|_| rng.random_bool(0.7)).map(UniverseId))?];
    for allowed in &subsets {
        let mask: Vec<bool> = (0..m).map(|e| allowed.contains(UniverseId(e))).collect();
        let expected = brute::shortest_simple_path(graph.vertex_count(), &arcs, weights.as_slice(), &mask, graph.source(), graph.terminal());
        let got = dijkstra_canonical(&graph, &weights, Allowed::Only(allowed))?.output;
        let got = got.value().map(|p| (p.edge_ids.iter().map(|e| e.0).collect::<Vec<_>>(), p.total_weight));
        suite.check(got == expected, || format!("{m} edges: dijkstra {got:?}, enumeration {expected:?}"));
    }
    Ok(())
}

fn sp_assumption(options: &VerifyOptions, rng: &mut StreamRng, suite: &mut Suite) -> Result<(), Error> {
    let (graph, weights) = random_graph(rng, 6, 12)?;
    let oracle = ShortestPathOracle::new(graph);
    let full = oracle.solve(&weights, Allowed::All)?.output;
    let mut witness = oracle.witness(&weights, &full)?;
    maybe_flip(options, &mut witness, rng);
    exhaustive(&oracle, &weights, &witness, suite)
}

/// A bounded 2-variable program: outward normals spread around the circle so
/// consecutive angles differ by less than π (at most 1.4 · 2π/3), and `b > 0` so the origin is interior.
fn random_bounded_lp(rng: &mut StreamRng, min_rows: usize, max_rows: usize) -> Result<LpProgram, Error> {
    let m = rng.random_range(min_rows..=max_rows);
    let step = std::f64::consts::TAU / m as f64;
    let mut rows: Vec<(Vec<f64>, f64)> = (0..m)
        .map(|j| {
            let theta = step * (j as f64 + rng.random_range(-0.2..0.2));
            let r = rng.random_range(0.5..2.0);
            (vec![r * theta.cos(), r * theta.sin()], rng.random_range(0.5..2.0))
        })
        .collect();
    // shuffle so row order does not follow the angle
    for j in (1..m).rev() {
        rows.swap(j, rng.random_range(0..=j));
    }
    let (a, b) = rows.into_iter().unzip();
    LpProgram::new(a, b)
}

fn random_objective(rng: &mut StreamRng) -> Result<Objective, Error> {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    Objective::new(vec![theta.cos(), theta.sin()])
}

fn lp_brute_force(_: &VerifyOptions, rng: &mut StreamRng, suite: &mut Suite) -> Result<(), Error> {
    let program = random_bounded_lp(rng, 3, 8)?;
    let x = random_objective(rng)?;
    let solved = match simplex_solve(&program, &x, Allowed::All) {
        Err(Error::DegenerateInstance(_)) => {
            suite.skipped = true;
            return Ok(());
        }
        other => other?,
    };
    let a: Vec<Vec<f64>> = (0..program.rows()).map(|j| program.row(j).to_vec()).collect();
    let rows: Vec<usize> = (0..program.rows()).collect();
    let expected = brute::lp_vertex_enumeration(&a, program.bounds(), x.as_slice(), &rows);
    match (solved.output.value(), expected) {
        (Some(sol), Some((y, tight))) => {
            let close = sol.y.iter().zip(&y).all(|(p, q)| (p - q).abs() <= 1e-7);
            suite.check(close, || format!("simplex y = {:?}, enumeration y = {y:?}", sol.y));
            suite.check(sol.tight == tight, || format!("simplex tight = {:?}, enumeration tight = {tight:?}", sol.tight));
        }
        (got, expected) => suite.check(false, || format!("simplex {got:?}, enumeration {expected:?}")),
    }
    Ok(())
}

fn lp_assumption(options: &VerifyOptions, rng: &mut StreamRng, suite: &mut Suite) -> Result<(), Error> {
    let program = random_bounded_lp(rng, 3, 10)?;
    let oracle = LpOracle::new(program);
    let (x, full) = loop {
        let x = random_objective(rng)?;
        match simplex_solve(oracle.program(), &x, Allowed::All) {
            Ok(s) => break (x, s.output),
            Err(Error::DegenerateInstance(_)) => suite.skipped = true,
            Err(e) => return Err(e),
        }
    };
    let mut witness = lp_witness(oracle.program(), &full)?;
    maybe_flip(options, &mut witness, rng);
    exhaustive(&oracle, &x, &witness, suite)
}

/// Random text and pattern over a 2- or 3-letter alphabet with at most
/// `max_positions` candidate match indices.
fn random_search(rng: &mut StreamRng, max_positions: usize) -> Result<SearchInstance, Error> {
    let alphabet = if rng.random_bool(0.5) { &b"ab"[..] } else { &b"abc"[..] };
    let m = rng.random_range(1..=3);
    let n = m - 1 + rng.random_range(1..=max_positions);
    let mut draw = |len: usize| -> Vec<u8> { (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())]).collect() };
    let text = draw(n);
    let pattern = draw(m);
    SearchInstance::new(text, pattern)
}

fn search_brute_force(_: &VerifyOptions, rng: &mut StreamRng, suite: &mut Suite) -> Result<(), Error> {
    let inst = random_search(rng, 18)?;
    let positions = inst.positions();
    let allowed = PrunedSet::from_ids(positions, (0..positions).filter(|_| rng.random_bool(0.5)).map(UniverseId))?;
    let candidates: Vec<usize> = allowed.iter().map(id_to_index).collect();
    let full = match_restricted(&inst, Allowed::All)?.output.into_value();
    let expected_full = brute::first_match(inst.text(), inst.pattern(), None);
    suite.check(full == expected_full, || format!("full scan {full:?}, brute force {expected_full:?}"));
    let restricted = match_restricted(&inst, Allowed::Only(&allowed))?.output.into_value();
    let expected = brute::first_match(inst.text(), inst.pattern(), Some(&candidates));
    suite.check(restricted == expected, || format!("candidates {candidates:?}: restricted {restricted:?}, brute force {expected:?}"));
    Ok(())
}

fn search_assumption(options: &VerifyOptions, rng: &mut StreamRng, suite: &mut Suite) -> Result<(), Error> {
    let inst = random_search(rng, 12)?;
    let oracle = StringSearchOracle::new(inst.text().len(), inst.pattern().len())?;
    let full = oracle.solve(&inst, Allowed::All)?.output;
    let mut witness = oracle.witness(&inst, &full)?;
    maybe_flip(options, &mut witness, rng);
    if full.is_bot() {
        // ⊥ propagates: no restriction can produce a match
        for mask in 0..1u64 << inst.positions() {
            let s = PrunedSet::from_mask(inst.positions(), mask);
            let out = oracle.solve(&inst, Allowed::Only(&s))?.output;
            suite.check(out.is_bot() && witness.is_empty(), || format!("no match overall but f_S = {out:?} for S = {:?}", s.to_vec()));
        }
        return Ok(());
    }
    exhaustive(&oracle, &inst, &witness, suite)
}

