use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::{Allowed, DomainOracle, Output, PrunedSet, Schedule, SolveOutcome};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Observables of one pruner round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    /// 1-based round index.
    pub round: usize,
    /// Whether the round took the full-solve branch.
    pub explored: bool,
    /// `|S_i|`: the universe size on explore rounds, `|S̄_i|` otherwise.
    pub set_size: usize,
    /// `|S̄_i|`, the learned set before this round.
    pub pruned_size: usize,
    pub universe_size: usize,
    pub mistake: bool,
    /// Effort of the emitted branch only; the reference solve is not charged.
    pub work: u64,
    /// `|S*(x_i)|` on explore rounds.
    pub witness_size: Option<usize>,
}

/// Everything one [`PrunerState::step`] produced.
#[derive(Debug, Clone)]
pub struct Step<T> {
    /// What the pruner emitted this round.
    pub output: Output<T>,
    /// The unrestricted answer `f(x_i)` used to grade the round.
    pub reference: Output<T>,
    /// `S*(x_i)`, the witness of `reference`.
    pub reference_witness: PrunedSet,
    pub record: RoundRecord,
}

/// The explore/exploit pruner's state for one run.
#[derive(Debug, Clone)]
pub struct PrunerState {
    round: usize,
    pruned: PrunedSet,
    witness_union: PrunedSet,
    schedule: Schedule,
    rng: StreamRng,
    history: Vec<RoundRecord>,
}

/// Full solve plus witness extraction.
pub fn solve_full<O: DomainOracle>(oracle: &O, instance: &O::Instance) -> Result<SolveOutcome<O::Solution>> {
    let solved = oracle.solve(instance, Allowed::All)?;
    let witness = oracle.witness(instance, &solved.output)?;
    Ok(SolveOutcome { solution: solved.output, witness: Some(witness), work: solved.work })
}

pub fn solve_restricted<O: DomainOracle>(
    oracle: &O,
    instance: &O::Instance,
    allowed: &PrunedSet,
) -> Result<SolveOutcome<O::Solution>> {
    let solved = oracle.solve(instance, Allowed::Only(allowed))?;
    Ok(SolveOutcome { solution: solved.output, witness: None, work: solved.work })
}

impl PrunerState {
    pub fn new(universe_size: usize, schedule: Schedule, seed: u64) -> Result<Self> {
        Self::with_rng(universe_size, schedule, StreamRng::seed_from_u64(seed))
    }

    pub fn with_rng(universe_size: usize, schedule: Schedule, rng: StreamRng) -> Result<Self> {
        schedule.validate()?;
        Ok(PrunerState {
            round: 1,
            pruned: PrunedSet::empty(universe_size),
            witness_union: PrunedSet::empty(universe_size),
            schedule,
            rng,
            history: Vec::new(),
        })
    }

    /// The index of the next round to be played.
    pub fn round(&self) -> usize {
        self.round
    }

    /// `S̄_i`.
    pub fn pruned(&self) -> &PrunedSet {
        &self.pruned
    }

    /// `∪ S*(x_j)` over every round played so far, explored or not.
    pub fn witness_union(&self) -> &PrunedSet {
        &self.witness_union
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn history(&self) -> &[RoundRecord] {
        &self.history
    }

    pub fn into_history(self) -> Vec<RoundRecord> {
        self.history
    }

    /// Plays one round on `instance`.
    ///
    /// With probability `p_i` emits the full answer and adds its witness to
    /// `S̄`; otherwise emits the answer restricted to `S̄`. Exactly one random
    /// draw is consumed per round. On error the state is left untouched.
    pub fn step<O: DomainOracle>(&mut self, oracle: &O, instance: &O::Instance) -> Result<Step<O::Solution>> {
        let round = self.round;
        let fail = |e: Error| Error::OracleFailure { round, source: Box::new(e) };
        let universe_size = oracle.universe_size();
        if universe_size != self.pruned.universe_size() {
            return Err(fail(Error::domain(format!(
                "oracle universe {universe_size} does not match pruner universe {}",
                self.pruned.universe_size()
            ))));
        }

        let p = self.schedule.probability(round)?;
        let mut rng = self.rng.clone();
        let explored = rng.random::<f64>() < p;
        let pruned_size = self.pruned.len();

        let step = if explored {
            let full = solve_full(oracle, instance).map_err(fail)?;
            let witness = full.witness.expect("full solves carry a witness");
            Step {
                reference: full.solution.clone(),
                output: full.solution,
                record: RoundRecord {
                    round,
                    explored,
                    set_size: universe_size,
                    pruned_size,
                    universe_size,
                    mistake: false,
                    work: full.work,
                    witness_size: Some(witness.len()),
                },
                reference_witness: witness,
            }
        } else {
            let emitted = solve_restricted(oracle, instance, &self.pruned).map_err(fail)?;
            let reference = solve_full(oracle, instance).map_err(fail)?;
            let mistake = !oracle.same(&emitted.solution, &reference.solution);
            Step {
                output: emitted.solution,
                reference: reference.solution,
                reference_witness: reference.witness.expect("full solves carry a witness"),
                record: RoundRecord {
                    round,
                    explored,
                    set_size: pruned_size,
                    pruned_size,
                    universe_size,
                    mistake,
                    work: emitted.work,
                    witness_size: None,
                },
            }
        };

        self.rng = rng;
        if explored {
            self.pruned.union_with(&step.reference_witness);
        }
        self.witness_union.union_with(&step.reference_witness);
        self.round += 1;
        self.history.push(step.record.clone());
        Ok(step)
    }

    /// Plays every instance of `sequence` in order.
    pub fn run<O: DomainOracle>(&mut self, oracle: &O, sequence: &[O::Instance]) -> Result<()> {
        for instance in sequence {
            self.step(oracle, instance)?;
        }
        Ok(())
    }
}

/// Runs the pruner over `sequence` from a fresh state seeded with `seed`.
pub fn run_trial<O: DomainOracle>(
    oracle: &O,
    sequence: &[O::Instance],
    schedule: &Schedule,
    seed: u64,
) -> Result<Vec<RoundRecord>> {
    if sequence.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut state = PrunerState::new(oracle.universe_size(), schedule.clone(), seed)?;
    state.run(oracle, sequence)?;
    Ok(state.into_history())
}
