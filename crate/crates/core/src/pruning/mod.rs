//! The abstract pruning model and the explore/exploit pruner built on it.
//!
//! A domain supplies a [`DomainOracle`]: a solver that can be restricted to a
//! subset of a fixed universe, plus a way to extract the unique smallest
//! subset (the *witness*) that any restriction must contain to reproduce the
//! unrestricted answer. [`PrunerState`] then runs the learning loop.

mod bounds;
mod pruner;
mod schedule;
mod set;
mod summary;

use std::fmt;

pub use bounds::{
    lower_bound_product, mistake_bound, mistake_bound_inverse_sqrt, mistake_bound_for_schedule,
    pruned_size_bound, pruned_size_bound_inverse_sqrt, tight_construction_expectations,
    TightExpectations,
};
pub use pruner::{run_trial, solve_full, solve_restricted, PrunerState, RoundRecord, Step};
pub use schedule::Schedule;
pub use set::{PrunedSet, UniverseId};
pub use summary::{summarize, Summary};

use crate::Result;

/// A solver answer, or the distinguished "no solution under this restriction".
#[derive(Debug, Clone, PartialEq)]
pub enum Output<T> {
    Value(T),
    Bot,
}

impl<T> Output<T> {
    pub fn is_bot(&self) -> bool {
        matches!(self, Output::Bot)
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Output::Value(v) => Some(v),
            Output::Bot => None,
        }
    }

    pub fn into_value(self) -> Option<T> {
        match self {
            Output::Value(v) => Some(v),
            Output::Bot => None,
        }
    }

    /// Total equality: `Bot == Bot`, `Bot != Value(_)`, values compared by `eq`.
    pub fn same_by(&self, other: &Output<T>, eq: impl FnOnce(&T, &T) -> bool) -> bool {
        match (self, other) {
            (Output::Bot, Output::Bot) => true,
            (Output::Value(a), Output::Value(b)) => eq(a, b),
            _ => false,
        }
    }
}

impl<T> From<Option<T>> for Output<T> {
    fn from(v: Option<T>) -> Self {
        v.map_or(Output::Bot, Output::Value)
    }
}

impl<T: fmt::Display> fmt::Display for Output<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Value(v) => v.fmt(f),
            Output::Bot => f.write_str("⊥"),
        }
    }
}

/// Which part of the universe a solve may use.
#[derive(Debug, Clone, Copy)]
pub enum Allowed<'a> {
    All,
    Only(&'a PrunedSet),
}

impl Allowed<'_> {
    pub fn contains(&self, id: UniverseId) -> bool {
        match self {
            Allowed::All => true,
            Allowed::Only(s) => s.contains(id),
        }
    }

    pub fn is_all(&self) -> bool {
        matches!(self, Allowed::All)
    }
}

/// Result of one (possibly restricted) solve together with its effort proxy.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved<T> {
    pub output: Output<T>,
    pub work: u64,
}

/// A full or restricted solve as seen by the pruner.
///
/// `witness` is present exactly when the solve ran over the whole universe.
#[derive(Debug, Clone)]
pub struct SolveOutcome<T> {
    pub solution: Output<T>,
    pub witness: Option<PrunedSet>,
    pub work: u64,
}

/// One problem family: a restrictable solver over a fixed finite universe.
///
/// Implementations must satisfy, for every instance `x` and subset `S`:
/// the restricted answer equals the full answer iff `S` contains
/// `witness(x, full answer)`. They are shared read-only across concurrent
/// trials, hence `Sync`.
pub trait DomainOracle: Sync {
    type Instance: Sync;
    type Solution: Clone + fmt::Debug + Send + Sync;

    fn universe_size(&self) -> usize;

    fn solve(&self, instance: &Self::Instance, allowed: Allowed<'_>) -> Result<Solved<Self::Solution>>;

    /// The witness set of a full-solve answer. `Bot` answers have an empty witness.
    fn witness(&self, instance: &Self::Instance, solution: &Output<Self::Solution>) -> Result<PrunedSet>;

    /// Domain equality used to decide whether a round was a mistake.
    fn same(&self, a: &Output<Self::Solution>, b: &Output<Self::Solution>) -> bool;
}
