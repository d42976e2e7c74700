//! Learned pruning for repeated computations.
//!
//! A repeated solver sees a stream of related instances `x_1, x_2, ...` over a
//! fixed universe (graph edges, LP rows, match positions). [`pruning`] keeps a
//! growing subset of that universe: on each round it either pays for a full
//! solve and learns the minimal witness set of the answer, or answers from the
//! learned subset alone. The domain modules plug concrete solvers into the
//! [`DomainOracle`](pruning::DomainOracle) contract.

pub mod error;
pub mod generators;
pub mod lp;
pub mod pruning;
pub mod rng;
pub mod shortest_path;
pub mod string_search;

pub use error::{Error, Result};
pub use pruning::{
    Allowed, DomainOracle, Output, PrunedSet, PrunerState, RoundRecord, Schedule, Solved,
    UniverseId,
};
