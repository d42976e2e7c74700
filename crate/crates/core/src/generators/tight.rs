use rand::Rng;

use crate::shortest_path::{EdgeWeights, Graph};
use crate::Result;

/// The two-vertex graph with `k` parallel `s -> t` edges and `horizon` rounds
/// of weights: each round one edge, chosen uniformly, weighs 0 and the rest 1.
///
/// Edge ids are `0..k` (the one-based label `i` maps to id `i - 1`).
pub fn tight_construction<R: Rng + ?Sized>(k: usize, horizon: usize, rng: &mut R) -> Result<(Graph, Vec<EdgeWeights>)> {
    if k == 0 || horizon == 0 {
        return Err(crate::Error::domain("tight construction needs k >= 1 and T >= 1"));
    }
    let graph = Graph::directed(2, &vec![(0, 1); k], 0, 1)?;
    let rounds = (0..horizon)
        .map(|_| {
            let zero = rng.random_range(0..k);
            EdgeWeights::new((0..k).map(|j| if j == zero { 0.0 } else { 1.0 }).collect())
        })
        .collect::<Result<_>>()?;
    Ok((graph, rounds))
}
