use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::lp::Objective;
use crate::shortest_path::EdgeWeights;
use crate::{Error, Result};

/// How edge weights are redrawn each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PerturbationSpec {
    /// `max(x + N(0, sigma), 0)` per edge.
    Gaussian { sigma: f64 },
    /// `x + U(-w, w)` with `w = min(x, clamp)` per edge.
    Uniform { clamp: f64 },
}

impl PerturbationSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PerturbationSpec::Gaussian { sigma } => positive("sigma", sigma),
            PerturbationSpec::Uniform { clamp } => positive("clamp", clamp),
        }
    }

    pub fn apply<R: Rng + ?Sized>(&self, base: &EdgeWeights, rng: &mut R) -> Result<EdgeWeights> {
        match *self {
            PerturbationSpec::Gaussian { sigma } => perturb_weights_gaussian(base, sigma, rng),
            PerturbationSpec::Uniform { clamp } => perturb_weights_uniform(base, clamp, rng),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Adds i.i.d. `N(0, sigma)` noise to every weight and truncates at zero:
/// the new weight is `x + r` when that is positive, else `0`.
pub fn perturb_weights_gaussian<R: Rng + ?Sized>(base: &EdgeWeights, sigma: f64, rng: &mut R) -> Result<EdgeWeights> {
    positive("sigma", sigma)?;
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    let w = base
        .as_slice()
        .iter()
        .map(|&x| {
            let v = x + noise.sample(rng);
            if v > 0.0 {
                v
            } else {
                0.0
            }
        })
        .collect();
    EdgeWeights::new(w)
}

/// `x + U(-w, w)` with `w = min(x, clamp)`; stays non-negative because `w <= x`.
/// Every edge consumes exactly one uniform draw, including zero-weight edges.
pub fn perturb_weights_uniform<R: Rng + ?Sized>(base: &EdgeWeights, clamp: f64, rng: &mut R) -> Result<EdgeWeights> {
    positive("clamp", clamp)?;
    let w = base
        .as_slice()
        .iter()
        .map(|&x| {
            let half = x.min(clamp);
            let u: f64 = rng.random();
            (x + half * (2.0 * u - 1.0)).max(0.0)
        })
        .collect();
    EdgeWeights::new(w)
}

/// Each coefficient drawn from `N(x_j, sigma)`, no truncation.
pub fn perturb_objective_gaussian<R: Rng + ?Sized>(base: &Objective, sigma: f64, rng: &mut R) -> Result<Objective> {
    positive("sigma", sigma)?;
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    Objective::new(base.as_slice().iter().map(|&x| x + noise.sample(rng)).collect())
}
