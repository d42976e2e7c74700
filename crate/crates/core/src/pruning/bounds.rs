//! Closed-form expectations and bounds for the pruner.

use serde::Serialize;

use super::Schedule;
use crate::{Error, Result};

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("probability {p} outside (0, 1]")))
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        Err(Error::domain("horizon T must be at least 1"))
    } else {
        Ok(())
    }
}

/// Expected-mistake bound `|S*| (1-p) (1-(1-p)^T) / p` for any schedule with `p_i ≥ p`.
pub fn mistake_bound(s_star_size: usize, p: f64, horizon: usize) -> Result<f64> {
    check_p(p)?;
    check_horizon(horizon)?;
    let q = 1.0 - p;
    Ok(s_star_size as f64 * q * (1.0 - q.powi(horizon as i32)) / p)
}

/// Mistake bound for `p_i = 1/sqrt(i)`: `|S*| sqrt(T)`.
pub fn mistake_bound_inverse_sqrt(s_star_size: usize, horizon: usize) -> Result<f64> {
    check_horizon(horizon)?;
    Ok(s_star_size as f64 * (horizon as f64).sqrt())
}

/// [`mistake_bound`] evaluated at `p = min_{i ≤ T} p_i` of the schedule.
pub fn mistake_bound_for_schedule(s_star_size: usize, schedule: &Schedule, horizon: usize) -> Result<f64> {
    check_horizon(horizon)?;
    mistake_bound(s_star_size, schedule.min_probability(horizon)?, horizon)
}

/// Bound on `E[(1/T) Σ |S_i|]`: `|S*| + (1/T) Σ p_i (|U| - |S*|)`.
pub fn pruned_size_bound(
    s_star_size: usize,
    universe_size: usize,
    schedule: &Schedule,
    horizon: usize,
) -> Result<f64> {
    check_horizon(horizon)?;
    if s_star_size > universe_size {
        return Err(Error::domain(format!(
            "|S*| = {s_star_size} exceeds universe size {universe_size}"
        )));
    }
    let mean_p = schedule.sum(horizon)? / horizon as f64;
    Ok(s_star_size as f64 + mean_p * (universe_size - s_star_size) as f64)
}

/// The `p_i = 1/sqrt(i)` simplification `|S*| + 2 (|U| - |S*|) / sqrt(T)`.
pub fn pruned_size_bound_inverse_sqrt(s_star_size: usize, universe_size: usize, horizon: usize) -> Result<f64> {
    check_horizon(horizon)?;
    if s_star_size > universe_size {
        return Err(Error::domain(format!(
            "|S*| = {s_star_size} exceeds universe size {universe_size}"
        )));
    }
    Ok(s_star_size as f64 + 2.0 * (universe_size - s_star_size) as f64 / (horizon as f64).sqrt())
}

/// Exact expectations for the `k` parallel-edge construction under constant `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightExpectations {
    /// `E|S*| = k (1 - (1 - 1/k)^T)`
    pub expected_s_star: f64,
    /// `E[mistakes] = k (1-p) (1 - (1 - p/k)^T) / p`
    pub expected_mistakes: f64,
}

pub fn tight_construction_expectations(k: usize, p: f64, horizon: usize) -> Result<TightExpectations> {
    check_p(p)?;
    check_horizon(horizon)?;
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let kf = k as f64;
    let t = horizon as i32;
    Ok(TightExpectations {
        expected_s_star: kf * (1.0 - (1.0 - 1.0 / kf).powi(t)),
        expected_mistakes: kf * (1.0 - p) * (1.0 - (1.0 - p / kf).powi(t)) / p,
    })
}

/// Floor `mT/8` on `E[m + inspections] · E[1 + mistakes]` for any pruning-style
/// repeated algorithm on the hard `m`-edge distribution.
pub fn lower_bound_product(m: usize, horizon: usize) -> f64 {
    m as f64 * horizon as f64 / 8.0
}
