use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exploration probabilities `p_1, p_2, ...` for the pruner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Schedule {
    /// `p_i = p` for every round.
    Constant { p: f64 },
    /// `p_i = 1/sqrt(i)`; `p_1` is exactly 1 so the first round always explores.
    InverseSqrt,
    /// Explicit per-round values. Length is only checked when a round is requested.
    Custom { values: Vec<f64> },
}

fn check_probability(p: f64) -> Result<f64> {
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err(Error::domain(format!("probability {p} outside (0, 1]")))
    }
}

impl Schedule {
    pub fn constant(p: f64) -> Result<Self> {
        Ok(Schedule::Constant { p: check_probability(p)? })
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        for &p in &values {
            check_probability(p)?;
        }
        Ok(Schedule::Custom { values })
    }

    /// Checks every stored probability lies in `(0, 1]`.
    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::Constant { p } => check_probability(*p).map(drop),
            Schedule::InverseSqrt => Ok(()),
            Schedule::Custom { values } => values.iter().try_for_each(|&p| check_probability(p).map(drop)),
        }
    }

    /// `p_round` for a 1-based round index.
    pub fn probability(&self, round: usize) -> Result<f64> {
        if round == 0 {
            return Err(Error::domain("rounds are 1-based"));
        }
        match self {
            Schedule::Constant { p } => check_probability(*p),
            Schedule::InverseSqrt => Ok(if round == 1 { 1.0 } else { 1.0 / (round as f64).sqrt() }),
            Schedule::Custom { values } => values
                .get(round - 1)
                .copied()
                .ok_or(Error::ScheduleExhausted { round, len: values.len() })
                .and_then(check_probability),
        }
    }

    /// `min_{i ≤ horizon} p_i`, the constant Theorem-style mistake bounds are stated in.
    pub fn min_probability(&self, horizon: usize) -> Result<f64> {
        (1..=horizon).try_fold(1.0f64, |acc, i| Ok(acc.min(self.probability(i)?)))
    }

    /// `Σ_{i=1}^{horizon} p_i`.
    pub fn sum(&self, horizon: usize) -> Result<f64> {
        (1..=horizon).try_fold(0.0, |acc, i| Ok(acc + self.probability(i)?))
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Constant { p } => write!(f, "constant({p})"),
            Schedule::InverseSqrt => f.write_str("inverse-sqrt"),
            Schedule::Custom { values } => write!(f, "custom({} values)", values.len()),
        }
    }
}
