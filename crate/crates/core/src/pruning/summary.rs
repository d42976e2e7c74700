use serde::Serialize;

use super::RoundRecord;
use crate::{Error, Result};

/// Aggregates over one run's records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rounds: usize,
    pub total_mistakes: usize,
    pub mistake_fraction: f64,
    /// Mean `|S_i|` over all rounds.
    pub mean_set_size: f64,
    pub mean_work: f64,
    /// Mean `|S_i|` over exploit rounds; `None` if every round explored.
    pub mean_exploit_set_size: Option<f64>,
    pub explored_rounds: usize,
    pub s_star_size: usize,
    pub universe_size: usize,
}

pub fn summarize(records: &[RoundRecord], s_star_size: usize, universe_size: usize) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::EmptySequence);
    }
    if s_star_size > universe_size {
        return Err(Error::domain("|S*| exceeds universe size"));
    }
    let n = records.len() as f64;
    let total_mistakes = records.iter().filter(|r| r.mistake).count();
    let explored_rounds = records.iter().filter(|r| r.explored).count();
    let exploit: Vec<_> = records.iter().filter(|r| !r.explored).collect();
    Ok(Summary {
        rounds: records.len(),
        total_mistakes,
        mistake_fraction: total_mistakes as f64 / n,
        mean_set_size: records.iter().map(|r| r.set_size as f64).sum::<f64>() / n,
        mean_work: records.iter().map(|r| r.work as f64).sum::<f64>() / n,
        mean_exploit_set_size: (!exploit.is_empty())
            .then(|| exploit.iter().map(|r| r.set_size as f64).sum::<f64>() / exploit.len() as f64),
        explored_rounds,
        s_star_size,
        universe_size,
    })
}
