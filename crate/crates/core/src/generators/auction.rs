use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::perturb::perturb_objective_gaussian;
use crate::lp::{simplex_solve, LpProgram, Objective};
use crate::pruning::Allowed;
use crate::{Error, Result};

/// Give up on an objective after this many degenerate redraws in a row.
pub const MAX_REDRAWS: usize = 1000;

/// Distribution of the number of goods in a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BundleSize {
    /// `min(1 + Geometric(p), goods)`, where Geometric counts failures.
    Geometric { p: f64 },
}

impl Default for BundleSize {
    fn default() -> Self {
        BundleSize::Geometric { p: 0.5 }
    }
}

impl BundleSize {
    fn sample<R: Rng + ?Sized>(&self, goods: usize, rng: &mut R) -> usize {
        let BundleSize::Geometric { p } = *self;
        let mut size = 1;
        while size < goods && !rng.random_bool(p) {
            size += 1;
        }
        size
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AuctionParams {
    pub bidders: usize,
    pub goods: usize,
    pub bids_per_bidder: usize,
    pub bundle: BundleSize,
    /// Multiplies every bid value.
    pub value_scale: f64,
    /// Each right-hand side gets an independent `U(0, capacity_jitter)` added.
    /// With exact unit capacities almost every vertex of the relaxation is
    /// degenerate; a small jitter makes the polytope simple.
    pub capacity_jitter: f64,
}

impl Default for AuctionParams {
    fn default() -> Self {
        AuctionParams {
            bidders: 10,
            goods: 30,
            bids_per_bidder: 4,
            bundle: BundleSize::default(),
            value_scale: 1.0,
            capacity_jitter: 1e-3,
        }
    }
}

impl AuctionParams {
    pub fn validate(&self) -> Result<()> {
        if self.bidders == 0 || self.goods == 0 || self.bids_per_bidder == 0 {
            return Err(Error::domain("auction needs at least one bidder, good and bid"));
        }
        let BundleSize::Geometric { p } = self.bundle;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("bundle geometric p must lie in (0, 1], got {p}")));
        }
        if !(self.value_scale > 0.0 && self.value_scale.is_finite()) {
            return Err(Error::domain("value_scale must be positive"));
        }
        if !(self.capacity_jitter >= 0.0 && self.capacity_jitter.is_finite()) {
            return Err(Error::domain("capacity_jitter must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bid {
    pub bidder: usize,
    /// Sorted good indices.
    pub goods: Vec<usize>,
    pub value: f64,
}

/// LP relaxation of a winner-determination problem.
#[derive(Debug, Clone)]
pub struct AuctionLp {
    pub program: LpProgram,
    /// Bid values; the base objective.
    pub objective: Objective,
    pub bids: Vec<Bid>,
}

/// Samples bids and emits the relaxation with one variable per bid.
///
/// Row layout: goods `0..G`, bidders `G..G+B`, then for each bid `x <= 1`
/// followed by `-x <= 0`. A good nobody bid on would give an all-zero row,
/// so each such good is added to a uniformly chosen bid before values are
/// drawn.
pub fn synth_auction_lp<R: Rng + ?Sized>(params: &AuctionParams, rng: &mut R) -> Result<AuctionLp> {
    params.validate()?;
    let (nb, ng) = (params.bidders, params.goods);
    let mut bids: Vec<Bid> = Vec::with_capacity(nb * params.bids_per_bidder);
    for bidder in 0..nb {
        for _ in 0..params.bids_per_bidder {
            let size = params.bundle.sample(ng, rng);
            let mut goods = sample(rng, ng, size).into_vec();
            goods.sort_unstable();
            bids.push(Bid { bidder, goods, value: 0.0 });
        }
    }
    let mut covered = vec![false; ng];
    for bid in &bids {
        for &g in &bid.goods {
            covered[g] = true;
        }
    }
    for g in (0..ng).filter(|&g| !covered[g]) {
        let k = rng.random_range(0..bids.len());
        bids[k].goods.push(g);
        bids[k].goods.sort_unstable();
    }
    for bid in &mut bids {
        bid.value = params.value_scale * bid.goods.len() as f64 * rng.random_range(0.8..1.2);
    }

    let n = bids.len();
    let mut a = Vec::with_capacity(ng + nb + 2 * n);
    for g in 0..ng {
        a.push(bids.iter().map(|bid| if bid.goods.contains(&g) { 1.0 } else { 0.0 }).collect::<Vec<_>>());
    }
    for bidder in 0..nb {
        a.push(bids.iter().map(|bid| if bid.bidder == bidder { 1.0 } else { 0.0 }).collect());
    }
    let mut b = vec![1.0; ng + nb];
    for k in 0..n {
        let mut upper = vec![0.0; n];
        upper[k] = 1.0;
        let lower = upper.iter().map(|v| -v).collect();
        a.push(upper);
        a.push(lower);
        b.extend([1.0, 0.0]);
    }
    if params.capacity_jitter > 0.0 {
        for bj in &mut b {
            *bj += rng.random_range(0.0..params.capacity_jitter);
        }
    }
    let objective = Objective::new(bids.iter().map(|bid| bid.value).collect())?;
    Ok(AuctionLp { program: LpProgram::new(a, b)?, objective, bids })
}

/// `horizon` Gaussian perturbations of `base`, redrawing any draw whose full
/// LP has no unique nondegenerate optimum. Returns the objectives and the
/// number of rejected draws.
pub fn objective_sequence<R: Rng + ?Sized>(
    program: &LpProgram,
    base: &Objective,
    sigma: f64,
    horizon: usize,
    rng: &mut R,
) -> Result<(Vec<Objective>, usize)> {
    let mut out = Vec::with_capacity(horizon);
    let mut rejected = 0;
    for round in 1..=horizon {
        let mut attempts = 0;
        loop {
            let x = perturb_objective_gaussian(base, sigma, rng)?;
            match simplex_solve(program, &x, Allowed::All) {
                Ok(_) => {
                    out.push(x);
                    break;
                }
                Err(Error::DegenerateInstance(why)) => {
                    log::debug!("round {round}: redrawing degenerate objective ({why})");
                    rejected += 1;
                    attempts += 1;
                    if attempts >= MAX_REDRAWS {
                        return Err(Error::DegenerateInstance(format!(
                            "round {round}: {MAX_REDRAWS} consecutive degenerate objective draws"
                        )));
                    }
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok((out, rejected))
}
