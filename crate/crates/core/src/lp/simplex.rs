//! Dense tableau simplex on the dual of `max x·y s.t. A_S y <= b_S`.
//!
//! With free `y` the dual is the standard-form program
//! `min b_S·λ s.t. A_Sᵀ λ = x, λ >= 0`, which has one row per variable and one
//! column per allowed constraint. An optimal dual basis names the constraints
//! that define the primal vertex. Both phases use Bland's rule, so pivot
//! counts are deterministic.

use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum DualStatus {
    /// Basis as positions into the supplied row list, one per primal variable
    /// (ordered by tableau row), with the matching dual multipliers.
    Optimal { basis: Vec<usize>, multipliers: Vec<f64> },
    /// Dual infeasible: `x` is not in the cone of the allowed row normals.
    PrimalUnbounded,
    /// The allowed rows do not span the variable space.
    RankDeficient,
    /// Dual unbounded.
    PrimalInfeasible,
}

#[derive(Debug)]
pub(crate) struct DualRun {
    pub status: DualStatus,
    pub pivots: u64,
}

struct Tableau {
    rows: usize,
    width: usize,
    cells: Vec<f64>,
    // reduced costs; the last entry holds minus the objective value
    cost: Vec<f64>,
    basis: Vec<usize>,
    pivots: u64,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.width + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let inv = 1.0 / self.at(r, c);
        for v in &mut self.cells[r * w..(r + 1) * w] {
            *v *= inv;
        }
        let (before, rest) = self.cells.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[c];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                row[c] = 0.0;
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, p) in self.cost.iter_mut().zip(prow.iter()) {
                *v -= f * p;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Bland: lowest-index column with negative reduced cost.
    fn entering(&self, eligible: usize) -> Option<usize> {
        (0..eligible).find(|&j| self.cost[j] < -COST_EPS)
    }

    /// Minimum-ratio row; ties go to the row whose basic column has the lowest index.
    fn leaving(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, c);
            if a <= PIVOT_EPS {
                continue;
            }
            let ratio = self.rhs(r) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < bratio - 1e-12 || (ratio <= bratio + 1e-12 && self.basis[r] < self.basis[br]) {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.width;
        self.cost = costs.to_vec();
        self.cost.push(0.0);
        for r in 0..self.rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                for (v, t) in self.cost.iter_mut().zip(&self.cells[r * w..(r + 1) * w]) {
                    *v -= cb * t;
                }
            }
        }
    }

    /// Runs Bland iterations until optimal. `Ok(false)` means unbounded.
    fn optimize(&mut self, eligible: usize, limit: u64) -> Result<bool> {
        while let Some(c) = self.entering(eligible) {
            let Some(r) = self.leaving(c) else { return Ok(false) };
            self.pivot(r, c);
            if self.pivots > limit {
                return Err(Error::Numerical(format!("simplex exceeded {limit} pivots")));
            }
        }
        Ok(true)
    }
}

/// Solves the dual for the rows `normals[i]·y <= bounds[i]`.
pub(crate) fn solve_dual(normals: &[&[f64]], bounds: &[f64], objective: &[f64]) -> Result<DualRun> {
    let n = objective.len();
    let k = normals.len();
    let width = k + n + 1;
    let mut cells = vec![0.0; n * width];
    for r in 0..n {
        let sign = if objective[r] < 0.0 { -1.0 } else { 1.0 };
        let row = &mut cells[r * width..(r + 1) * width];
        for (j, a) in normals.iter().enumerate() {
            row[j] = sign * a[r];
        }
        row[k + r] = 1.0;
        row[width - 1] = sign * objective[r];
    }
    let mut t = Tableau { rows: n, width, cells, cost: Vec::new(), basis: (k..k + n).collect(), pivots: 0 };
    let limit = 10_000 + 100 * (width as u64) * (n as u64);

    // Phase 1: drive the artificials to zero.
    let mut phase1 = vec![0.0; k + n];
    phase1[k..].fill(1.0);
    t.set_costs(&phase1);
    let bounded = t.optimize(k + n, limit)?;
    debug_assert!(bounded, "phase 1 is bounded below by zero");
    let scale = 1.0 + objective.iter().map(|v| v.abs()).sum::<f64>();
    if -t.cost[width - 1] > 1e-9 * scale {
        return Ok(DualRun { status: DualStatus::PrimalUnbounded, pivots: t.pivots });
    }
    for r in 0..n {
        if t.basis[r] < k {
            continue;
        }
        match (0..k).find(|&j| t.at(r, j).abs() > PIVOT_EPS) {
            Some(j) => t.pivot(r, j),
            None => return Ok(DualRun { status: DualStatus::RankDeficient, pivots: t.pivots }),
        }
    }

    // Phase 2 over the structural columns only.
    let mut phase2 = bounds.to_vec();
    phase2.resize(k + n, 0.0);
    t.set_costs(&phase2);
    if !t.optimize(k, limit)? {
        return Ok(DualRun { status: DualStatus::PrimalInfeasible, pivots: t.pivots });
    }
    let multipliers = (0..n).map(|r| t.rhs(r)).collect();
    Ok(DualRun { status: DualStatus::Optimal { basis: t.basis.clone(), multipliers }, pivots: t.pivots })
}
