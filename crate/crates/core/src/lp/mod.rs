//! Repeated linear programming: `max x·y s.t. A y <= b` with a fixed `(A, b)`
//! and a per-round objective `x`. The universe is the set of constraint rows.
//!
//! Variables are free; any sign restriction has to be an explicit row so it
//! can take part in pruning.

mod simplex;

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::pruning::{Allowed, DomainOracle, Output, PrunedSet, Solved};
use crate::{Error, Result};
use simplex::{solve_dual, DualStatus};

/// Row-relative tolerance for calling a constraint tight: `|a_j·y - b_j| <= EPS_TIGHT (1 + |b_j|)`.
pub const EPS_TIGHT: f64 = 1e-9;
/// Absolute feasibility slack.
pub const EPS_FEAS: f64 = 1e-8;
/// Sup-norm tolerance of [`lp_equal`].
pub const EPS_CMP: f64 = 1e-7;
// Dual multipliers at or below this (relative to |x|) mean the optimum is not unique.
const EPS_DUAL: f64 = 1e-9;

/// Fixed constraint system `A y <= b`, `A` is `m × n` with `m >= n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProgram {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl LpProgram {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        let rows = a.len();
        if rows != b.len() {
            return Err(Error::MalformedProgram(format!("{rows} rows but {} bounds", b.len())));
        }
        let cols = a.first().map_or(0, Vec::len);
        if cols == 0 || rows < cols {
            return Err(Error::MalformedProgram(format!("need m >= n >= 1, got m = {rows}, n = {cols}")));
        }
        for (j, row) in a.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::MalformedProgram(format!("row {j} has {} entries, expected {cols}", row.len())));
            }
            if row.iter().chain([&b[j]]).any(|v| !v.is_finite()) {
                return Err(Error::MalformedProgram(format!("row {j} has a non-finite entry")));
            }
            if row.iter().all(|&v| v == 0.0) {
                return Err(Error::MalformedProgram(format!("row {j} is all zero")));
            }
        }
        Ok(LpProgram { rows, cols, a: a.concat(), b })
    }

    /// `m`
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `n`
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.a[j * self.cols..(j + 1) * self.cols]
    }

    pub fn bound(&self, j: usize) -> f64 {
        self.b[j]
    }

    pub fn bounds(&self) -> &[f64] {
        &self.b
    }

    /// `a_j · y`
    pub fn row_dot(&self, j: usize, y: &[f64]) -> f64 {
        self.row(j).iter().zip(y).map(|(a, v)| a * v).sum()
    }

    /// Parses `m n` followed by `m` lines of `n` coefficients and the bound.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `m n` header"))?;
        let dims = parse_numbers::<usize>(hline, header)?;
        let [m, n] = dims[..] else {
            return Err(Error::parse(hline, "header must be `m n`"));
        };
        let mut a = Vec::with_capacity(m);
        let mut b = Vec::with_capacity(m);
        for _ in 0..m {
            let (lineno, line) = lines.next().ok_or_else(|| Error::parse(hline, format!("expected {m} rows")))?;
            let mut vals = parse_numbers::<f64>(lineno, line)?;
            if vals.len() != n + 1 {
                return Err(Error::parse(lineno, format!("expected {} numbers, found {}", n + 1, vals.len())));
            }
            b.push(vals.pop().unwrap());
            a.push(vals);
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, "trailing content after the last row"));
        }
        Self::new(a, b)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for j in 0..self.rows {
            for v in self.row(j) {
                write!(s, "{v} ").unwrap();
            }
            writeln!(s, "{}", self.b[j]).unwrap();
        }
        s
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers<T: std::str::FromStr>(lineno: usize, line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| tok.parse().map_err(|_| Error::parse(lineno, format!("bad number `{tok}`"))))
        .collect()
}

/// A maximisation direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective(Vec<f64>);

impl Objective {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.is_empty() || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedInstance("objective must be a non-empty finite vector".into()));
        }
        if x.iter().all(|&v| v == 0.0) {
            return Err(Error::MalformedInstance("objective is the zero vector".into()));
        }
        Ok(Objective(x))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One objective per non-empty line.
    pub fn parse_lines(text: &str, n: usize) -> Result<Vec<Objective>> {
        numbered_lines(text)
            .map(|(lineno, line)| {
                let v = parse_numbers::<f64>(lineno, line)?;
                if v.len() != n {
                    return Err(Error::parse(lineno, format!("expected {n} coefficients, found {}", v.len())));
                }
                Objective::new(v).map_err(|e| Error::parse(lineno, e.to_string()))
            })
            .collect()
    }

    pub fn to_line(&self) -> String {
        let parts: Vec<_> = self.0.iter().map(f64::to_string).collect();
        parts.join(" ")
    }
}

/// A unique nondegenerate optimal vertex.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub y: Vec<f64>,
    /// The `n` rows tight at `y`, ascending.
    pub tight: Vec<usize>,
    /// Simplex pivots across both phases.
    pub pivots: u64,
}

impl LpSolution {
    pub fn value(&self, objective: &Objective) -> f64 {
        self.y.iter().zip(objective.as_slice()).map(|(a, b)| a * b).sum()
    }
}

/// Raw outcome of the simplex before any uniqueness policy is applied.
#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    /// An optimal basic point with its defining rows and their multipliers.
    Optimal { y: Vec<f64>, basis: Vec<usize>, multipliers: Vec<f64> },
    Unbounded,
    /// Bounded, but the allowed rows leave a direction free.
    RankDeficient,
}

fn allowed_rows(program: &LpProgram, allowed: Allowed<'_>) -> Result<Vec<usize>> {
    match allowed {
        Allowed::All => Ok((0..program.rows).collect()),
        Allowed::Only(set) => {
            if set.universe_size() != program.rows {
                return Err(Error::MalformedProgram(format!(
                    "allowed set over {} ids for {} rows",
                    set.universe_size(),
                    program.rows
                )));
            }
            Ok(set.to_vec())
        }
    }
}

/// Runs the two-phase simplex on the rows in `allowed` and reports the optimal
/// basis as-is, without checking for degeneracy. Returns the pivot count too.
pub fn optimize(program: &LpProgram, objective: &Objective, allowed: Allowed<'_>) -> Result<(LpStatus, u64)> {
    if objective.len() != program.cols {
        return Err(Error::MalformedInstance(format!(
            "objective has {} entries for {} variables",
            objective.len(),
            program.cols
        )));
    }
    let rows = allowed_rows(program, allowed)?;
    let normals: Vec<&[f64]> = rows.iter().map(|&j| program.row(j)).collect();
    let bounds: Vec<f64> = rows.iter().map(|&j| program.b[j]).collect();
    let run = solve_dual(&normals, &bounds, objective.as_slice())?;
    let status = match run.status {
        DualStatus::PrimalUnbounded => LpStatus::Unbounded,
        DualStatus::RankDeficient => LpStatus::RankDeficient,
        DualStatus::PrimalInfeasible => return Err(Error::InfeasibleRestriction),
        DualStatus::Optimal { basis, multipliers } => {
            let basis: Vec<usize> = basis.into_iter().map(|pos| rows[pos]).collect();
            let n = program.cols;
            let m = DMatrix::from_fn(n, n, |r, c| program.row(basis[r])[c]);
            let rhs = DVector::from_iterator(n, basis.iter().map(|&j| program.b[j]));
            match m.lu().solve(&rhs) {
                Some(y) => LpStatus::Optimal { y: y.iter().copied().collect(), basis, multipliers },
                None => LpStatus::RankDeficient,
            }
        }
    };
    Ok((status, run.pivots))
}

/// `argmax { x·y : A_S y <= b_S }`, or `Bot` when the restricted program is
/// unbounded or its optimum is not a single vertex with exactly `n` tight rows.
///
/// For the unrestricted program a `Bot` would mean the objective violates the
/// uniqueness assumption, so that case is reported as
/// [`Error::DegenerateInstance`] instead. `work` is the pivot count.
pub fn simplex_solve(program: &LpProgram, objective: &Objective, allowed: Allowed<'_>) -> Result<Solved<LpSolution>> {
    let (status, pivots) = optimize(program, objective, allowed)?;
    let degenerate = |why: String| -> Result<Solved<LpSolution>> {
        if allowed.is_all() {
            Err(Error::DegenerateInstance(why))
        } else {
            Ok(Solved { output: Output::Bot, work: pivots })
        }
    };
    let (y, multipliers) = match status {
        LpStatus::Unbounded => return degenerate("unbounded".into()),
        LpStatus::RankDeficient => return degenerate("optimum is not a vertex".into()),
        LpStatus::Optimal { y, multipliers, .. } => (y, multipliers),
    };

    let rows = allowed_rows(program, allowed)?;
    let mut tight = Vec::with_capacity(program.cols);
    for &j in &rows {
        let slack = program.b[j] - program.row_dot(j, &y);
        if slack < -EPS_FEAS * (1.0 + program.b[j].abs()) {
            return Err(Error::Numerical(format!("optimal point violates row {j} by {}", -slack)));
        }
        if slack.abs() <= EPS_TIGHT * (1.0 + program.b[j].abs()) {
            tight.push(j);
        }
    }
    if tight.len() != program.cols {
        return degenerate(format!("{} tight rows for {} variables", tight.len(), program.cols));
    }
    let scale = 1.0 + objective.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if multipliers.iter().any(|&l| l <= EPS_DUAL * scale) {
        return degenerate("objective is parallel to a face; optimum not unique".into());
    }
    Ok(Solved { output: Output::Value(LpSolution { y, tight, pivots }), work: pivots })
}

/// The tight rows of a proper solution.
pub fn lp_witness(program: &LpProgram, solution: &Output<LpSolution>) -> Result<PrunedSet> {
    match solution {
        Output::Bot => Err(Error::BotWitness),
        Output::Value(s) => PrunedSet::from_ids(program.rows, s.tight.iter().copied()),
    }
}

/// Both `Bot`, or both proper with `‖y_a - y_b‖∞ <= EPS_CMP`.
pub fn lp_equal(a: &Output<LpSolution>, b: &Output<LpSolution>) -> bool {
    a.same_by(b, |a, b| points_equal(&a.y, &b.y))
}

pub fn points_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p - q).abs() <= EPS_CMP)
}

/// A fixed program with per-round objectives.
#[derive(Debug, Clone)]
pub struct LpOracle {
    program: LpProgram,
}

impl LpOracle {
    pub fn new(program: LpProgram) -> Self {
        LpOracle { program }
    }

    pub fn program(&self) -> &LpProgram {
        &self.program
    }
}

impl DomainOracle for LpOracle {
    type Instance = Objective;
    type Solution = LpSolution;

    fn universe_size(&self) -> usize {
        self.program.rows
    }

    fn solve(&self, instance: &Objective, allowed: Allowed<'_>) -> Result<Solved<LpSolution>> {
        simplex_solve(&self.program, instance, allowed)
    }

    fn witness(&self, _instance: &Objective, solution: &Output<LpSolution>) -> Result<PrunedSet> {
        match solution {
            Output::Bot => Ok(PrunedSet::empty(self.program.rows)),
            value => lp_witness(&self.program, value),
        }
    }

    fn same(&self, a: &Output<LpSolution>, b: &Output<LpSolution>) -> bool {
        lp_equal(a, b)
    }
}
