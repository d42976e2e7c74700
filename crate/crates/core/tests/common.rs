// Shared random small-instance builders for the integration tests.
#![allow(dead_code)]

use rand::Rng;
use repeatprune::lp::{LpProgram, Objective};
use repeatprune::rng::StreamRng;
use repeatprune::shortest_path::{EdgeWeights, Graph};

/// Random multigraph with `s = 0`, `t = v - 1` and integer weights in `0..=3`.
pub fn random_graph(rng: &mut StreamRng, max_vertices: usize, max_arcs: usize) -> (Graph, EdgeWeights) {
    let v = rng.random_range(2..=max_vertices);
    let count = rng.random_range(1..=max_arcs);
    let arcs: Vec<_> = (0..count)
        .map(|_| {
            let a = rng.random_range(0..v);
            let mut b = rng.random_range(0..v - 1);
            if b >= a {
                b += 1;
            }
            (a, b)
        })
        .collect();
    let graph = Graph::directed(v, &arcs, 0, v - 1).unwrap();
    let w = (0..count).map(|_| rng.random_range(0..=3) as f64).collect();
    (graph, EdgeWeights::new(w).unwrap())
}

pub fn arcs_of(graph: &Graph) -> Vec<(usize, usize)> {
    graph.arcs().iter().map(|a| (a.tail, a.head)).collect()
}

/// Bounded 2-variable program with the origin strictly inside.
pub fn random_bounded_lp(rng: &mut StreamRng, min_rows: usize, max_rows: usize) -> LpProgram {
    let m = rng.random_range(min_rows..=max_rows);
    let step = std::f64::consts::TAU / m as f64;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for j in 0..m {
        let theta = step * (j as f64 + rng.random_range(-0.2..0.2));
        let r = rng.random_range(0.5..2.0);
        a.push(vec![r * theta.cos(), r * theta.sin()]);
        b.push(rng.random_range(0.5..2.0));
    }
    LpProgram::new(a, b).unwrap()
}

pub fn unit_objective(rng: &mut StreamRng) -> Objective {
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    Objective::new(vec![theta.cos(), theta.sin()]).unwrap()
}

pub fn rows_of(program: &LpProgram) -> Vec<Vec<f64>> {
    (0..program.rows()).map(|j| program.row(j).to_vec()).collect()
}
