use rand::Rng;

use crate::shortest_path::{EdgeWeights, Graph};
use crate::{Error, Result};

/// Vertex id of grid cell `(row, col)`.
pub fn grid_vertex(width: usize, row: usize, col: usize) -> usize {
    row * width + col
}

/// A `width × height` 4-connected grid with an arc in each direction between
/// neighbours and independent base weights `U(0.5, 1.5)` per arc.
///
/// Source is the top-left cell, terminal the bottom-right one; use
/// [`Graph::with_endpoints`] to move them.
pub fn synth_grid_graph<R: Rng + ?Sized>(width: usize, height: usize, rng: &mut R) -> Result<(Graph, EdgeWeights)> {
    if width < 2 || height < 2 {
        return Err(Error::domain(format!("grid must be at least 2x2, got {width}x{height}")));
    }
    let mut arcs = Vec::with_capacity(4 * width * height);
    for r in 0..height {
        for c in 0..width {
            let v = grid_vertex(width, r, c);
            if c + 1 < width {
                let right = grid_vertex(width, r, c + 1);
                arcs.extend([(v, right), (right, v)]);
            }
            if r + 1 < height {
                let down = grid_vertex(width, r + 1, c);
                arcs.extend([(v, down), (down, v)]);
            }
        }
    }
    let weights = (0..arcs.len()).map(|_| rng.random_range(0.5..1.5)).collect();
    let graph = Graph::directed(width * height, &arcs, 0, width * height - 1)?;
    Ok((graph, EdgeWeights::new(weights)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pruning::Allowed;
    use crate::rng::{stream, Purpose};
    use crate::shortest_path::dijkstra_canonical;

    #[test]
    fn two_by_two() {
        let (g, w) = synth_grid_graph(2, 2, &mut stream(0, 0, Purpose::BaseProblem)).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 8);
        assert!(w.as_slice().iter().all(|x| (0.5..1.5).contains(x)));
    }

    #[test]
    fn always_connected() {
        for seed in 0..20 {
            let mut rng = stream(seed, 0, Purpose::BaseProblem);
            let (g, w) = synth_grid_graph(2 + seed as usize % 5, 2 + seed as usize % 3, &mut rng).unwrap();
            assert!(!dijkstra_canonical(&g, &w, Allowed::All).unwrap().output.is_bot());
        }
    }

    #[test]
    fn edge_count_formula() {
        let (g, _) = synth_grid_graph(30, 30, &mut stream(0, 0, Purpose::BaseProblem)).unwrap();
        assert_eq!(g.edge_count(), 2 * (2 * 30 * 29));
        assert!(synth_grid_graph(1, 5, &mut stream(0, 0, Purpose::BaseProblem)).is_err());
    }
}
