//! Repeated shortest-path routing: the universe is the edge set.
//!
//! Ties between equal-weight paths are broken by comparing edge-id sequences
//! lexicographically, so every instance has exactly one canonical answer and
//! the witness of an answer is simply the set of its edges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt::{self, Write as _};

use crate::pruning::{Allowed, DomainOracle, Output, PrunedSet, Solved, UniverseId};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    /// Line number in the source edge list; two arcs share it when an
    /// undirected edge was expanded.
    pub display_id: usize,
}

/// A fixed directed multigraph with a designated source and terminal.
#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: usize,
    arcs: Vec<Arc>,
    source: usize,
    terminal: usize,
    directed: bool,
    // out-arcs per vertex, ascending edge id
    out: Vec<Vec<u32>>,
}

impl Graph {
    pub fn directed(vertex_count: usize, arcs: &[(usize, usize)], source: usize, terminal: usize) -> Result<Self> {
        let arcs = arcs
            .iter()
            .enumerate()
            .map(|(i, &(tail, head))| Arc { tail, head, display_id: i })
            .collect();
        Self::build(vertex_count, arcs, source, terminal, true)
    }

    /// Each undirected edge `k` becomes arcs `2k` (as given) and `2k + 1` (reversed).
    pub fn undirected(vertex_count: usize, edges: &[(usize, usize)], source: usize, terminal: usize) -> Result<Self> {
        let arcs = edges
            .iter()
            .enumerate()
            .flat_map(|(k, &(a, b))| {
                [Arc { tail: a, head: b, display_id: k }, Arc { tail: b, head: a, display_id: k }]
            })
            .collect();
        Self::build(vertex_count, arcs, source, terminal, false)
    }

    fn build(vertex_count: usize, arcs: Vec<Arc>, source: usize, terminal: usize, directed: bool) -> Result<Self> {
        if source >= vertex_count || terminal >= vertex_count {
            return Err(Error::MalformedGraph(format!(
                "endpoints ({source}, {terminal}) out of range for {vertex_count} vertices"
            )));
        }
        if source == terminal {
            return Err(Error::MalformedGraph("source and terminal coincide".into()));
        }
        if arcs.len() > u32::MAX as usize {
            return Err(Error::MalformedGraph("too many edges".into()));
        }
        let mut out = vec![Vec::new(); vertex_count];
        for (e, arc) in arcs.iter().enumerate() {
            if arc.tail >= vertex_count || arc.head >= vertex_count {
                return Err(Error::MalformedGraph(format!("edge {e} references a missing vertex")));
            }
            out[arc.tail].push(e as u32);
        }
        Ok(Graph { vertex_count, arcs, source, terminal, directed, out })
    }

    /// Same topology with different endpoints.
    pub fn with_endpoints(&self, source: usize, terminal: usize) -> Result<Self> {
        Self::build(self.vertex_count, self.arcs.clone(), source, terminal, self.directed)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: UniverseId) -> Arc {
        self.arcs[id.0]
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Parses the text edge-list format: a header `directed|undirected V E`
    /// followed by `E` lines `tail head weight` (0-based vertices). Edge ids
    /// follow line order.
    pub fn parse_edge_list(text: &str, source: usize, terminal: usize) -> Result<(Graph, EdgeWeights)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<_> = header.split_whitespace().collect();
        let [kind, v, e] = fields[..] else {
            return Err(Error::parse(hline, "header must be `directed|undirected V E`"));
        };
        let directed = match kind {
            "directed" => true,
            "undirected" => false,
            other => return Err(Error::parse(hline, format!("unknown graph kind `{other}`"))),
        };
        let vertex_count: usize = v.parse().map_err(|_| Error::parse(hline, "bad vertex count"))?;
        let edge_count: usize = e.parse().map_err(|_| Error::parse(hline, "bad edge count"))?;

        let mut pairs = Vec::with_capacity(edge_count);
        let mut weights = Vec::with_capacity(edge_count);
        for (lineno, line) in lines.by_ref().take(edge_count) {
            let f: Vec<_> = line.split_whitespace().collect();
            let [t, h, w] = f[..] else {
                return Err(Error::parse(lineno, "edge line must be `tail head weight`"));
            };
            let tail: usize = t.parse().map_err(|_| Error::parse(lineno, "bad tail"))?;
            let head: usize = h.parse().map_err(|_| Error::parse(lineno, "bad head"))?;
            let weight: f64 = w.parse().map_err(|_| Error::parse(lineno, "bad weight"))?;
            if !(weight.is_finite() && weight >= 0.0) {
                return Err(Error::parse(lineno, "weights must be finite and non-negative"));
            }
            pairs.push((tail, head));
            weights.push(weight);
        }
        if pairs.len() != edge_count {
            return Err(Error::parse(hline, format!("header promises {edge_count} edges, found {}", pairs.len())));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(Error::parse(lineno, "trailing content after the last edge"));
        }
        if directed {
            Ok((Graph::directed(vertex_count, &pairs, source, terminal)?, EdgeWeights::new(weights)?))
        } else {
            let doubled = weights.iter().flat_map(|&w| [w, w]).collect();
            Ok((Graph::undirected(vertex_count, &pairs, source, terminal)?, EdgeWeights::new(doubled)?))
        }
    }

    /// Inverse of [`Graph::parse_edge_list`]. Undirected graphs are written one
    /// line per display id using the weight of the forward arc.
    pub fn to_edge_list(&self, weights: &EdgeWeights) -> Result<String> {
        check_weights(self, weights)?;
        let mut s = String::new();
        if self.directed {
            writeln!(s, "directed {} {}", self.vertex_count, self.arcs.len()).unwrap();
            for (arc, w) in self.arcs.iter().zip(weights.as_slice()) {
                writeln!(s, "{} {} {}", arc.tail, arc.head, w).unwrap();
            }
        } else {
            writeln!(s, "undirected {} {}", self.vertex_count, self.arcs.len() / 2).unwrap();
            for (arc, w) in self.arcs.iter().zip(weights.as_slice()).step_by(2) {
                writeln!(s, "{} {} {}", arc.tail, arc.head, w).unwrap();
            }
        }
        Ok(s)
    }
}

/// Non-negative weight per edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights(Vec<f64>);

impl EdgeWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((e, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::MalformedGraph(format!("edge {e} has invalid weight {w}")));
        }
        Ok(EdgeWeights(weights))
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

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// An `s`-`t` path as an ordered edge-id sequence.
///
/// Two paths are equal when their edge sequences are.
#[derive(Debug, Clone)]
pub struct Path {
    pub edge_ids: Vec<UniverseId>,
    pub total_weight: f64,
}

impl PartialEq for Path {
    fn eq(&self, other: &Self) -> bool {
        self.edge_ids == other.edge_ids
    }
}

impl Eq for Path {}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<_> = self.edge_ids.iter().map(|e| e.0.to_string()).collect();
        write!(f, "[{}] ({})", ids.join(" "), self.total_weight)
    }
}

fn check_weights(graph: &Graph, weights: &EdgeWeights) -> Result<()> {
    if weights.len() != graph.edge_count() {
        return Err(Error::MalformedGraph(format!(
            "{} weights for {} edges",
            weights.len(),
            graph.edge_count()
        )));
    }
    Ok(())
}

#[derive(Debug, PartialEq)]
struct Entry {
    dist: f64,
    path: Vec<u32>,
    node: usize,
    version: u32,
}

impl Eq for Entry {}

impl Ord for Entry {
    // BinaryHeap is a max-heap; invert so the smallest (dist, path) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.path.cmp(&self.path))
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| other.version.cmp(&self.version))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `(dist_a, path_a ++ [edge])` vs `(dist_b, path_b)` without building the new path.
fn extended_cmp(dist_a: f64, path_a: &[u32], edge: u32, dist_b: f64, path_b: &[u32]) -> Ordering {
    dist_a
        .total_cmp(&dist_b)
        .then_with(|| path_a.iter().chain(std::iter::once(&edge)).cmp(path_b.iter()))
}

/// Canonical shortest `s`-`t` path using only `allowed` edges.
///
/// Among minimum-weight simple paths the one with the lexicographically
/// smallest edge-id sequence is returned. The heap key is
/// `(distance, partial edge sequence)`; sequences are only compared on
/// distance ties. `work` counts settle events, and the search stops when the
/// terminal is settled.
pub fn dijkstra_canonical(graph: &Graph, weights: &EdgeWeights, allowed: Allowed<'_>) -> Result<Solved<Path>> {
    check_weights(graph, weights)?;
    let w = weights.as_slice();

    let restricted;
    let adjacency: &[Vec<u32>] = match allowed {
        Allowed::All => &graph.out,
        Allowed::Only(set) => {
            if set.universe_size() != graph.edge_count() {
                return Err(Error::MalformedGraph(format!(
                    "allowed set over {} ids for {} edges",
                    set.universe_size(),
                    graph.edge_count()
                )));
            }
            let mut out = vec![Vec::new(); graph.vertex_count];
            for e in set.iter() {
                out[graph.arcs[e.0].tail].push(e.0 as u32);
            }
            restricted = out;
            &restricted
        }
    };

    let n = graph.vertex_count;
    let mut label: Vec<Option<(f64, Vec<u32>)>> = vec![None; n];
    let mut version = vec![0u32; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut work = 0u64;

    label[graph.source] = Some((0.0, Vec::new()));
    heap.push(Entry { dist: 0.0, path: Vec::new(), node: graph.source, version: 0 });

    while let Some(Entry { dist, path, node, version: v }) = heap.pop() {
        if settled[node] || v != version[node] {
            continue;
        }
        settled[node] = true;
        work += 1;
        if node == graph.terminal {
            let edge_ids = path.into_iter().map(|e| UniverseId(e as usize)).collect();
            return Ok(Solved { output: Output::Value(Path { edge_ids, total_weight: dist }), work });
        }
        for &e in &adjacency[node] {
            let head = graph.arcs[e as usize].head;
            if settled[head] {
                continue;
            }
            let nd = dist + w[e as usize];
            let better = match &label[head] {
                None => true,
                Some((ld, lp)) => extended_cmp(nd, &path, e, *ld, lp) == Ordering::Less,
            };
            if better {
                let mut np = Vec::with_capacity(path.len() + 1);
                np.extend_from_slice(&path);
                np.push(e);
                version[head] += 1;
                heap.push(Entry { dist: nd, path: np.clone(), node: head, version: version[head] });
                label[head] = Some((nd, np));
            }
        }
    }
    Ok(Solved { output: Output::Bot, work })
}

/// The edges of a path, as a subset of the graph's edge universe.
pub fn sp_witness(graph: &Graph, solution: &Output<Path>) -> Result<PrunedSet> {
    match solution {
        Output::Bot => Err(Error::BotWitness),
        Output::Value(path) => PrunedSet::from_ids(graph.edge_count(), path.edge_ids.iter().copied()),
    }
}

/// Shortest-path routing over a fixed graph; instances are weight vectors.
#[derive(Debug, Clone)]
pub struct ShortestPathOracle {
    graph: Graph,
}

impl ShortestPathOracle {
    pub fn new(graph: Graph) -> Self {
        ShortestPathOracle { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl DomainOracle for ShortestPathOracle {
    type Instance = EdgeWeights;
    type Solution = Path;

    fn universe_size(&self) -> usize {
        self.graph.edge_count()
    }

    fn solve(&self, instance: &EdgeWeights, allowed: Allowed<'_>) -> Result<Solved<Path>> {
        dijkstra_canonical(&self.graph, instance, allowed)
    }

    fn witness(&self, _instance: &EdgeWeights, solution: &Output<Path>) -> Result<PrunedSet> {
        match solution {
            Output::Bot => Ok(PrunedSet::empty(self.graph.edge_count())),
            value => sp_witness(&self.graph, value),
        }
    }

    fn same(&self, a: &Output<Path>, b: &Output<Path>) -> bool {
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[usize]) -> Vec<UniverseId> {
        v.iter().copied().map(UniverseId).collect()
    }

    fn path_of(s: &Solved<Path>) -> Vec<usize> {
        s.output.value().unwrap().edge_ids.iter().map(|e| e.0).collect()
    }

    #[test]
    fn parallel_tie_picks_smallest_id() {
        let g = Graph::directed(2, &[(0, 1), (0, 1)], 0, 1).unwrap();
        let w = EdgeWeights::new(vec![1.0, 1.0]).unwrap();
        let s = dijkstra_canonical(&g, &w, Allowed::All).unwrap();
        assert_eq!(path_of(&s), vec![0]);
    }

    #[test]
    fn empty_restriction_is_bot() {
        let g = Graph::directed(2, &[(0, 1), (0, 1)], 0, 1).unwrap();
        let w = EdgeWeights::new(vec![1.0, 1.0]).unwrap();
        let none = PrunedSet::empty(2);
        let s = dijkstra_canonical(&g, &w, Allowed::Only(&none)).unwrap();
        assert!(s.output.is_bot());
    }

    #[test]
    fn lexicographic_over_whole_sequence() {
        // Two weight-2 paths: [1, 2] and [0, 3] via different middle vertices.
        // [0, 3] < [1, 2] lexicographically.
        let g = Graph::directed(4, &[(0, 2), (0, 1), (1, 3), (2, 3)], 0, 3).unwrap();
        let w = EdgeWeights::new(vec![1.0; 4]).unwrap();
        assert_eq!(path_of(&dijkstra_canonical(&g, &w, Allowed::All).unwrap()), vec![0, 3]);
    }

    #[test]
    fn zero_weight_detour_is_compared_lexicographically() {
        // s=0 -> t=2 directly via edge 5 (weight 1), or 0 -e0-> 1 -e1-> 2 with weights 0,1.
        // Both weigh 1; [0, 1] < [5].
        let g = Graph::directed(3, &[(0, 1), (1, 2), (2, 1), (1, 0), (2, 0), (0, 2)], 0, 2).unwrap();
        let w = EdgeWeights::new(vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(path_of(&dijkstra_canonical(&g, &w, Allowed::All).unwrap()), vec![0, 1]);
    }

    #[test]
    fn witness_examples() {
        let g = Graph::directed(2, &[(0, 1); 5], 0, 1).unwrap();
        let p = Output::Value(Path { edge_ids: ids(&[3, 1, 4]), total_weight: 0.0 });
        assert_eq!(sp_witness(&g, &p).unwrap().to_vec(), vec![1, 3, 4]);
        let p = Output::Value(Path { edge_ids: ids(&[0]), total_weight: 0.0 });
        assert_eq!(sp_witness(&g, &p).unwrap().to_vec(), vec![0]);
        assert!(matches!(sp_witness(&g, &Output::Bot), Err(Error::BotWitness)));
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(Graph::directed(2, &[(0, 1)], 0, 0).is_err());
        assert!(Graph::directed(2, &[(0, 2)], 0, 1).is_err());
        assert!(EdgeWeights::new(vec![-1.0]).is_err());
        let g = Graph::directed(2, &[(0, 1)], 0, 1).unwrap();
        let w = EdgeWeights::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(dijkstra_canonical(&g, &w, Allowed::All), Err(Error::MalformedGraph(_))));
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "directed 3 3\n0 1 1.5\n1 2 0\n0 2 2.25\n";
        let (g, w) = Graph::parse_edge_list(text, 0, 2).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(w.as_slice(), &[1.5, 0.0, 2.25]);
        assert_eq!(g.to_edge_list(&w).unwrap(), text);

        let text = "undirected 3 2\n0 1 1\n1 2 4\n";
        let (g, w) = Graph::parse_edge_list(text, 2, 0).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.arc(UniverseId(3)), Arc { tail: 2, head: 1, display_id: 1 });
        assert_eq!(w.as_slice(), &[1.0, 1.0, 4.0, 4.0]);
        assert_eq!(path_of(&dijkstra_canonical(&g, &w, Allowed::All).unwrap()), vec![3, 1]);
        assert_eq!(g.to_edge_list(&w).unwrap(), text);
    }

    #[test]
    fn edge_list_errors_carry_line() {
        let err = Graph::parse_edge_list("directed 2 2\n0 1 1\n", 0, 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Graph::parse_edge_list("directed 2 1\n0 1 -3\n", 0, 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Graph::parse_edge_list("sideways 2 1\n0 1 1\n", 0, 1).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
