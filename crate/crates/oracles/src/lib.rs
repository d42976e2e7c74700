//! Brute-force reference solvers.
//!
//! Everything here works on plain slices and shares no code with the
//! production solvers, so agreement between the two is meaningful. The
//! algorithms are exponential and only meant for tiny instances.

/// Canonical shortest simple `s`-`t` path by exhaustive enumeration.
///
/// `arcs[e] = (tail, head)`; edge ids are positions in `arcs`. Only edges with
/// `allowed[e] == true` may be used. Path weight is accumulated front to back,
/// starting from `0.0`. Among minimum-weight paths the lexicographically
/// smallest edge-id sequence wins. Returns `None` if no path exists.
pub fn shortest_simple_path(
    vertex_count: usize,
    arcs: &[(usize, usize)],
    weights: &[f64],
    allowed: &[bool],
    source: usize,
    terminal: usize,
) -> Option<(Vec<usize>, f64)> {
    assert_eq!(arcs.len(), weights.len());
    assert_eq!(arcs.len(), allowed.len());

    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut visited = vec![false; vertex_count];
    let mut stack = Vec::new();
    visited[source] = true;
    enumerate_paths(
        arcs,
        weights,
        allowed,
        source,
        terminal,
        0.0,
        &mut visited,
        &mut stack,
        &mut |path, weight| {
            let better = match &best {
                None => true,
                Some((bp, bw)) => weight < *bw || (weight == *bw && path < bp.as_slice()),
            };
            if better {
                best = Some((path.to_vec(), weight));
            }
        },
    );
    best
}

#[allow(clippy::too_many_arguments)]
fn enumerate_paths(
    arcs: &[(usize, usize)],
    weights: &[f64],
    allowed: &[bool],
    at: usize,
    terminal: usize,
    weight: f64,
    visited: &mut [bool],
    stack: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], f64),
) {
    if at == terminal {
        visit(stack, weight);
        return;
    }
    for (e, &(tail, head)) in arcs.iter().enumerate() {
        if tail != at || !allowed[e] || visited[head] {
            continue;
        }
        visited[head] = true;
        stack.push(e);
        enumerate_paths(arcs, weights, allowed, head, terminal, weight + weights[e], visited, stack, visit);
        stack.pop();
        visited[head] = false;
    }
}

/// Every simple `s`-`t` path, as edge-id sequences, in no particular order.
pub fn all_simple_paths(
    vertex_count: usize,
    arcs: &[(usize, usize)],
    source: usize,
    terminal: usize,
) -> Vec<Vec<usize>> {
    let weights = vec![0.0; arcs.len()];
    let allowed = vec![true; arcs.len()];
    let mut out = Vec::new();
    let mut visited = vec![false; vertex_count];
    visited[source] = true;
    enumerate_paths(
        arcs,
        &weights,
        &allowed,
        source,
        terminal,
        0.0,
        &mut visited,
        &mut Vec::new(),
        &mut |p, _| out.push(p.to_vec()),
    );
    out
}

/// Optimal vertex of `max x·y s.t. a_j·y <= b_j (j in rows)` by enumerating
/// every `n`-subset of rows, solving the square system and keeping the best
/// feasible intersection point.
///
/// Returns the point and the rows tight there (within `1e-9 (1 + |b_j|)`).
/// The caller must guarantee the restricted LP is bounded; this routine has no
/// way to detect unboundedness and will happily return the best vertex.
pub fn lp_vertex_enumeration(
    a: &[Vec<f64>],
    b: &[f64],
    x: &[f64],
    rows: &[usize],
) -> Option<(Vec<f64>, Vec<usize>)> {
    let n = x.len();
    if rows.len() < n {
        return None;
    }
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut pick = Vec::with_capacity(n);
    for_each_combination(rows, n, &mut pick, &mut |subset| {
        let m: Vec<Vec<f64>> = subset.iter().map(|&j| a[j].clone()).collect();
        let rhs: Vec<f64> = subset.iter().map(|&j| b[j]).collect();
        let Some(y) = gauss_solve(m, rhs) else { return };
        let feasible = rows
            .iter()
            .all(|&j| dot(&a[j], &y) <= b[j] + 1e-9 * (1.0 + b[j].abs()));
        if !feasible {
            return;
        }
        let value = dot(x, &y);
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((y, value));
        }
    });
    best.map(|(y, _)| {
        let tight = rows
            .iter()
            .copied()
            .filter(|&j| (dot(&a[j], &y) - b[j]).abs() <= 1e-9 * (1.0 + b[j].abs()))
            .collect();
        (y, tight)
    })
}

fn for_each_combination(
    items: &[usize],
    k: usize,
    pick: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if pick.len() == k {
        f(pick);
        return;
    }
    let need = k - pick.len();
    for i in 0..items.len() {
        if items.len() - i < need {
            break;
        }
        pick.push(items[i]);
        for_each_combination(&items[i + 1..], k, pick, f);
        pick.pop();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Gaussian elimination with partial pivoting; `None` when (numerically) singular.
fn gauss_solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor == 0.0 {
                continue;
            }
            let (top, bottom) = m.split_at_mut(r);
            for (dst, src) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *dst -= factor * src;
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut y = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * y[c]).sum();
        y[r] = (rhs[r] - s) / m[r][r];
    }
    Some(y)
}

/// Smallest 1-based index `j` in `candidates` (or in `1..=n-m+1` when `None`)
/// such that `text[j-1..j-1+m] == pattern`, checking every symbol.
pub fn first_match(text: &[u8], pattern: &[u8], candidates: Option<&[usize]>) -> Option<usize> {
    let last = (text.len() + 1).checked_sub(pattern.len())?;
    let occurs = |j: usize| -> bool {
        if j == 0 || j > last {
            return false;
        }
        let mut k = 0;
        while k < pattern.len() {
            if text[j - 1 + k] != pattern[k] {
                return false;
            }
            k += 1;
        }
        true
    };
    match candidates {
        None => (1..=last).find(|&j| occurs(j)),
        Some(c) => c.iter().copied().filter(|&j| occurs(j)).min(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_diamond() {
        // 0->1->3, 0->2->3, plus 0->3
        let arcs = [(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)];
        let mut paths = all_simple_paths(4, &arcs, 0, 3);
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1], vec![2, 3], vec![4]]);

        let w = [1.0, 1.0, 1.0, 1.0, 2.0];
        let (p, d) = shortest_simple_path(4, &arcs, &w, &[true; 5], 0, 3).unwrap();
        assert_eq!((p, d), (vec![0, 1], 2.0));
        let (p, _) = shortest_simple_path(4, &arcs, &w, &[false, true, true, true, true], 0, 3).unwrap();
        assert_eq!(p, vec![2, 3]);
    }

    #[test]
    fn box_vertex() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        let b = [1.0, 1.0, 0.0, 0.0];
        let (y, tight) = lp_vertex_enumeration(&a, &b, &[1.0, 1.0], &[0, 1, 2, 3]).unwrap();
        assert_eq!(y, vec![1.0, 1.0]);
        assert_eq!(tight, vec![0, 1]);
    }

    #[test]
    fn scan() {
        assert_eq!(first_match(b"ABAB", b"AB", None), Some(1));
        assert_eq!(first_match(b"ABAB", b"AB", Some(&[3])), Some(3));
        assert_eq!(first_match(b"ABAB", b"AB", Some(&[2])), None);
        assert_eq!(first_match(b"AB", b"ABC", None), None);
    }
}
