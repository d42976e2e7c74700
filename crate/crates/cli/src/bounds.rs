use repeatprune::pruning::{
    lower_bound_product, mistake_bound, mistake_bound_inverse_sqrt, pruned_size_bound, pruned_size_bound_inverse_sqrt,
    tight_construction_expectations, Schedule,
};
use repeatprune::Result;

/// Which formulas to evaluate; each is optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundsQuery {
    /// `(|S*|, p, T)`
    pub mistake: Option<(usize, f64, usize)>,
    /// `(|S*|, T)` under `p_i = 1/sqrt(i)`
    pub mistake_sqrt: Option<(usize, usize)>,
    /// `(|S*|, |U|, p, T)`
    pub size: Option<(usize, usize, f64, usize)>,
    /// `(|S*|, |U|, T)` under `p_i = 1/sqrt(i)`
    pub size_sqrt: Option<(usize, usize, usize)>,
    /// `(k, p, T)`
    pub tight: Option<(usize, f64, usize)>,
    /// `(m, T)`
    pub lower: Option<(usize, usize)>,
}

/// `(label, value)` rows in a fixed order.
pub fn bounds_table(q: &BoundsQuery) -> Result<Vec<(&'static str, f64)>> {
    let mut rows = Vec::new();
    if let Some((s, p, t)) = q.mistake {
        rows.push(("mistake_bound", mistake_bound(s, p, t)?));
    }
    if let Some((s, t)) = q.mistake_sqrt {
        rows.push(("mistake_bound_inverse_sqrt", mistake_bound_inverse_sqrt(s, t)?));
    }
    if let Some((s, u, p, t)) = q.size {
        rows.push(("pruned_size_bound", pruned_size_bound(s, u, &Schedule::constant(p)?, t)?));
    }
    if let Some((s, u, t)) = q.size_sqrt {
        rows.push(("pruned_size_bound_inverse_sqrt", pruned_size_bound_inverse_sqrt(s, u, t)?));
    }
    if let Some((k, p, t)) = q.tight {
        let e = tight_construction_expectations(k, p, t)?;
        rows.push(("tight_expected_s_star", e.expected_s_star));
        rows.push(("tight_expected_mistakes", e.expected_mistakes));
    }
    if let Some((m, t)) = q.lower {
        rows.push(("lower_bound_product", lower_bound_product(m, t)));
    }
    Ok(rows)
}

pub fn format_table(rows: &[(&str, f64)]) -> String {
    rows.iter().map(|(k, v)| format!("{k:<32} {v}\n")).collect()
}
