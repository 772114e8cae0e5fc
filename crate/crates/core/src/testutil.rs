//! Shared helpers for unit tests.

use crate::rational::{rat_int, Rat};
use crate::structure::MetricStructure;
use std::collections::BTreeMap;

/// Builds a structure from upper-triangle distances; unspecified pairs
/// stay 0, so list every pair.
pub(crate) fn structure_from_upper(n: usize, upper: &[(usize, usize, Rat)]) -> MetricStructure {
    let points = (0..n).map(|i| format!("p{i}")).collect();
    let mut metric = vec![vec![rat_int(0); n]; n];
    for (i, j, d) in upper {
        metric[*i][*j] = d.clone();
        metric[*j][*i] = d.clone();
    }
    MetricStructure::new(points, metric, BTreeMap::new()).unwrap()
}

/// All tuples of the given length over `0..n`, in lexicographic order.
pub(crate) fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}
