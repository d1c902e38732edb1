//! Scores for a reconstructed tree against the cascade that produced it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reconstruct::ReconstructedTree;
use crate::simulate::Cascade;

/// Evaluation of one reconstruction. `order_accuracy` is absent for
/// edgeless trees; `runtime_ms` is absent when timing was not requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricRecord {
    pub tree_size: usize,
    pub precision: f64,
    pub recall: f64,
    pub order_accuracy: Option<f64>,
    pub runtime_ms: Option<f64>,
}

/// Number of edges in the tree.
pub fn tree_size(t: &ReconstructedTree) -> usize {
    t.size()
}

/// Fraction of tree nodes that were infected, and fraction of infected
/// nodes present in the tree.
pub fn node_precision_recall(t: &ReconstructedTree, c: &Cascade) -> Result<(f64, f64)> {
    if c.infected_count() == 0 {
        return Err(Error::InvalidParameter(
            "cascade has no infected nodes".into(),
        ));
    }
    let nodes = t.nodes();
    let hits = nodes.iter().filter(|&&v| c.is_infected(v)).count() as f64;
    Ok((hits / nodes.len() as f64, hits / c.infected_count() as f64))
}

/// Fraction of parent-to-child edges whose true infection times do not
/// decrease. Edges touching an uninfected node count as wrong.
pub fn order_accuracy(t: &ReconstructedTree, c: &Cascade) -> Option<f64> {
    if t.size() == 0 {
        return None;
    }
    let correct = t
        .edges()
        .filter(|&(p, v)| match (c.infection_time(p), c.infection_time(v)) {
            (Some(tp), Some(tv)) => tp <= tv,
            _ => false,
        })
        .count();
    Some(correct as f64 / t.size() as f64)
}

pub fn evaluate(
    t: &ReconstructedTree,
    c: &Cascade,
    runtime_ms: Option<f64>,
) -> Result<MetricRecord> {
    let (precision, recall) = node_precision_recall(t, c)?;
    Ok(MetricRecord {
        tree_size: tree_size(t),
        precision,
        recall,
        order_accuracy: order_accuracy(t, c),
        runtime_ms,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    fn tree(root: usize, edges: &[(usize, usize)]) -> ReconstructedTree {
        let parent: BTreeMap<_, _> = edges.iter().map(|&(p, c)| (c, p)).collect();
        ReconstructedTree::new(root, parent)
    }

    fn cascade(n: usize, times: &[(usize, f64)]) -> Cascade {
        Cascade::new(times[0].0, n, times.iter().copied()).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(tree_size(&ReconstructedTree::single(0)), 0);
        assert_eq!(tree_size(&tree(0, &[(0, 1), (1, 2), (2, 3), (3, 4)])), 4);
    }

    #[test]
    fn precision_recall() {
        let c = cascade(5, &[(0, 0.0), (1, 1.0), (2, 1.0), (3, 2.0)]);
        let t = tree(0, &[(0, 1), (1, 2)]);
        assert_eq!(node_precision_recall(&t, &c).unwrap(), (1.0, 0.75));

        let c = cascade(3, &[(0, 0.0), (2, 1.0)]);
        let t = tree(0, &[(0, 1)]);
        assert_eq!(node_precision_recall(&t, &c).unwrap(), (0.5, 0.5));

        let t = tree(0, &[(0, 2)]);
        assert_eq!(node_precision_recall(&t, &c).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn order() {
        let t = tree(0, &[(0, 1), (1, 2)]);
        let c = cascade(3, &[(0, 0.0), (1, 1.0), (2, 2.0)]);
        assert_eq!(order_accuracy(&t, &c), Some(1.0));
        let c = cascade(3, &[(0, 0.0), (1, 1.0), (2, 0.5)]);
        assert_eq!(order_accuracy(&t, &c), Some(0.5));

        let c = cascade(2, &[(0, 0.0)]);
        assert_eq!(order_accuracy(&tree(0, &[(0, 1)]), &c), Some(0.0));
        assert_eq!(order_accuracy(&ReconstructedTree::single(0), &c), None);
    }

    #[test]
    fn record() {
        let c = cascade(3, &[(0, 0.0), (1, 1.0), (2, 2.0)]);
        let r = evaluate(&tree(0, &[(0, 1)]), &c, Some(1.5)).unwrap();
        assert_eq!(r.tree_size, 1);
        assert_eq!(r.precision, 1.0);
        assert!((r.recall - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.order_accuracy, Some(1.0));
        assert_eq!(r.runtime_ms, Some(1.5));
    }
}
