//! Synthetic graph generators.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Barabási–Albert preferential attachment graph.
///
/// Starts from `attach` isolated nodes. Each later node links to `attach`
/// distinct existing nodes chosen with probability proportional to degree
/// (the first new node links to all initial ones), giving
/// `attach * (nodes - attach)` edges.
pub fn generate_ba_graph<R: Rng + ?Sized>(
    nodes: usize,
    attach: usize,
    rng: &mut R,
) -> Result<Graph> {
    if attach == 0 || nodes <= attach {
        return Err(Error::InvalidParameter(format!(
            "BA graph needs attach >= 1 and nodes > attach (got nodes={nodes}, attach={attach})"
        )));
    }
    let mut edges = Vec::with_capacity(attach * (nodes - attach));
    // every edge endpoint, so a uniform draw is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * attach * (nodes - attach));
    let mut targets: Vec<usize> = (0..attach).collect();
    let mut chosen = vec![false; nodes];
    for source in attach..nodes {
        for &t in &targets {
            edges.push((t, source));
            endpoints.push(t);
            endpoints.push(source);
        }
        targets.clear();
        while targets.len() < attach {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen[t] {
                chosen[t] = true;
                targets.push(t);
            }
        }
        for &t in &targets {
            chosen[t] = false;
        }
    }
    Graph::from_edges(nodes, edges)
}
