use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::tree::PartialTree;
use super::{pick_root, ReconstructedTree};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph, NodeId, ReportSet};

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Classic metric-closure Steiner 2-approximation that ignores timestamps:
/// minimum spanning tree over hop distances between reported nodes,
/// expanded to graph paths, re-spanned from the root, and stripped of
/// unreported leaves. Rooted at the earliest report but not guaranteed to
/// respect report order.
pub fn steiner_baseline(g: &Graph, reports: &ReportSet) -> Result<ReconstructedTree> {
    let root = pick_root(reports);
    let terminals = reports.chronological();
    let k = terminals.len();
    if k == 1 {
        return Ok(ReconstructedTree::single(root));
    }

    let mut scratch = BfsScratch::new(g.node_count());
    let mut closure_edges = Vec::with_capacity(k * (k - 1) / 2);
    for (i, &u) in terminals.iter().enumerate() {
        scratch.run(g, u, |_| true, None);
        for (j, &v) in terminals.iter().enumerate().skip(i + 1) {
            match scratch.dist(v) {
                Some(d) => closure_edges.push((d, u.min(v), u.max(v), i, j)),
                None => return Err(Error::Infeasible(v)),
            }
        }
    }
    closure_edges.sort_unstable();

    let mut uf: Vec<usize> = (0..k).collect();
    let mut mst = Vec::with_capacity(k - 1);
    for &(_, a, b, i, j) in &closure_edges {
        let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
        if ri != rj {
            uf[ri] = rj;
            mst.push((a, b));
            if mst.len() == k - 1 {
                break;
            }
        }
    }

    let mut adjacency: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for (a, b) in mst {
        scratch.run(g, a, |_| true, Some(b));
        let path = scratch.path_to(b).expect("terminal pair was connected");
        for w in path.windows(2) {
            adjacency.entry(w[0]).or_default().insert(w[1]);
            adjacency.entry(w[1]).or_default().insert(w[0]);
        }
    }

    let mut tree = PartialTree::new(g.node_count(), root);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in adjacency.get(&x).into_iter().flatten() {
            if !tree.contains(y) {
                tree.add(y, x);
                queue.push_back(y);
            }
        }
    }
    Ok(tree.prune_into_tree(|v| reports.is_reported(v)))
}
