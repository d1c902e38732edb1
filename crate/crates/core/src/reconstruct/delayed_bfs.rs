use std::collections::{BTreeSet, VecDeque};

use super::tree::PartialTree;
use super::{pick_root, ReconstructedTree};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, ReportSet};

/// Order in which [`delayed_bfs_traced`] released reported nodes for
/// expansion, alongside the pruned tree.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedBfsTrace {
    pub tree: ReconstructedTree,
    pub released: Vec<NodeId>,
}

/// Single BFS from the root in which the search below a reported node is
/// held back until every reported node with a smaller timestamp has been
/// released. Branches that end in unreported nodes are pruned afterwards.
pub fn delayed_bfs(g: &Graph, reports: &ReportSet) -> Result<ReconstructedTree> {
    delayed_bfs_traced(g, reports).map(|t| t.tree)
}

pub fn delayed_bfs_traced(g: &Graph, reports: &ReportSet) -> Result<DelayedBfsTrace> {
    let root = pick_root(reports);
    let n = g.node_count();

    // distinct timestamps in order, and each terminal's slot
    let chrono = reports.chronological();
    let mut slot = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = Vec::new();
    let mut last: Option<f64> = None;
    for &u in chrono {
        let t = reports.time_of(u).unwrap();
        if last != Some(t) {
            remaining.push(0);
            last = Some(t);
        }
        slot[u] = remaining.len() - 1;
        *remaining.last_mut().unwrap() += 1;
    }
    let advance = |remaining: &[usize], mut cur: usize| {
        while cur < remaining.len() && remaining[cur] == 0 {
            cur += 1;
        }
        cur
    };

    let mut tree = PartialTree::new(n, root);
    let mut queue = VecDeque::from([root]);
    let mut delayed: BTreeSet<(usize, NodeId)> = BTreeSet::new();
    let mut released = vec![root];
    remaining[slot[root]] -= 1;
    let mut current = advance(&remaining, 0);

    let expand = |v: NodeId, tree: &mut PartialTree, queue: &mut VecDeque<NodeId>| {
        for w in g.neighbors(v) {
            if !tree.contains(w) {
                tree.add(w, v);
                queue.push_back(w);
            }
        }
    };

    while let Some(v) = queue.pop_front() {
        // the root starts released regardless of ties at t0
        if v == root || !reports.is_reported(v) {
            expand(v, &mut tree, &mut queue);
        } else {
            delayed.insert((slot[v], v));
        }
        while let Some(&(s, w)) = delayed.first() {
            if s != current {
                break;
            }
            delayed.pop_first();
            expand(w, &mut tree, &mut queue);
            released.push(w);
            remaining[s] -= 1;
            current = advance(&remaining, current);
        }
    }

    if let Some(&missing) = chrono.iter().find(|&&u| !tree.contains(u)) {
        return Err(Error::Infeasible(missing));
    }
    let tree = tree.prune_into_tree(|v| reports.is_reported(v));
    Ok(DelayedBfsTrace { tree, released })
}
