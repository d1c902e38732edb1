use std::collections::VecDeque;

use super::{pick_root, ReconstructedTree};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, ReportSet};

// Marker labels; reported nodes outside the tree carry their
// distinct-timestamp rank instead.
const FREE: u32 = u32::MAX;
const IN_TREE: u32 = u32::MAX - 1;
const NONE: u32 = u32::MAX;

/// Everything greedy reads about a node, packed so that scanning an edge
/// costs one memory access. `parent` is the search parent for nodes outside
/// the tree and the tree parent for nodes inside it.
#[derive(Clone, Copy)]
struct Node {
    label: u32,
    stamp: u32,
    dist: u32,
    parent: u32,
}

struct Search {
    nodes: Vec<Node>,
    generation: u32,
    queue: VecDeque<u32>,
}

impl Search {
    /// BFS outward from terminal `u` through nodes an extended excluding
    /// path may use, never entering the tree. Returns the path from the
    /// smallest-id tree node at the minimum distance back to `u`.
    fn nearest_tree_path(&mut self, g: &Graph, u: NodeId) -> Option<Vec<NodeId>> {
        self.generation += 1;
        let generation = self.generation;
        self.queue.clear();
        let own = self.nodes[u].label;
        self.nodes[u] = Node {
            stamp: generation,
            dist: 0,
            parent: NONE,
            ..self.nodes[u]
        };
        self.queue.push_back(u as u32);
        let mut best: Option<(u32, NodeId, NodeId)> = None;
        while let Some(x) = self.queue.pop_front() {
            let x = x as usize;
            let dist = self.nodes[x].dist;
            if best.is_some_and(|(d, _, _)| dist >= d) {
                break;
            }
            for y in g.neighbors(x) {
                let node = &mut self.nodes[y];
                if node.stamp == generation {
                    continue;
                }
                node.stamp = generation;
                if node.label == IN_TREE {
                    if best.map_or(true, |(_, z, _)| y < z) {
                        best = Some((dist + 1, y, x));
                    }
                } else if node.label == FREE || node.label == own {
                    node.dist = dist + 1;
                    node.parent = x as u32;
                    self.queue.push_back(y as u32);
                }
            }
        }
        let (_, anchor, mut x) = best?;
        let mut path = vec![anchor, x];
        while self.nodes[x].parent != NONE {
            x = self.nodes[x].parent as usize;
            path.push(x);
        }
        Some(path)
    }
}

/// Greedy reconstruction: terminals are added in chronological order, each
/// through the shortest extended excluding path from any node already in
/// the tree. Equal-length candidates go to the smallest attaching node id.
pub fn greedy(g: &Graph, reports: &ReportSet) -> Result<ReconstructedTree> {
    if g.node_count() >= IN_TREE as usize {
        return Err(Error::TooLarge {
            node_count: g.node_count(),
            limit: IN_TREE as usize - 1,
        });
    }
    let root = pick_root(reports);
    let blank = Node {
        label: FREE,
        stamp: 0,
        dist: 0,
        parent: NONE,
    };
    let mut search = Search {
        nodes: vec![blank; g.node_count()],
        generation: 0,
        queue: VecDeque::new(),
    };

    let mut rank = 0u32;
    let mut last = None;
    for &u in reports.chronological() {
        let t = reports.time_of(u);
        if last.is_some() && t != last {
            rank += 1;
        }
        last = t;
        search.nodes[u].label = rank;
    }
    search.nodes[root].label = IN_TREE;

    let mut members = Vec::new();
    for &u in reports.chronological() {
        if search.nodes[u].label == IN_TREE {
            continue;
        }
        let path = search.nearest_tree_path(g, u).ok_or(Error::Infeasible(u))?;
        for w in path.windows(2) {
            let node = &mut search.nodes[w[1]];
            node.label = IN_TREE;
            node.parent = w[0] as u32;
            members.push(w[1]);
        }
    }
    members.sort_unstable();
    let parent = members
        .into_iter()
        .map(|v| (v, search.nodes[v].parent as NodeId))
        .collect();
    Ok(ReconstructedTree::new(root, parent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn gadget_size() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2), (4, 1)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (2, 1.0), (1, 2.0)], 5).unwrap();
        let t = greedy(&g, &r).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.parent_of(2), Some(4));
        assert_eq!(t.parent_of(4), Some(3));
        assert_eq!(t.check_feasible(&g, &r), Ok(()));
    }

    #[test]
    fn cycle_paths() {
        let g = cycle(6);
        let r = ReportSet::new(vec![(0, 0.0), (2, 1.0), (4, 2.0)], 6).unwrap();
        let t = greedy(&g, &r).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.parent_of(2), Some(1));
        // 4 is two hops from both 0 and 2; the smaller anchor wins
        assert_eq!(t.parent_of(4), Some(5));
        assert_eq!(t.parent_of(5), Some(0));
    }

    #[test]
    fn single_terminal() {
        let r = ReportSet::new(vec![(3, 0.0)], 6).unwrap();
        assert_eq!(greedy(&cycle(6), &r).unwrap(), ReconstructedTree::single(3));
    }

    #[test]
    fn tie_goes_to_smallest_anchor() {
        // 0-1, 0-2, 1-3, 2-3: terminal 3 is two hops from 0 either way,
        // but 1 and 2 are tree nodes after reporting them first
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (2, 1.0), (1, 1.0), (3, 2.0)], 4).unwrap();
        let t = greedy(&g, &r).unwrap();
        assert_eq!(t.parent_of(3), Some(1));
    }

    #[test]
    fn blocked_by_later_terminal() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (1, 5.0), (2, 1.0)], 3).unwrap();
        assert!(matches!(greedy(&g, &r), Err(Error::Infeasible(2))));
    }
}
