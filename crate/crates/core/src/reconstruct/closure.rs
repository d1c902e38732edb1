use std::collections::{BTreeMap, HashMap};

use super::arborescence::{min_arborescence, Arc};
use super::tree::PartialTree;
use super::{pick_root, ReconstructedTree};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph, NodeId, Path, ReportSet};

/// One arc of the closure graph together with the graph path it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureArc {
    pub weight: u64,
    pub path: Path,
    /// True when no terminal-avoiding path existed and the path may pass
    /// through reported nodes sharing the head's timestamp.
    pub fallback: bool,
}

/// Directed graph over the reported nodes: arc `(u, v)` exists when
/// `t(u) <= t(v)`, `v` is not the root, and a suitable path connects them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureGraph {
    terminals: Vec<NodeId>,
    arcs: BTreeMap<(NodeId, NodeId), ClosureArc>,
}

impl ClosureGraph {
    /// Terminals in chronological order.
    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn arc(&self, from: NodeId, to: NodeId) -> Option<&ClosureArc> {
        self.arcs.get(&(from, to))
    }

    /// Arcs in `(from, to)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId, &ClosureArc)> {
        self.arcs.iter().map(|(&(u, v), a)| (u, v, a))
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
}

/// Spanning arborescence of a [`ClosureGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    pub root: NodeId,
    pub parent: BTreeMap<NodeId, NodeId>,
    pub total_weight: u64,
}

/// Builds the closure graph over the reported nodes.
///
/// Arc weights are excluding shortest-path lengths. When a pair has no
/// excluding path the extended excluding path is used instead and the arc
/// is flagged. Fails when some terminal cannot be reached from `root`.
pub fn build_closure_graph(g: &Graph, reports: &ReportSet, root: NodeId) -> Result<ClosureGraph> {
    let t_root = reports.require(root)?;
    if t_root != reports.t0() {
        return Err(Error::InvalidParameter(format!(
            "root {root} does not carry the earliest timestamp"
        )));
    }
    let terminals = reports.chronological().to_vec();
    let time = |v: NodeId| reports.time_of(v).unwrap();
    let mut arcs = BTreeMap::new();
    let mut scratch = BfsScratch::new(g.node_count());

    for &u in &terminals {
        scratch.run(g, u, |x| !reports.is_reported(x), None);
        for &v in &terminals {
            if v == u || v == root || time(u) > time(v) {
                continue;
            }
            if let Some(path) = scratch.path_to(v) {
                let weight = (path.len() - 1) as u64;
                arcs.insert(
                    (u, v),
                    ClosureArc {
                        weight,
                        path,
                        fallback: false,
                    },
                );
            }
        }
    }

    // Fill missing pairs from one extended search per head.
    for &v in &terminals {
        if v == root {
            continue;
        }
        let missing: Vec<NodeId> = terminals
            .iter()
            .copied()
            .filter(|&u| u != v && time(u) <= time(v) && !arcs.contains_key(&(u, v)))
            .collect();
        if missing.is_empty() {
            continue;
        }
        let tv = time(v);
        scratch.run(g, v, |x| reports.time_of(x).map_or(true, |t| t == tv), None);
        for u in missing {
            if let Some(path) = scratch.chain_from(u) {
                arcs.insert(
                    (u, v),
                    ClosureArc {
                        weight: (path.len() - 1) as u64,
                        path,
                        fallback: true,
                    },
                );
            }
        }
    }

    let h = ClosureGraph { terminals, arcs };
    if let Some(v) = unreachable_terminal(&h, root) {
        return Err(Error::Infeasible(v));
    }
    Ok(h)
}

fn unreachable_terminal(h: &ClosureGraph, root: NodeId) -> Option<NodeId> {
    let mut out: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    for (u, v, _) in h.arcs() {
        out.entry(u).or_default().push(v);
    }
    let mut seen: HashMap<NodeId, bool> = h.terminals.iter().map(|&t| (t, false)).collect();
    let mut stack = vec![root];
    seen.insert(root, true);
    while let Some(x) = stack.pop() {
        for &y in out.get(&x).into_iter().flatten() {
            if !seen[&y] {
                seen.insert(y, true);
                stack.push(y);
            }
        }
    }
    h.terminals.iter().copied().find(|t| !seen[t])
}

/// Minimum-weight spanning arborescence of `h` rooted at `root`.
pub fn directed_mst(h: &ClosureGraph, root: NodeId) -> Result<Arborescence> {
    let index: HashMap<NodeId, usize> = h
        .terminals
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, i))
        .collect();
    let root_index = *index.get(&root).ok_or(Error::NotReported(root))?;
    let arcs: Vec<Arc> = h
        .arcs()
        .map(|(u, v, a)| Arc {
            from: index[&u],
            to: index[&v],
            weight: a.weight,
        })
        .collect();
    let picked = min_arborescence(h.terminals.len(), root_index, &arcs).map_err(|e| match e {
        Error::Infeasible(i) => Error::Infeasible(h.terminals[i]),
        other => other,
    })?;
    let mut parent = BTreeMap::new();
    let mut total_weight = 0;
    for i in picked {
        let a = arcs[i];
        parent.insert(h.terminals[a.to], h.terminals[a.from]);
        total_weight += a.weight;
    }
    Ok(Arborescence {
        root,
        parent,
        total_weight,
    })
}

/// Closure-based reconstruction.
///
/// Builds the closure graph, takes its minimum arborescence `A`, then adds
/// terminals in chronological order: each one is connected to its nearest
/// `A`-ancestor already in the tree through the stored paths along `A`,
/// cut at the last point where that walk touches the current tree.
pub fn closure(g: &Graph, reports: &ReportSet) -> Result<ReconstructedTree> {
    let root = pick_root(reports);
    if reports.len() == 1 {
        return Ok(ReconstructedTree::single(root));
    }
    let h = build_closure_graph(g, reports, root)?;
    let a = directed_mst(&h, root)?;

    let mut tree = PartialTree::new(g.node_count(), root);
    let mut chain = Vec::new();
    let mut walk = Vec::new();
    let mut segment = Vec::new();
    let mut position: HashMap<NodeId, usize> = HashMap::new();

    for &u in reports.chronological() {
        if tree.contains(u) {
            continue;
        }
        chain.clear();
        chain.push(u);
        let mut x = u;
        while !tree.contains(x) {
            x = a.parent[&x];
            chain.push(x);
        }
        chain.reverse();

        walk.clear();
        walk.push(chain[0]);
        for pair in chain.windows(2) {
            let arc = h
                .arc(pair[0], pair[1])
                .expect("arborescence arc missing from closure");
            walk.extend_from_slice(&arc.path[1..]);
        }

        // Scan back from u to the first tree node, cutting out any loops.
        segment.clear();
        position.clear();
        for &x in walk.iter().rev() {
            if let Some(&i) = position.get(&x) {
                for dropped in segment.drain(i + 1..) {
                    position.remove(&dropped);
                }
                continue;
            }
            position.insert(x, segment.len());
            segment.push(x);
            if tree.contains(x) {
                break;
            }
        }
        segment.reverse();
        tree.attach_path(&segment);
    }
    Ok(tree.into_tree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub(crate) fn gadget() -> (Graph, ReportSet) {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2), (4, 1)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (2, 1.0), (1, 2.0)], 5).unwrap();
        (g, r)
    }

    #[test]
    fn single_arc() {
        let g = path_graph(3);
        let r = ReportSet::new(vec![(0, 0.0), (2, 1.0)], 3).unwrap();
        let h = build_closure_graph(&g, &r, 0).unwrap();
        assert_eq!(h.arc_count(), 1);
        let arc = h.arc(0, 2).unwrap();
        assert_eq!((arc.weight, arc.fallback), (2, false));
        assert_eq!(arc.path, vec![0, 1, 2]);
    }

    #[test]
    fn equal_timestamps_drop_arcs_into_root() {
        let g = path_graph(3);
        let r = ReportSet::new(vec![(0, 0.0), (2, 0.0)], 3).unwrap();
        let h = build_closure_graph(&g, &r, 0).unwrap();
        assert_eq!(h.arc_count(), 1);
        assert_eq!(h.arc(0, 2).unwrap().weight, 2);
        assert!(h.arc(2, 0).is_none());
    }

    #[test]
    fn gadget_arc_weights() {
        let (g, r) = gadget();
        let h = build_closure_graph(&g, &r, 0).unwrap();
        // excluding distances avoid the third terminal: d(0,2)=3 via 3-4,
        // d(0,1)=1, d(2,1)=1
        let weights: Vec<(NodeId, NodeId, u64)> =
            h.arcs().map(|(u, v, a)| (u, v, a.weight)).collect();
        assert_eq!(weights, vec![(0, 1, 1), (0, 2, 3), (2, 1, 1)]);
        assert!(h.arcs().all(|(_, _, a)| !a.fallback));
    }

    #[test]
    fn fallback_arcs_are_flagged() {
        // 0 - 1 - 2 with all three reported, 1 and 2 share a timestamp
        let g = path_graph(3);
        let r = ReportSet::new(vec![(0, 0.0), (1, 1.0), (2, 1.0)], 3).unwrap();
        let h = build_closure_graph(&g, &r, 0).unwrap();
        let arc = h.arc(0, 2).unwrap();
        assert!(arc.fallback);
        assert_eq!(arc.path, vec![0, 1, 2]);
        assert!(!h.arc(0, 1).unwrap().fallback);
    }

    #[test]
    fn infeasible_terminal_named() {
        // only route to 2 passes 1, which is reported later
        let g = path_graph(3);
        let r = ReportSet::new(vec![(0, 0.0), (1, 2.0), (2, 1.0)], 3).unwrap();
        assert!(matches!(
            build_closure_graph(&g, &r, 0),
            Err(Error::Infeasible(2))
        ));
        assert!(matches!(closure(&g, &r), Err(Error::Infeasible(2))));
    }

    #[test]
    fn arborescence_on_gadget() {
        let (g, r) = gadget();
        let h = build_closure_graph(&g, &r, 0).unwrap();
        let a = directed_mst(&h, 0).unwrap();
        // 0->1 (1) + 1 needs nothing else; 2 enters from 0 (3): total 4
        assert_eq!(a.total_weight, 4);
        assert_eq!(a.parent.get(&1), Some(&0));
        assert_eq!(a.parent.get(&2), Some(&0));
    }

    #[test]
    fn gadget_tree() {
        let (g, r) = gadget();
        let t = closure(&g, &r).unwrap();
        assert_eq!(t.size(), 4);
        let mut edges: Vec<(NodeId, NodeId)> =
            t.edges().map(|(p, c)| (p.min(c), p.max(c))).collect();
        edges.sort_unstable();
        // A hangs 1 directly off the root (weight 1), so 1 attaches by 0-1
        assert_eq!(edges, vec![(0, 1), (0, 3), (2, 4), (3, 4)]);
        assert_eq!(t.check_feasible(&g, &r), Ok(()));
    }

    #[test]
    fn trivial_cases() {
        let g = path_graph(5);
        let r = ReportSet::new(vec![(3, 1.0)], 5).unwrap();
        assert_eq!(closure(&g, &r).unwrap(), ReconstructedTree::single(3));
        let r = ReportSet::new(vec![(0, 0.0), (4, 1.0)], 5).unwrap();
        let t = closure(&g, &r).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.parent_of(4), Some(3));
    }
}
