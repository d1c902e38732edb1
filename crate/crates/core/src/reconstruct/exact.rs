//! Exhaustive solvers for small instances, used as reference answers.

use super::tree::PartialTree;
use super::{pick_root, ReconstructedTree};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, ReportSet};

/// Default node-count ceiling for the exhaustive solvers.
pub const DEFAULT_EXACT_LIMIT: usize = 14;

/// Calls `visit` with every `size`-subset of `0..count` as a bitmask, in
/// increasing numeric order, until it returns true.
fn any_subset<F: FnMut(u64) -> bool>(count: usize, size: usize, mut visit: F) -> bool {
    if size > count {
        return false;
    }
    if size == 0 {
        return visit(0);
    }
    let limit = 1u64 << count;
    let mut mask = (1u64 << size) - 1;
    while mask < limit {
        if visit(mask) {
            return true;
        }
        // next mask with the same popcount
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    false
}

fn check_limit(g: &Graph, limit: usize) -> Result<()> {
    let limit = limit.min(63);
    if g.node_count() > limit {
        Err(Error::TooLarge {
            node_count: g.node_count(),
            limit,
        })
    } else {
        Ok(())
    }
}

/// Membership over all nodes: required nodes plus the optional ones picked
/// by `mask`.
fn members(node_count: usize, required: &[NodeId], optional: &[NodeId], mask: u64) -> Vec<bool> {
    let mut member = vec![false; node_count];
    for &v in required {
        member[v] = true;
    }
    for (bit, &v) in optional.iter().enumerate() {
        if mask >> bit & 1 == 1 {
            member[v] = true;
        }
    }
    member
}

struct OrderedReach {
    settled: Vec<bool>,
    /// `(child, parent)` in settling order, so parents always come first.
    links: Vec<(NodeId, NodeId)>,
}

/// Bottleneck search restricted to `member`. A node's label is the smallest
/// achievable latest-report timestamp over root paths whose reports appear
/// in non-decreasing order; a reported node may only be entered from a
/// label not exceeding its own timestamp.
fn ordered_reach(g: &Graph, reports: &ReportSet, root: NodeId, member: &[bool]) -> OrderedReach {
    let n = g.node_count();
    let mut label = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut settled = vec![false; n];
    let mut links = Vec::new();
    label[root] = reports.time_of(root).unwrap();
    loop {
        let next = (0..n)
            .filter(|&v| member[v] && !settled[v] && label[v].is_finite())
            .min_by(|&a, &b| label[a].total_cmp(&label[b]).then(a.cmp(&b)));
        let Some(x) = next else { break };
        settled[x] = true;
        if x != root {
            links.push((x, parent[x]));
        }
        for y in g.neighbors(x) {
            if !member[y] || settled[y] {
                continue;
            }
            let candidate = match reports.time_of(y) {
                Some(ty) if label[x] <= ty => ty,
                Some(_) => continue,
                None => label[x],
            };
            if candidate < label[y] {
                label[y] = candidate;
                parent[y] = x;
            }
        }
    }
    OrderedReach { settled, links }
}

/// Minimum-size order-respecting tree rooted at the earliest report,
/// found by trying node sets containing every reported node in increasing
/// size. Refuses graphs with more than `limit` nodes.
pub fn exact_ordered_steiner(
    g: &Graph,
    reports: &ReportSet,
    limit: usize,
) -> Result<ReconstructedTree> {
    check_limit(g, limit)?;
    let root = pick_root(reports);
    let required = reports.chronological();
    let optional: Vec<NodeId> = (0..g.node_count())
        .filter(|&v| !reports.is_reported(v))
        .collect();
    let spans = |reach: &OrderedReach| required.iter().all(|&u| reach.settled[u]);

    let full = ordered_reach(g, reports, root, &vec![true; g.node_count()]);
    if let Some(&missing) = required.iter().find(|&&u| !full.settled[u]) {
        return Err(Error::Infeasible(missing));
    }

    let mut best = None;
    for extra in 0..=optional.len() {
        let hit = any_subset(optional.len(), extra, |mask| {
            let reach = ordered_reach(
                g,
                reports,
                root,
                &members(g.node_count(), required, &optional, mask),
            );
            let ok = spans(&reach);
            if ok {
                best = Some(reach);
            }
            ok
        });
        if hit {
            break;
        }
    }
    let reach = best.unwrap_or(full);
    let mut tree = PartialTree::new(g.node_count(), root);
    for (child, parent) in reach.links {
        tree.add(child, parent);
    }
    Ok(tree.prune_into_tree(|v| reports.is_reported(v)))
}

fn reachable(g: &Graph, start: NodeId, member: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(x) = stack.pop() {
        for y in g.neighbors(x) {
            if member[y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Minimum number of edges in any tree of `g` containing all `terminals`,
/// ignoring timestamps. Refuses graphs with more than `limit` nodes.
pub fn exact_unordered_steiner(g: &Graph, terminals: &[NodeId], limit: usize) -> Result<usize> {
    check_limit(g, limit)?;
    for &t in terminals {
        g.check_node(t)?;
    }
    let mut required: Vec<NodeId> = terminals.to_vec();
    required.sort_unstable();
    required.dedup();
    if required.len() <= 1 {
        return Ok(0);
    }
    let full = reachable(g, required[0], &vec![true; g.node_count()]);
    if let Some(&missing) = required.iter().find(|&&t| !full[t]) {
        return Err(Error::Infeasible(missing));
    }
    let optional: Vec<NodeId> = (0..g.node_count())
        .filter(|v| required.binary_search(v).is_err())
        .collect();
    for extra in 0..=optional.len() {
        let hit = any_subset(optional.len(), extra, |mask| {
            let seen = reachable(
                g,
                required[0],
                &members(g.node_count(), &required, &optional, mask),
            );
            required.iter().all(|&t| seen[t])
        });
        if hit {
            return Ok(required.len() + extra - 1);
        }
    }
    unreachable!("the full node set connects the terminals")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gadget() -> (Graph, ReportSet) {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 2), (4, 1)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (2, 1.0), (1, 2.0)], 5).unwrap();
        (g, r)
    }

    #[test]
    fn subsets_enumerate_combinations() {
        let mut seen = Vec::new();
        any_subset(4, 2, |m| {
            seen.push(m);
            false
        });
        assert_eq!(seen, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert!(!any_subset(2, 3, |_| true));
    }

    #[test]
    fn gadget_optimum() {
        let (g, r) = gadget();
        let t = exact_ordered_steiner(&g, &r, DEFAULT_EXACT_LIMIT).unwrap();
        assert_eq!(t.size(), 4);
        assert_eq!(t.check_feasible(&g, &r), Ok(()));
        assert_eq!(
            exact_unordered_steiner(&g, &[0, 1, 2], DEFAULT_EXACT_LIMIT).unwrap(),
            2
        );
    }

    #[test]
    fn connected_reports_meet_lower_bound() {
        // path 0-1-2-3 fully reported in order
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (1, 1.0), (2, 2.0), (3, 3.0)], 4).unwrap();
        assert_eq!(exact_ordered_steiner(&g, &r, 14).unwrap().size(), 3);
        assert_eq!(exact_unordered_steiner(&g, &[0, 1, 2, 3], 14).unwrap(), 3);
    }

    #[test]
    fn single_terminal() {
        let (g, _) = gadget();
        let r = ReportSet::new(vec![(3, 1.0)], 5).unwrap();
        assert_eq!(exact_ordered_steiner(&g, &r, 14).unwrap().size(), 0);
        assert_eq!(exact_unordered_steiner(&g, &[3], 14).unwrap(), 0);
    }

    #[test]
    fn refuses_large_graphs() {
        let g = Graph::from_edges(20, (1..20).map(|i| (i - 1, i))).unwrap();
        let r = ReportSet::new(vec![(0, 0.0)], 20).unwrap();
        assert!(matches!(
            exact_ordered_steiner(&g, &r, 14),
            Err(Error::TooLarge {
                node_count: 20,
                limit: 14
            })
        ));
        assert!(exact_unordered_steiner(&g, &[0], 14).is_err());
    }

    #[test]
    fn infeasible() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let r = ReportSet::new(vec![(0, 0.0), (1, 5.0), (2, 1.0)], 3).unwrap();
        assert!(matches!(
            exact_ordered_steiner(&g, &r, 14),
            Err(Error::Infeasible(2))
        ));
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            exact_unordered_steiner(&g, &[0, 3], 14),
            Err(Error::Infeasible(3))
        ));
    }
}
