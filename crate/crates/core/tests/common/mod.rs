//! Instance generators and independent reference checks shared by the
//! integration and acceptance suites. Nothing here calls the library's own
//! checkers or solvers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use ordered_steiner::simulate::{simulate_si, simulate_sp, Cascade};
use ordered_steiner::{Graph, ReconstructedTree, ReportSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a random spanning tree plus each remaining
/// pair with probability `extra`.
pub fn random_connected<R: Rng>(n: usize, extra: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(extra) {
                edges.insert((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// SP or SI cascade from a random source up to a random stop fraction.
pub fn random_cascade<R: Rng>(g: &Graph, rng: &mut R) -> Cascade {
    let source = rng.gen_range(0..g.node_count());
    let stop = rng.gen_range(0.3..=1.0);
    if rng.gen_bool(0.5) {
        simulate_sp(g, source, stop).unwrap()
    } else {
        let p = rng.gen_range(0.2..=0.9);
        simulate_si(g, source, p, stop, rng).unwrap()
    }
}

/// Exactly `k` reports drawn uniformly from the infected nodes.
pub fn pick_reports<R: Rng>(c: &Cascade, k: usize, rng: &mut R) -> ReportSet {
    let infected: Vec<usize> = c.infected().collect();
    let chosen: Vec<usize> = infected
        .choose_multiple(rng, k.min(infected.len()))
        .copied()
        .collect();
    let entries = chosen
        .iter()
        .map(|&v| (v, c.infection_time(v).unwrap()))
        .collect();
    ReportSet::new(entries, c.node_count()).unwrap()
}

/// Bernoulli(q) reports, redrawn until non-empty.
pub fn bernoulli_reports<R: Rng>(c: &Cascade, q: f64, rng: &mut R) -> ReportSet {
    loop {
        let entries: Vec<(usize, f64)> = c
            .infected()
            .filter(|_| rng.gen_bool(q))
            .map(|v| (v, c.infection_time(v).unwrap()))
            .collect();
        if !entries.is_empty() {
            return ReportSet::new(entries, c.node_count()).unwrap();
        }
    }
}

/// Earliest report, smallest id among ties.
pub fn expected_root(r: &ReportSet) -> usize {
    r.entries()
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .unwrap()
        .0
}

/// Independent feasibility check. Returns a description of the first
/// problem found.
pub fn violation(t: &ReconstructedTree, g: &Graph, r: &ReportSet) -> Option<String> {
    let root = expected_root(r);
    if t.root() != root {
        return Some(format!("root {} instead of {root}", t.root()));
    }
    let edges: Vec<(usize, usize)> = t.edges().collect();
    if edges.len() + 1 != t.nodes().len() {
        return Some("edge count is not nodes - 1".into());
    }
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(p, c) in &edges {
        if !g.neighbors(p).any(|w| w == c) {
            return Some(format!("({p}, {c}) is not a graph edge"));
        }
        children.entry(p).or_default().push(c);
    }
    // BFS from the root carrying the largest reported time on the path
    let mut reached = BTreeSet::from([root]);
    let mut queue = VecDeque::from([(root, f64::NEG_INFINITY)]);
    while let Some((x, latest)) = queue.pop_front() {
        let mut carried = latest;
        if let Some(tx) = r.time_of(x) {
            if tx < latest {
                return Some(format!("node {x} (t={tx}) below a report at t={latest}"));
            }
            carried = tx;
        }
        for &c in children.get(&x).into_iter().flatten() {
            if !reached.insert(c) {
                return Some(format!("node {c} reached twice"));
            }
            queue.push_back((c, carried));
        }
    }
    if reached.len() != t.nodes().len() {
        return Some("tree is not connected to its root".into());
    }
    if let Some(&(u, _)) = r.entries().iter().find(|(u, _)| !reached.contains(u)) {
        return Some(format!("reported node {u} not spanned"));
    }
    None
}

/// Size of the smallest order-respecting tree, by trying every edge subset
/// in increasing size. Only for very small graphs.
pub fn brute_force_ordered(g: &Graph, r: &ReportSet) -> Option<usize> {
    let root = expected_root(r);
    let terminals: Vec<usize> = r.entries().iter().map(|e| e.0).collect();
    if terminals.len() == 1 {
        return Some(0);
    }
    smallest_subset(g, |chosen| match orient(root, chosen) {
        Some(t) => terminals.iter().all(|&u| t.contains(u)) && violation(&t, g, r).is_none(),
        None => false,
    })
}

/// Orients an edge set away from `root` if it forms a tree containing it.
fn orient(root: usize, edges: &[(usize, usize)]) -> Option<ReconstructedTree> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if !adj.contains_key(&root) || adj.len() != edges.len() + 1 {
        return None;
    }
    let mut parent = BTreeMap::new();
    let mut seen = BTreeSet::from([root]);
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if seen.insert(y) {
                parent.insert(y, x);
                stack.push(y);
            }
        }
    }
    (seen.len() == adj.len()).then(|| ReconstructedTree::new(root, parent))
}

/// Smallest tree containing the terminals, ignoring order, by edge subsets.
pub fn brute_force_unordered(g: &Graph, terminals: &[usize]) -> Option<usize> {
    if terminals.len() <= 1 {
        return Some(0);
    }
    smallest_subset(g, |chosen| match orient(terminals[0], chosen) {
        Some(t) => terminals.iter().all(|&u| t.contains(u)),
        None => false,
    })
}

/// Fewest edges of any subset accepted by `ok`.
fn smallest_subset<F: Fn(&[(usize, usize)]) -> bool>(g: &Graph, ok: F) -> Option<usize> {
    let edges = g.edges();
    let m = edges.len();
    assert!(m <= 20, "brute force over {m} edges");
    let mut best: Option<usize> = None;
    let mut chosen = Vec::with_capacity(m);
    for mask in 1u32..(1 << m) {
        let size = mask.count_ones() as usize;
        if size >= g.node_count() || best.is_some_and(|b| size >= b) {
            continue;
        }
        chosen.clear();
        chosen.extend((0..m).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]));
        if ok(&chosen) {
            best = Some(size);
        }
    }
    best
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
