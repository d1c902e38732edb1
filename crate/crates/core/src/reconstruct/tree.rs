use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, ReportSet};

/// Rooted tree over a subset of graph nodes, stored as child → parent links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructedTree {
    root: NodeId,
    parent: BTreeMap<NodeId, NodeId>,
}

/// Reason a tree fails the structural or ordering requirements.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeViolation {
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(NodeId, NodeId),
    #[error("node {0} does not lead back to the root")]
    Detached(NodeId),
    #[error("reported node {0} is not in the tree")]
    Unspanned(NodeId),
    #[error("tree is rooted at {found}, expected {expected}")]
    WrongRoot { expected: NodeId, found: NodeId },
    #[error("path to reported node {node} passes reported node {earlier} with a later timestamp")]
    OrderViolation { node: NodeId, earlier: NodeId },
}

impl ReconstructedTree {
    pub fn new(root: NodeId, parent: BTreeMap<NodeId, NodeId>) -> Self {
        ReconstructedTree { root, parent }
    }

    pub fn single(root: NodeId) -> Self {
        ReconstructedTree {
            root,
            parent: BTreeMap::new(),
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent_of(&self, node: NodeId) -> Option<NodeId> {
        self.parent.get(&node).copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        node == self.root || self.parent.contains_key(&node)
    }

    /// All tree nodes, ascending.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = std::iter::once(self.root)
            .chain(self.parent.keys().copied())
            .collect();
        nodes.sort_unstable();
        nodes
    }

    pub fn node_count(&self) -> usize {
        self.parent.len() + 1
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.parent.len()
    }

    /// `(parent, child)` pairs in ascending child order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.parent.iter().map(|(&c, &p)| (p, c))
    }

    fn children(&self) -> BTreeMap<NodeId, Vec<NodeId>> {
        let mut children: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (p, c) in self.edges() {
            children.entry(p).or_default().push(c);
        }
        children
    }

    /// Checks that every link is a graph edge and every node reaches the root
    /// (which also rules out cycles).
    pub fn check_structure(&self, g: &Graph) -> std::result::Result<(), TreeViolation> {
        for (p, c) in self.edges() {
            if !g.has_edge(p, c) {
                return Err(TreeViolation::MissingEdge(p, c));
            }
        }
        if self.parent.contains_key(&self.root) {
            return Err(TreeViolation::Detached(self.root));
        }
        let children = self.children();
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            seen.insert(x);
            stack.extend(children.get(&x).into_iter().flatten());
        }
        if let Some(&lost) = self.parent.keys().find(|v| !seen.contains(v)) {
            return Err(TreeViolation::Detached(lost));
        }
        Ok(())
    }

    /// Full feasibility: valid tree in `g`, rooted at [`pick_root`], spans
    /// every reported node, and reported nodes appear in non-decreasing
    /// timestamp order along every root-to-node path.
    ///
    /// [`pick_root`]: super::pick_root
    pub fn check_feasible(
        &self,
        g: &Graph,
        reports: &ReportSet,
    ) -> std::result::Result<(), TreeViolation> {
        self.check_structure(g)?;
        let expected = super::pick_root(reports);
        if self.root != expected {
            return Err(TreeViolation::WrongRoot {
                expected,
                found: self.root,
            });
        }
        if let Some(&missing) = reports.chronological().iter().find(|&&u| !self.contains(u)) {
            return Err(TreeViolation::Unspanned(missing));
        }
        // Walk down carrying the latest reported node seen on the path.
        let children = self.children();
        let mut stack: Vec<(NodeId, Option<NodeId>)> = vec![(self.root, None)];
        while let Some((x, latest)) = stack.pop() {
            let mut carried = latest;
            if let Some(tx) = reports.time_of(x) {
                if let Some(prev) = latest {
                    if reports.time_of(prev).unwrap() > tx {
                        return Err(TreeViolation::OrderViolation {
                            node: x,
                            earlier: prev,
                        });
                    }
                }
                carried = Some(x);
            }
            for &c in children.get(&x).into_iter().flatten() {
                stack.push((c, carried));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ReconstructedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "root\t{}", self.root)?;
        for (&c, &p) in &self.parent {
            writeln!(f, "{c}\t{p}")?;
        }
        Ok(())
    }
}

/// Writes `root<TAB>s` then one `child<TAB>parent` line per non-root node.
pub fn write_tree<W: Write>(t: &ReconstructedTree, mut out: W) -> Result<()> {
    write!(out, "{t}")?;
    Ok(())
}

/// Reads the format produced by [`write_tree`]. Only the format is checked;
/// use [`ReconstructedTree::check_structure`] against a graph for validity.
pub fn parse_tree<R: BufRead>(reader: R) -> Result<ReconstructedTree> {
    let mut root = None;
    let mut parent = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        let mut fields = trimmed.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(bad(format!("expected two fields, found {trimmed:?}"))),
        };
        let id = |tok: &str| {
            tok.parse::<NodeId>()
                .map_err(|_| bad(format!("{tok:?} is not a node id")))
        };
        if a == "root" {
            if root.replace(id(b)?).is_some() {
                return Err(bad("repeated root header".into()));
            }
        } else if parent.insert(id(a)?, id(b)?).is_some() {
            return Err(bad(format!("node {a} has two parents")));
        }
    }
    let root = root.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing root header".into(),
    })?;
    Ok(ReconstructedTree::new(root, parent))
}

const NO_PARENT: NodeId = usize::MAX;

/// Tree under construction with dense membership arrays.
pub(crate) struct PartialTree {
    root: NodeId,
    parent: Vec<NodeId>,
    member: Vec<bool>,
    members: Vec<NodeId>,
}

impl PartialTree {
    pub(crate) fn new(node_count: usize, root: NodeId) -> Self {
        let mut member = vec![false; node_count];
        member[root] = true;
        PartialTree {
            root,
            parent: vec![NO_PARENT; node_count],
            member,
            members: vec![root],
        }
    }

    #[inline]
    pub(crate) fn contains(&self, node: NodeId) -> bool {
        self.member[node]
    }

    pub(crate) fn add(&mut self, node: NodeId, parent: NodeId) {
        debug_assert!(self.member[parent] && !self.member[node]);
        self.member[node] = true;
        self.parent[node] = parent;
        self.members.push(node);
    }

    /// Adds `path[1..]`, hanging each node from its predecessor. `path[0]`
    /// must already be in the tree and no other node of the path may be.
    pub(crate) fn attach_path(&mut self, path: &[NodeId]) {
        for w in path.windows(2) {
            self.add(w[1], w[0]);
        }
    }

    /// Repeatedly removes leaves that `keep` rejects, then freezes the tree.
    pub(crate) fn prune_into_tree<F>(mut self, keep: F) -> ReconstructedTree
    where
        F: Fn(NodeId) -> bool,
    {
        let mut child_count = vec![0u32; self.parent.len()];
        for &v in &self.members {
            if v != self.root {
                child_count[self.parent[v]] += 1;
            }
        }
        let mut stack: Vec<NodeId> = self
            .members
            .iter()
            .copied()
            .filter(|&v| v != self.root && child_count[v] == 0 && !keep(v))
            .collect();
        while let Some(v) = stack.pop() {
            self.member[v] = false;
            let p = self.parent[v];
            child_count[p] -= 1;
            if p != self.root && child_count[p] == 0 && !keep(p) {
                stack.push(p);
            }
        }
        self.into_tree()
    }

    pub(crate) fn into_tree(self) -> ReconstructedTree {
        let mut pairs: Vec<(NodeId, NodeId)> = self
            .members
            .iter()
            .copied()
            .filter(|&v| v != self.root && self.member[v])
            .map(|v| (v, self.parent[v]))
            .collect();
        pairs.sort_unstable();
        ReconstructedTree::new(self.root, pairs.into_iter().collect())
    }
}
