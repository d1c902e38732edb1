use std::collections::VecDeque;

use super::{Graph, NodeId, ReportSet};
use crate::error::{Error, Result};

/// Node sequence from the first endpoint to the last. Length is `len() - 1`.
pub type Path = Vec<NodeId>;

/// Per-node BFS record, kept together so a visit touches one cache line.
#[derive(Debug, Clone, Copy)]
struct Slot {
    stamp: u32,
    dist: u32,
    parent: NodeId,
}

/// Reusable BFS state. Visited marks are generation-stamped so a search only
/// pays for the nodes it touches.
#[derive(Debug, Clone)]
pub(crate) struct BfsScratch {
    slots: Vec<Slot>,
    generation: u32,
    pub(crate) queue: VecDeque<NodeId>,
}

impl BfsScratch {
    pub(crate) fn new(node_count: usize) -> Self {
        let empty = Slot {
            stamp: 0,
            dist: 0,
            parent: usize::MAX,
        };
        BfsScratch {
            slots: vec![empty; node_count],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    pub(crate) fn begin(&mut self) {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.slots.iter_mut().for_each(|s| s.stamp = 0);
            self.generation = 1;
        }
        self.queue.clear();
    }

    #[inline]
    pub(crate) fn seen(&self, v: NodeId) -> bool {
        self.slots[v].stamp == self.generation
    }

    #[inline]
    pub(crate) fn visit(&mut self, v: NodeId, parent: NodeId, dist: u32) {
        self.slots[v] = Slot {
            stamp: self.generation,
            dist,
            parent,
        };
        self.queue.push_back(v);
    }

    pub(crate) fn dist(&self, v: NodeId) -> Option<u32> {
        self.seen(v).then(|| self.slots[v].dist)
    }

    /// Breadth-first search from `source`, scanning neighbors in ascending
    /// order. Nodes other than the source are discovered but only expanded
    /// when `expand` accepts them. Stops as soon as `target` is discovered.
    pub(crate) fn run<F>(
        &mut self,
        g: &Graph,
        source: NodeId,
        mut expand: F,
        target: Option<NodeId>,
    ) where
        F: FnMut(NodeId) -> bool,
    {
        self.begin();
        self.visit(source, usize::MAX, 0);
        if target == Some(source) {
            return;
        }
        while let Some(x) = self.queue.pop_front() {
            if x != source && !expand(x) {
                continue;
            }
            let d = self.slots[x].dist + 1;
            for y in g.neighbors(x) {
                if !self.seen(y) {
                    self.visit(y, x, d);
                    if target == Some(y) {
                        return;
                    }
                }
            }
        }
    }

    /// Discovery chain from `v` back to the search source.
    pub(crate) fn chain_from(&self, v: NodeId) -> Option<Path> {
        if !self.seen(v) {
            return None;
        }
        let mut chain = Vec::with_capacity(self.slots[v].dist as usize + 1);
        let mut x = v;
        chain.push(x);
        while self.slots[x].parent != usize::MAX {
            x = self.slots[x].parent;
            chain.push(x);
        }
        Some(chain)
    }

    /// Path from the search source to `v`.
    pub(crate) fn path_to(&self, v: NodeId) -> Option<Path> {
        self.chain_from(v).map(|mut p| {
            p.reverse();
            p
        })
    }
}

/// Unconstrained hop distances from `source`.
pub fn bfs_distances(g: &Graph, source: NodeId) -> Vec<Option<u32>> {
    let mut scratch = BfsScratch::new(g.node_count());
    scratch.run(g, source, |_| true, None);
    (0..g.node_count()).map(|v| scratch.dist(v)).collect()
}

/// Shortest `u`–`v` path whose interior avoids every reported node other
/// than the endpoints. `None` when no such path exists.
///
/// Ties go to the path a BFS from `u` finds when scanning neighbors in
/// ascending id order.
pub fn excluding_shortest_path(
    g: &Graph,
    reports: &ReportSet,
    u: NodeId,
    v: NodeId,
) -> Result<Option<Path>> {
    reports.require(u)?;
    reports.require(v)?;
    if u == v {
        return Err(Error::InvalidParameter(format!(
            "excluding path endpoints must differ (both {u})"
        )));
    }
    let mut scratch = BfsScratch::new(g.node_count());
    scratch.run(g, u, |x| !reports.is_reported(x), Some(v));
    Ok(scratch.path_to(v))
}

/// Shortest path from any node `v` to reported node `u` whose interior may
/// only contain reported nodes sharing `u`'s timestamp.
///
/// The search runs from `u`; the returned path is ordered `v .. u`.
pub fn extended_excluding_shortest_path(
    g: &Graph,
    reports: &ReportSet,
    v: NodeId,
    u: NodeId,
) -> Result<Option<Path>> {
    let tu = reports.require(u)?;
    g.check_node(v)?;
    let mut scratch = BfsScratch::new(g.node_count());
    scratch.run(
        g,
        u,
        |x| reports.time_of(x).map_or(true, |t| t == tu),
        Some(v),
    );
    Ok(scratch.chain_from(v))
}
