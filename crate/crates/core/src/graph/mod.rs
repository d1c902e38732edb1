//! Undirected graph storage, report sets and the constrained shortest-path
//! queries the reconstruction algorithms are built on.

mod io;
mod paths;
mod reports;

pub use io::{
    parse_edge_list, parse_labeled_edge_list, write_edge_list, LabeledGraph, ParsedGraph,
};
pub use paths::{bfs_distances, excluding_shortest_path, extended_excluding_shortest_path, Path};
pub use reports::{parse_reports, write_reports, ReportSet};

pub(crate) use paths::BfsScratch;

use crate::error::{Error, Result};

/// Node identifier. Ids are dense in `[0, node_count)`.
pub type NodeId = usize;

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted ascending, which every traversal in this crate
/// relies on for deterministic tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(NodeId, NodeId)>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    edge_ids: Vec<u32>,
}

/// Number of input edges discarded while building a [`Graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dropped {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a graph, silently dropping self-loops and repeated edges.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_edges_counted(node_count, edges).map(|(g, _)| g)
    }

    /// Like [`Graph::from_edges`] but also reports what was dropped.
    pub fn from_edges_counted<I>(node_count: usize, edges: I) -> Result<(Graph, Dropped)>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if node_count > u32::MAX as usize {
            return Err(Error::TooLarge {
                node_count,
                limit: u32::MAX as usize,
            });
        }
        let mut dropped = Dropped::default();
        let mut normalized = Vec::new();
        for (u, v) in edges {
            for node in [u, v] {
                if node >= node_count {
                    return Err(Error::InvalidNode { node, node_count });
                }
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            normalized.push((u.min(v), u.max(v)));
        }
        let before = normalized.len();
        normalized.sort_unstable();
        normalized.dedup();
        dropped.duplicates = before - normalized.len();

        let mut degree = vec![0usize; node_count];
        for &(u, v) in &normalized {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..node_count].to_vec();
        let mut neighbors = vec![0; offsets[node_count]];
        let mut edge_ids = vec![0; offsets[node_count]];
        // Edges sorted by (min, max) fill each list with smaller neighbors
        // first, then larger ones, both ascending.
        for (id, &(u, v)) in normalized.iter().enumerate() {
            neighbors[cursor[u]] = v as u32;
            edge_ids[cursor[u]] = id as u32;
            cursor[u] += 1;
            neighbors[cursor[v]] = u as u32;
            edge_ids[cursor[v]] = id as u32;
            cursor[v] += 1;
        }
        debug_assert!(
            (0..node_count).all(|x| neighbors[offsets[x]..offsets[x + 1]]
                .windows(2)
                .all(|w| w[0] < w[1]))
        );

        Ok((
            Graph {
                node_count,
                edges: normalized,
                offsets,
                neighbors,
                edge_ids,
            },
            dropped,
        ))
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs, sorted. The position is the edge id.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// Neighbors of `node` in ascending order.
    #[inline]
    pub fn neighbors(&self, node: NodeId) -> impl ExactSizeIterator<Item = NodeId> + Clone + '_ {
        self.neighbors[self.offsets[node]..self.offsets[node + 1]]
            .iter()
            .map(|&y| y as NodeId)
    }

    /// Neighbors of `node` paired with the id of the connecting edge.
    pub fn incident(&self, node: NodeId) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.neighbors[range.clone()]
            .iter()
            .zip(&self.edge_ids[range])
            .map(|(&y, &e)| (y as NodeId, e as usize))
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count
            && v < self.node_count
            && self.neighbors[self.offsets[u]..self.offsets[u + 1]]
                .binary_search(&(v as u32))
                .is_ok()
    }

    pub(crate) fn check_node(&self, node: NodeId) -> Result<()> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                node,
                node_count: self.node_count,
            })
        }
    }

    /// Nodes in the connected component containing `node`, in BFS order.
    pub fn component_of(&self, node: NodeId) -> Vec<NodeId> {
        let dist = bfs_distances(self, node);
        let mut order: Vec<(u32, NodeId)> = dist
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (d, v)))
            .collect();
        order.sort_unstable();
        order.into_iter().map(|(_, v)| v).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.node_count == 0 || self.component_of(0).len() == self.node_count
    }
}
