//! Order-respecting tree reconstruction from timestamped reports.

mod arborescence;
mod closure;
mod delayed_bfs;
mod exact;
mod greedy;
mod steiner;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use arborescence::{min_arborescence, Arc};
pub use closure::{
    build_closure_graph, closure, directed_mst, Arborescence, ClosureArc, ClosureGraph,
};
pub use delayed_bfs::{delayed_bfs, delayed_bfs_traced, DelayedBfsTrace};
pub use exact::{exact_ordered_steiner, exact_unordered_steiner, DEFAULT_EXACT_LIMIT};
pub use greedy::greedy;
pub use steiner::steiner_baseline;
pub use tree::{parse_tree, write_tree, ReconstructedTree, TreeViolation};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, ReportSet};

/// Earliest reported node; ties go to the smallest id.
pub fn pick_root(reports: &ReportSet) -> NodeId {
    reports.chronological()[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Closure,
    Greedy,
    DelayedBfs,
    Steiner,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Closure,
        Algorithm::Greedy,
        Algorithm::DelayedBfs,
        Algorithm::Steiner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Closure => "closure",
            Algorithm::Greedy => "greedy",
            Algorithm::DelayedBfs => "delayed-bfs",
            Algorithm::Steiner => "steiner",
        }
    }

    pub fn run(self, g: &Graph, reports: &ReportSet) -> Result<ReconstructedTree> {
        match self {
            Algorithm::Closure => closure(g, reports),
            Algorithm::Greedy => greedy(g, reports),
            Algorithm::DelayedBfs => delayed_bfs(g, reports),
            Algorithm::Steiner => steiner_baseline(g, reports),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}
