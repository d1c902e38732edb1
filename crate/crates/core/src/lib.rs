//! Reconstruction of temporally consistent cascade trees.
//!
//! Given an undirected graph and a set of timestamped activation reports,
//! the algorithms in [`reconstruct`] build a small tree rooted at the
//! earliest report in which every root-to-node path visits reported nodes
//! in non-decreasing time order. [`simulate`] generates ground-truth
//! cascades to evaluate against, [`metrics`] scores a reconstruction, and
//! [`experiment`] drives seeded batches of both.

pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod reconstruct;
pub mod simulate;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId, ReportSet};
pub use reconstruct::ReconstructedTree;
pub use simulate::Cascade;
