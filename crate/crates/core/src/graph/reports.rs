use std::io::{BufRead, Write};

use super::NodeId;
use crate::error::{Error, Result};

/// Timestamped activation reports `{(node, time)}` over a graph with a fixed
/// node count.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportSet {
    entries: Vec<(NodeId, f64)>,
    time: Vec<Option<f64>>,
    chronological: Vec<NodeId>,
    t0: f64,
}

impl ReportSet {
    pub fn new(entries: Vec<(NodeId, f64)>, node_count: usize) -> Result<ReportSet> {
        if entries.is_empty() {
            return Err(Error::EmptyReports);
        }
        let mut time = vec![None; node_count];
        for &(node, t) in &entries {
            if node >= node_count {
                return Err(Error::InvalidNode { node, node_count });
            }
            if !t.is_finite() {
                return Err(Error::NonFiniteTime(node));
            }
            if time[node].replace(t).is_some() {
                return Err(Error::DuplicateReport(node));
            }
        }
        let mut chronological: Vec<NodeId> = entries.iter().map(|&(u, _)| u).collect();
        chronological.sort_by(|&a, &b| {
            time[a]
                .unwrap()
                .total_cmp(&time[b].unwrap())
                .then(a.cmp(&b))
        });
        let t0 = time[chronological[0]].unwrap();
        Ok(ReportSet {
            entries,
            time,
            chronological,
            t0,
        })
    }

    /// Number of reports, `k`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(NodeId, f64)] {
        &self.entries
    }

    /// Size of the node universe this set was validated against.
    pub fn node_count(&self) -> usize {
        self.time.len()
    }

    /// Earliest reported timestamp.
    pub fn t0(&self) -> f64 {
        self.t0
    }

    #[inline]
    pub fn time_of(&self, node: NodeId) -> Option<f64> {
        self.time.get(node).copied().flatten()
    }

    #[inline]
    pub fn is_reported(&self, node: NodeId) -> bool {
        matches!(self.time.get(node), Some(Some(_)))
    }

    /// Reported nodes sorted by `(time, id)`.
    pub fn chronological(&self) -> &[NodeId] {
        &self.chronological
    }

    /// Reported nodes with timestamp exactly `t`, ascending by id.
    pub fn nodes_at(&self, t: f64) -> Vec<NodeId> {
        self.chronological
            .iter()
            .copied()
            .filter(|&u| self.time[u] == Some(t))
            .collect()
    }

    pub(crate) fn require(&self, node: NodeId) -> Result<f64> {
        self.time_of(node).ok_or(Error::NotReported(node))
    }
}

/// Parses `node<TAB>time` lines. Blank lines and `#` comments are skipped.
pub fn parse_reports<R: BufRead>(reader: R, node_count: usize) -> Result<ReportSet> {
    let mut entries = Vec::new();
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
        let (node, time) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(bad(format!("expected node and time, found {trimmed:?}"))),
        };
        let node = node
            .parse::<NodeId>()
            .map_err(|_| bad(format!("{node:?} is not a node id")))?;
        let time = time
            .parse::<f64>()
            .map_err(|_| bad(format!("{time:?} is not a number")))?;
        entries.push((node, time));
    }
    ReportSet::new(entries, node_count)
}

/// Writes reports in chronological order, one `node<TAB>time` per line.
pub fn write_reports<W: Write>(reports: &ReportSet, mut out: W) -> Result<()> {
    for &u in reports.chronological() {
        writeln!(out, "{u}\t{}", reports.time_of(u).unwrap())?;
    }
    Ok(())
}
