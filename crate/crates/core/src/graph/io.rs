use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Dropped, Graph, NodeId};
use crate::error::{Error, Result};

/// Result of parsing an edge list: the graph plus what was discarded.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub dropped: Dropped,
}

/// Edge list with arbitrary node labels remapped to dense ids.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub dropped: Dropped,
    /// `labels[id]` is the original token for node `id`.
    pub labels: Vec<String>,
}

fn node_count_header(line: &str) -> Option<&str> {
    let rest = line.strip_prefix('#')?.trim_start();
    let (key, value) = rest.split_once(':')?;
    key.trim()
        .eq_ignore_ascii_case("nodes")
        .then(|| value.trim())
}

fn edge_tokens(line: &str, line_no: usize) -> Result<(&str, &str)> {
    let mut tokens = line.split_whitespace();
    match (tokens.next(), tokens.next(), tokens.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line: line_no,
            message: format!("expected two node ids, found {line:?}"),
        }),
    }
}

/// Parses a whitespace-separated edge list with integer node ids.
///
/// Lines starting with `#` are comments, except `# nodes: N` which fixes
/// the node count. Without a header the node count is one past the largest
/// id. Self-loops and repeated edges (in either direction) are dropped.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedGraph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<NodeId> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if let Some(value) = node_count_header(trimmed) {
                let n = value.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad node count {value:?}"),
                })?;
                declared = Some(n);
            }
            continue;
        }
        let (a, b) = edge_tokens(trimmed, line_no)?;
        let parse_id = |tok: &str| {
            tok.parse::<NodeId>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("{tok:?} is not a non-negative integer"),
            })
        };
        let (u, v) = (parse_id(a)?, parse_id(b)?);
        if let Some(n) = declared {
            if u.max(v) >= n {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("node {} exceeds declared count {n}", u.max(v)),
                });
            }
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }

    let node_count = match (declared, max_id) {
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(Error::EmptyInput),
    };
    if edges.is_empty() && node_count == 0 {
        return Err(Error::EmptyInput);
    }
    let (graph, dropped) = Graph::from_edges_counted(node_count, edges)?;
    if dropped.duplicates + dropped.self_loops > 0 {
        log::info!(
            "dropped {} duplicate edges and {} self-loops",
            dropped.duplicates,
            dropped.self_loops
        );
    }
    Ok(ParsedGraph { graph, dropped })
}

/// Parses an edge list whose node tokens are arbitrary strings.
///
/// Labels are assigned ids in order of first appearance.
pub fn parse_labeled_edge_list<R: BufRead>(reader: R) -> Result<LabeledGraph> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (a, b) = edge_tokens(trimmed, idx + 1)?;
        let mut intern = |tok: &str| {
            *ids.entry(tok.to_owned()).or_insert_with(|| {
                labels.push(tok.to_owned());
                labels.len() - 1
            })
        };
        let u = intern(a);
        let v = intern(b);
        edges.push((u, v));
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (graph, dropped) = Graph::from_edges_counted(labels.len(), edges)?;
    Ok(LabeledGraph {
        graph,
        dropped,
        labels,
    })
}

/// Writes `g` as an edge list with a `# nodes: N` header.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# nodes: {}", g.node_count())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
