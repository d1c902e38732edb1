use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges")]
    EmptyInput,

    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    InvalidNode { node: usize, node_count: usize },

    #[error("node {0} is not a reported node")]
    NotReported(usize),

    #[error("report set is empty")]
    EmptyReports,

    #[error("node {0} is reported more than once")]
    DuplicateReport(usize),

    #[error("report for node {0} has a non-finite timestamp")]
    NonFiniteTime(usize),

    #[error("no order-respecting connection reaches reported node {0}")]
    Infeasible(usize),

    #[error("instance has {node_count} nodes, exact solver limit is {limit}")]
    TooLarge { node_count: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("run failed: {0}")]
    RunFailed(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
