//! Seeded experiment grid: simulate, sample, reconstruct, score, emit CSV.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::generate_ba_graph;
use crate::graph::{parse_edge_list, Graph};
use crate::metrics::{evaluate, MetricRecord};
use crate::reconstruct::Algorithm;
use crate::simulate::{
    calibrate_ic, sample_reports, simulate_ct, simulate_ic, simulate_si, simulate_sp, Cascade,
    RngSeed,
};

pub const CSV_HEADER: &str =
    "graph,model,algo,q,run,tree_size,precision,recall,order_accuracy,runtime_ms";
pub const FAILURE_HEADER: &str = "graph,model,algo,q,run,reason";
pub const SUMMARY_HEADER: &str = "graph,model,algo,q,runs,failures,tree_size_mean,tree_size_se,\
precision_mean,precision_se,recall_mean,recall_se,order_accuracy_mean,order_accuracy_se,runtime_ms_mean,runtime_ms_se";

// random stream lanes within a run
pub const LANE_SOURCE: u64 = 0;
pub const LANE_CASCADE: u64 = 1;
pub const LANE_GRAPH: u64 = 2;
pub const LANE_CALIBRATE: u64 = 3;
pub const LANE_SAMPLE: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Si,
    Ic,
    Ct,
    Sp,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Si => "si",
            Model::Ic => "ic",
            Model::Ct => "ct",
            Model::Sp => "sp",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Model::Si, Model::Ic, Model::Ct, Model::Sp]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown model {s:?}")))
    }
}

/// `0.001 * 2^i` for `i = 0..=8`.
pub fn default_q_grid() -> Vec<f64> {
    (0..=8).map(|i| 0.001 * f64::from(1u32 << i)).collect()
}

/// One experiment grid. Read from a flat TOML document; every key is
/// optional and falls back to the defaults below.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Edge list to load. Mutually exclusive with `ba_nodes`.
    pub graph_path: Option<PathBuf>,
    /// Node count of a generated Barabási–Albert graph.
    pub ba_nodes: Option<usize>,
    pub ba_attach: usize,
    pub model: Model,
    /// Transmission probability for SI and IC. IC calibrates it when absent.
    pub p: Option<f64>,
    /// Exponential delay rate for CT.
    pub beta: f64,
    pub stop_fraction: f64,
    /// Monte Carlo trials per probe when calibrating IC.
    pub ic_trials: usize,
    pub q_list: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    /// Fill the `runtime_ms` column. Off by default so output is
    /// byte-reproducible.
    pub timing: bool,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph_path: None,
            ba_nodes: None,
            ba_attach: 2,
            model: Model::Si,
            p: None,
            beta: 1.0,
            stop_fraction: 0.5,
            ic_trials: 200,
            q_list: default_q_grid(),
            algorithms: Algorithm::ALL.to_vec(),
            runs: 100,
            master_seed: 0,
            output_path: None,
            timing: false,
            threads: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        match (&self.graph_path, self.ba_nodes) {
            (Some(_), Some(_)) => return bad("set either graph_path or ba_nodes, not both".into()),
            (None, None) => return bad("no graph: set graph_path or ba_nodes".into()),
            (Some(path), None) if !path.is_file() => {
                return bad(format!("graph file {} does not exist", path.display()))
            }
            (None, Some(n)) if self.ba_attach == 0 || n <= self.ba_attach => {
                return bad(format!(
                    "BA graph needs 1 <= ba_attach < ba_nodes (got {n}, {})",
                    self.ba_attach
                ))
            }
            _ => {}
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.q_list.is_empty() {
            return bad("q_list is empty".into());
        }
        if let Some(q) = self.q_list.iter().find(|&&q| !(q > 0.0 && q <= 1.0)) {
            return bad(format!("q = {q} is not in (0, 1]"));
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected".into());
        }
        if !(self.stop_fraction > 0.0 && self.stop_fraction <= 1.0) {
            return bad(format!(
                "stop_fraction {} is not in (0, 1]",
                self.stop_fraction
            ));
        }
        match (self.model, self.p) {
            (Model::Si, None) => return bad("model si needs p".into()),
            (Model::Si | Model::Ic, Some(p)) if !(0.0..=1.0).contains(&p) => {
                return bad(format!("p = {p} is not in [0, 1]"))
            }
            (Model::Ic, None) if self.ic_trials == 0 || self.stop_fraction >= 1.0 => {
                return bad("IC calibration needs ic_trials >= 1 and stop_fraction < 1".into())
            }
            (Model::Ct, _) if !(self.beta > 0.0 && self.beta.is_finite()) => {
                return bad(format!("beta {} must be positive", self.beta))
            }
            _ => {}
        }
        Ok(())
    }

    /// Label used in the `graph` column.
    pub fn graph_label(&self) -> String {
        match (&self.graph_path, self.ba_nodes) {
            (Some(path), _) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            (None, Some(n)) => format!("ba-{n}-{}", self.ba_attach),
            (None, None) => "graph".into(),
        }
    }

    /// Loads or generates the graph. Generated graphs depend only on the
    /// master seed.
    pub fn build_graph(&self) -> Result<Graph> {
        match (&self.graph_path, self.ba_nodes) {
            (Some(path), _) => {
                let file = File::open(path)
                    .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
                let parsed = parse_edge_list(BufReader::new(file))?;
                if parsed.dropped.duplicates + parsed.dropped.self_loops > 0 {
                    log::info!(
                        "{}: dropped {} duplicate edges and {} self-loops",
                        path.display(),
                        parsed.dropped.duplicates,
                        parsed.dropped.self_loops
                    );
                }
                Ok(parsed.graph)
            }
            (None, Some(n)) => {
                let mut rng = RngSeed::new(self.master_seed, 0).rng(LANE_GRAPH);
                generate_ba_graph(n, self.ba_attach, &mut rng)
            }
            (None, None) => Err(Error::Config("no graph configured".into())),
        }
    }
}

/// One successful (q, run, algorithm) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub graph: String,
    pub model: Model,
    pub algo: Algorithm,
    pub q: f64,
    pub run: usize,
    pub metrics: MetricRecord,
}

/// A (q, run, algorithm) combination that produced no row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub graph: String,
    pub model: Model,
    pub algo: Algorithm,
    pub q: f64,
    pub run: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentOutput {
    /// Ordered by (q, run, algorithm) as configured.
    pub rows: Vec<ExperimentRow>,
    pub failures: Vec<FailureRecord>,
}

enum Outcome {
    Row(MetricRecord),
    Failed(String),
}

struct Setup<'a> {
    cfg: &'a ExperimentConfig,
    g: &'a Graph,
    p: f64,
}

impl Setup<'_> {
    fn cascade(&self, seed: RngSeed) -> Result<Cascade> {
        let cfg = self.cfg;
        let source = seed.rng(LANE_SOURCE).gen_range(0..self.g.node_count());
        let mut rng = seed.rng(LANE_CASCADE);
        match cfg.model {
            Model::Si => simulate_si(self.g, source, self.p, cfg.stop_fraction, &mut rng),
            Model::Ic => simulate_ic(self.g, source, self.p, &mut rng),
            Model::Ct => simulate_ct(self.g, source, cfg.beta, cfg.stop_fraction, &mut rng),
            Model::Sp => simulate_sp(self.g, source, cfg.stop_fraction),
        }
    }

    /// Every (q index, algorithm index, outcome) of one run. The cascade is
    /// shared by all q levels of the run.
    fn run(&self, run: usize) -> Vec<(usize, usize, Outcome)> {
        let cfg = self.cfg;
        let seed = RngSeed::new(cfg.master_seed, run as u64);
        let mut out = Vec::with_capacity(cfg.q_list.len() * cfg.algorithms.len());
        let cascade = self.cascade(seed);
        for (qi, &q) in cfg.q_list.iter().enumerate() {
            let sampled = cascade.as_ref().map_err(|e| e.to_string()).and_then(|c| {
                let mut rng = seed.rng(LANE_SAMPLE + qi as u64);
                sample_reports(c, q, &mut rng)
                    .map(|r| (c, r))
                    .map_err(|e| e.to_string())
            });
            for (ai, &algo) in cfg.algorithms.iter().enumerate() {
                let outcome = match &sampled {
                    Err(reason) => Outcome::Failed(reason.clone()),
                    Ok((c, reports)) => {
                        let start = Instant::now();
                        let tree = algo.run(self.g, reports);
                        let elapsed = start.elapsed().as_secs_f64() * 1e3;
                        match tree.and_then(|t| evaluate(&t, c, cfg.timing.then_some(elapsed))) {
                            Ok(m) => Outcome::Row(m),
                            Err(e) => Outcome::Failed(e.to_string()),
                        }
                    }
                };
                out.push((qi, ai, outcome));
            }
        }
        out
    }
}

/// Runs the whole grid on an already built graph.
pub fn run_on_graph(cfg: &ExperimentConfig, g: &Graph) -> Result<ExperimentOutput> {
    cfg.validate()?;
    if g.node_count() == 0 {
        return Err(Error::Config("graph has no nodes".into()));
    }
    let p = match (cfg.model, cfg.p) {
        (Model::Ic, None) => {
            let mut rng = RngSeed::new(cfg.master_seed, 0).rng(LANE_CALIBRATE);
            let cal = calibrate_ic(g, cfg.stop_fraction, cfg.ic_trials, &mut rng)?;
            log::info!(
                "calibrated IC p = {} (infected fraction {:.4})",
                cal.p,
                cal.estimate
            );
            cal.p
        }
        (_, p) => p.unwrap_or(0.0),
    };
    let setup = Setup { cfg, g, p };
    let per_run: Vec<Vec<(usize, usize, Outcome)>> = if cfg.threads == 1 {
        (0..cfg.runs).map(|r| setup.run(r)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| {
            (0..cfg.runs)
                .into_par_iter()
                .map(|r| setup.run(r))
                .collect()
        })
    };

    let mut keyed: Vec<(usize, usize, usize, Outcome)> = per_run
        .into_iter()
        .enumerate()
        .flat_map(|(run, v)| v.into_iter().map(move |(qi, ai, o)| (qi, run, ai, o)))
        .collect();
    keyed.sort_by_key(|&(qi, run, ai, _)| (qi, run, ai));

    let graph = cfg.graph_label();
    let mut output = ExperimentOutput::default();
    for (qi, run, ai, outcome) in keyed {
        let (q, algo) = (cfg.q_list[qi], cfg.algorithms[ai]);
        match outcome {
            Outcome::Row(metrics) => output.rows.push(ExperimentRow {
                graph: graph.clone(),
                model: cfg.model,
                algo,
                q,
                run,
                metrics,
            }),
            Outcome::Failed(reason) => output.failures.push(FailureRecord {
                graph: graph.clone(),
                model: cfg.model,
                algo,
                q,
                run,
                reason,
            }),
        }
    }
    if !output.failures.is_empty() {
        log::warn!(
            "{} of {} runs failed",
            output.failures.len(),
            output.failures.len() + output.rows.len()
        );
    }
    Ok(output)
}

/// Builds the configured graph and runs the grid.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let g = cfg.build_graph()?;
    run_on_graph(cfg, &g)
}

/// Six decimals, ties to even, applied to the shortest decimal string
/// that round-trips `x` (so 0.1234565 gives "0.123456").
pub fn format_real(x: f64) -> String {
    const DIGITS: usize = 6;
    let text = format!("{}", x.abs());
    let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(
            frac_part
                .bytes()
                .chain(std::iter::repeat(b'0'))
                .take(DIGITS),
        )
        .collect();
    if frac_part.len() > DIGITS {
        let rest = &frac_part.as_bytes()[DIGITS..];
        let up = match rest[0] {
            b'6'..=b'9' => true,
            b'5' => {
                rest[1..].iter().any(|&d| d != b'0') || (digits.last().unwrap() - b'0') % 2 == 1
            }
            _ => false,
        };
        if up {
            let mut i = digits.len();
            loop {
                if i == 0 {
                    digits.insert(0, b'1');
                    break;
                }
                i -= 1;
                if digits[i] == b'9' {
                    digits[i] = b'0';
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    let split = digits.len() - DIGITS;
    let body = format!(
        "{}.{}",
        std::str::from_utf8(&digits[..split]).unwrap(),
        std::str::from_utf8(&digits[split..]).unwrap()
    );
    let zero = digits.iter().all(|&d| d == b'0');
    if x.is_sign_negative() && !zero {
        format!("-{body}")
    } else {
        body
    }
}

fn optional_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out)
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_header<W: Write>(w: &mut csv::Writer<W>, header: &str) -> Result<()> {
    w.write_record(header.split(',')).map_err(csv_error)
}

/// Writes the per-run CSV: header plus one line per row.
pub fn emit_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    write_header(&mut w, CSV_HEADER)?;
    for r in rows {
        let m = &r.metrics;
        w.write_record([
            r.graph.clone(),
            r.model.to_string(),
            r.algo.to_string(),
            format_real(r.q),
            r.run.to_string(),
            m.tree_size.to_string(),
            format_real(m.precision),
            format_real(m.recall),
            optional_real(m.order_accuracy),
            optional_real(m.runtime_ms),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_failures<W: Write>(failures: &[FailureRecord], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    write_header(&mut w, FAILURE_HEADER)?;
    for f in failures {
        w.write_record([
            f.graph.clone(),
            f.model.to_string(),
            f.algo.to_string(),
            format_real(f.q),
            f.run.to_string(),
            f.reason.clone(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub se: f64,
    pub count: usize,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let se = if n < 2 {
            0.0
        } else {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        };
        Some(Stat { mean, se, count: n })
    }
}

/// Aggregate over the runs of one (q, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub graph: String,
    pub model: Model,
    pub algo: Algorithm,
    pub q: f64,
    pub runs: usize,
    pub failures: usize,
    pub tree_size: Option<Stat>,
    pub precision: Option<Stat>,
    pub recall: Option<Stat>,
    pub order_accuracy: Option<Stat>,
    pub runtime_ms: Option<Stat>,
}

/// Per-cell means over successful runs, with failure counts. Cells are
/// ordered by q, then algorithm.
pub fn summarize(output: &ExperimentOutput) -> Vec<SummaryRow> {
    #[derive(Default)]
    struct Cell<'a> {
        rows: Vec<&'a ExperimentRow>,
        failures: usize,
        label: Option<(String, Model)>,
    }
    let mut cells: BTreeMap<(u64, Algorithm), Cell> = BTreeMap::new();
    for r in &output.rows {
        let cell = cells.entry((r.q.to_bits(), r.algo)).or_default();
        cell.rows.push(r);
        cell.label.get_or_insert_with(|| (r.graph.clone(), r.model));
    }
    for f in &output.failures {
        let cell = cells.entry((f.q.to_bits(), f.algo)).or_default();
        cell.failures += 1;
        cell.label.get_or_insert_with(|| (f.graph.clone(), f.model));
    }
    cells
        .into_iter()
        .map(|((q, algo), cell)| {
            let collect = |f: &dyn Fn(&MetricRecord) -> Option<f64>| {
                Stat::of(
                    &cell
                        .rows
                        .iter()
                        .filter_map(|r| f(&r.metrics))
                        .collect::<Vec<_>>(),
                )
            };
            let (graph, model) = cell.label.clone().unwrap();
            SummaryRow {
                graph,
                model,
                algo,
                q: f64::from_bits(q),
                runs: cell.rows.len(),
                failures: cell.failures,
                tree_size: collect(&|m| Some(m.tree_size as f64)),
                precision: collect(&|m| Some(m.precision)),
                recall: collect(&|m| Some(m.recall)),
                order_accuracy: collect(&|m| m.order_accuracy),
                runtime_ms: collect(&|m| m.runtime_ms),
            }
        })
        .collect()
}

pub fn emit_summary<W: Write>(summary: &[SummaryRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    write_header(&mut w, SUMMARY_HEADER)?;
    for s in summary {
        let mut record = vec![
            s.graph.clone(),
            s.model.to_string(),
            s.algo.to_string(),
            format_real(s.q),
            s.runs.to_string(),
            s.failures.to_string(),
        ];
        for stat in [
            s.tree_size,
            s.precision,
            s.recall,
            s.order_accuracy,
            s.runtime_ms,
        ] {
            record.push(optional_real(stat.map(|s| s.mean)));
            record.push(optional_real(stat.map(|s| s.se)));
        }
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// `<out>.failures.csv` and `<out>.summary.csv` next to the main output.
pub fn companion_paths(out: &Path) -> (PathBuf, PathBuf) {
    let with = |suffix: &str| {
        let mut name = out.as_os_str().to_owned();
        name.push(suffix);
        PathBuf::from(name)
    };
    (with(".failures.csv"), with(".summary.csv"))
}

/// Writes the row CSV, failure log and summary for `output` under `path`.
pub fn write_outputs(output: &ExperimentOutput, path: &Path) -> Result<()> {
    let (failures, summary) = companion_paths(path);
    emit_csv(&output.rows, File::create(path)?)?;
    emit_failures(&output.failures, File::create(failures)?)?;
    emit_summary(&summarize(output), File::create(summary)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(format_real(0.1234565), "0.123456");
        assert_eq!(format_real(0.1234575), "0.123458");
        assert_eq!(format_real(0.12345651), "0.123457");
        assert_eq!(format_real(1.0), "1.000000");
        assert_eq!(format_real(0.75), "0.750000");
        assert_eq!(format_real(2.0 / 3.0), "0.666667");
        assert_eq!(format_real(9.9999995), "10.000000");
        assert_eq!(format_real(0.0000004), "0.000000");
        assert_eq!(format_real(-0.0000004), "0.000000");
        assert_eq!(format_real(-1.5), "-1.500000");
        assert_eq!(format_real(1e-7), "0.000000");
        assert_eq!(format_real(123456.0), "123456.000000");
    }

    #[test]
    fn q_grid() {
        let q = default_q_grid();
        assert_eq!(q.len(), 9);
        assert_eq!(q[0], 0.001);
        assert_eq!(q[8], 0.256);
    }

    fn row(algo: Algorithm) -> ExperimentRow {
        ExperimentRow {
            graph: "g".into(),
            model: Model::Sp,
            algo,
            q: 0.5,
            run: 0,
            metrics: MetricRecord {
                tree_size: 2,
                precision: 1.0,
                recall: 0.5,
                order_accuracy: None,
                runtime_ms: None,
            },
        }
    }

    #[test]
    fn csv_lines() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));

        let mut buf = Vec::new();
        emit_csv(&[row(Algorithm::DelayedBfs)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "g,sp,delayed-bfs,0.500000,0,2,1.000000,0.500000,,"
        );
    }

    #[test]
    fn failure_reasons_are_quoted() {
        let f = FailureRecord {
            graph: "g".into(),
            model: Model::Si,
            algo: Algorithm::Greedy,
            q: 0.1,
            run: 3,
            reason: "a, b".into(),
        };
        let mut buf = Vec::new();
        emit_failures(&[f], &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .ends_with("g,si,greedy,0.100000,3,\"a, b\"\n"));
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::from_toml(
            "ba_nodes = 50\nmodel = \"ct\"\nq_list = [0.1, 0.5]\nalgorithms = [\"greedy\", \"delayed-bfs\"]\nruns = 3\nmaster_seed = 9\n",
        )
        .unwrap();
        assert_eq!(cfg.model, Model::Ct);
        assert_eq!(
            cfg.algorithms,
            vec![Algorithm::Greedy, Algorithm::DelayedBfs]
        );
        assert_eq!(cfg.stop_fraction, 0.5);
        cfg.validate().unwrap();
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
        assert!(ExperimentConfig::from_toml("model = \"xx\"").is_err());

        let mut bad = cfg.clone();
        bad.q_list = vec![0.0];
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let mut bad = cfg;
        bad.model = Model::Si;
        assert!(bad.validate().is_err());
    }

    fn path_config(dir: &Path) -> ExperimentConfig {
        let path = dir.join("path.txt");
        std::fs::write(&path, "0 1\n1 2\n2 3\n3 4\n").unwrap();
        ExperimentConfig {
            graph_path: Some(path),
            model: Model::Sp,
            q_list: vec![1.0],
            runs: 1,
            master_seed: 5,
            ..Default::default()
        }
    }

    #[test]
    fn full_observation_of_path() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&path_config(dir.path())).unwrap();
        assert!(out.failures.is_empty());
        assert_eq!(out.rows.len(), 4);
        for (r, algo) in out.rows.iter().zip(Algorithm::ALL) {
            assert_eq!(r.algo, algo);
            assert_eq!(r.graph, "path");
            assert_eq!(r.metrics.precision, 1.0);
        }
    }

    #[test]
    fn every_cell_accounted_for() {
        let cfg = ExperimentConfig {
            ba_nodes: Some(60),
            p: Some(0.3),
            q_list: vec![0.01, 0.2],
            runs: 6,
            ..Default::default()
        };
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.rows.len() + out.failures.len(), 2 * 6 * 4);
        let summary = summarize(&out);
        assert_eq!(summary.len(), 8);
        assert!(summary.iter().all(|s| s.runs + s.failures == 6));
    }

    #[test]
    fn deterministic_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = path_config(dir.path());
        cfg.model = Model::Ct;
        cfg.q_list = vec![0.3, 1.0];
        cfg.runs = 8;
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_outputs(&run_experiment(&cfg).unwrap(), &a).unwrap();
        cfg.threads = 1;
        write_outputs(&run_experiment(&cfg).unwrap(), &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let (fa, _) = companion_paths(&a);
        assert!(std::fs::read_to_string(fa)
            .unwrap()
            .starts_with(FAILURE_HEADER));
    }
}
