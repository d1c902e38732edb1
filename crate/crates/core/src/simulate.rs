//! Ground-truth cascade generation (SI, IC, CT and SP models) and partial
//! observation sampling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, ReportSet};

/// Attempts made by [`sample_reports`] before giving up on an empty sample.
pub const SAMPLE_ATTEMPTS: usize = 100;

/// Infection times produced by one propagation run.
#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    source: NodeId,
    time: Vec<Option<f64>>,
    infected: usize,
}

impl Cascade {
    /// Builds a cascade from explicit `(node, time)` pairs. The source must
    /// be among them with the minimum time.
    pub fn new<I>(source: NodeId, node_count: usize, times: I) -> Result<Cascade>
    where
        I: IntoIterator<Item = (NodeId, f64)>,
    {
        let mut time = vec![None; node_count];
        let mut infected = 0;
        for (node, t) in times {
            if node >= node_count {
                return Err(Error::InvalidNode { node, node_count });
            }
            if !t.is_finite() {
                return Err(Error::NonFiniteTime(node));
            }
            if time[node].replace(t).is_some() {
                return Err(Error::DuplicateReport(node));
            }
            infected += 1;
        }
        let ts = match time.get(source).copied().flatten() {
            Some(t) => t,
            None => {
                return Err(Error::InvalidParameter(format!(
                    "cascade source {source} has no infection time"
                )))
            }
        };
        if time.iter().flatten().any(|&t| t < ts) {
            return Err(Error::InvalidParameter(
                "cascade source is not the earliest infection".into(),
            ));
        }
        Ok(Cascade {
            source,
            time,
            infected,
        })
    }

    fn from_times(source: NodeId, time: Vec<Option<f64>>) -> Cascade {
        let infected = time.iter().filter(|t| t.is_some()).count();
        Cascade {
            source,
            time,
            infected,
        }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn node_count(&self) -> usize {
        self.time.len()
    }

    #[inline]
    pub fn infection_time(&self, node: NodeId) -> Option<f64> {
        self.time.get(node).copied().flatten()
    }

    #[inline]
    pub fn is_infected(&self, node: NodeId) -> bool {
        self.infection_time(node).is_some()
    }

    pub fn infected_count(&self) -> usize {
        self.infected
    }

    /// Infected nodes in ascending id order.
    pub fn infected(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.time
            .iter()
            .enumerate()
            .filter_map(|(v, t)| t.map(|_| v))
    }

    /// Infected nodes sorted by `(time, id)`.
    pub fn by_time(&self) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = self.infected().collect();
        nodes.sort_by(|&a, &b| {
            self.time[a]
                .unwrap()
                .total_cmp(&self.time[b].unwrap())
                .then(a.cmp(&b))
        });
        nodes
    }

    /// First infected non-source node (by id) without an infected neighbor
    /// that precedes it. With `allow_ties` an equal-time neighbor suffices.
    pub fn causality_violation(&self, g: &Graph, allow_ties: bool) -> Option<NodeId> {
        self.infected().find(|&v| {
            if v == self.source {
                return false;
            }
            let tv = self.time[v].unwrap();
            !g.neighbors(v).any(|w| match self.time[w] {
                Some(tw) => tw < tv || (allow_ties && tw == tv),
                None => false,
            })
        })
    }
}

/// Writes a cascade as `source<TAB>s` followed by `node<TAB>time` lines in
/// infection order.
pub fn write_cascade<W: Write>(c: &Cascade, mut out: W) -> Result<()> {
    writeln!(out, "source\t{}", c.source)?;
    for v in c.by_time() {
        writeln!(out, "{v}\t{}", c.time[v].unwrap())?;
    }
    Ok(())
}

/// Reads the format produced by [`write_cascade`].
pub fn parse_cascade<R: BufRead>(reader: R, node_count: usize) -> Result<Cascade> {
    let mut source = None;
    let mut times = Vec::new();
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
        if a == "source" {
            if source.is_some() {
                return Err(bad("repeated source header".into()));
            }
            source = Some(
                b.parse::<NodeId>()
                    .map_err(|_| bad(format!("{b:?} is not a node id")))?,
            );
            continue;
        }
        let node = a
            .parse::<NodeId>()
            .map_err(|_| bad(format!("{a:?} is not a node id")))?;
        let t = b
            .parse::<f64>()
            .map_err(|_| bad(format!("{b:?} is not a number")))?;
        times.push((node, t));
    }
    let source = source.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing source header".into(),
    })?;
    Cascade::new(source, node_count, times)
}

/// Identifies the random streams of one run: `(master_seed, run_index)`
/// fixes every draw the run makes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed {
    pub master_seed: u64,
    pub run_index: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, run_index: u64) -> Self {
        RngSeed {
            master_seed,
            run_index,
        }
    }

    /// Independent stream for one purpose (`lane`) within the run.
    pub fn rng(&self, lane: u64) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&lane.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(self.run_index);
        rng
    }
}

/// Smallest infected count satisfying `count >= fraction * n`.
pub fn stop_target(node_count: usize, stop_fraction: f64) -> usize {
    ((stop_fraction * node_count as f64) - 1e-9).ceil().max(1.0) as usize
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {p} is not in [0, 1]"
        )))
    }
}

fn check_stop(stop_fraction: f64) -> Result<()> {
    if stop_fraction > 0.0 && stop_fraction <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "stop fraction {stop_fraction} is not in (0, 1]"
        )))
    }
}

/// Susceptible-infected process in discrete rounds.
///
/// In every round each infected node infects each susceptible neighbor with
/// probability `p`. Stops after the first round at which at least
/// `stop_fraction * n` nodes are infected. Fails when the process can no
/// longer grow before reaching that count.
pub fn simulate_si<R: Rng + ?Sized>(
    g: &Graph,
    source: NodeId,
    p: f64,
    stop_fraction: f64,
    rng: &mut R,
) -> Result<Cascade> {
    g.check_node(source)?;
    check_probability("p", p)?;
    check_stop(stop_fraction)?;
    let n = g.node_count();
    let target = stop_target(n, stop_fraction);
    let mut time: Vec<Option<f64>> = vec![None; n];
    time[source] = Some(0.0);
    let mut count = 1;
    let mut active = vec![source];
    let mut round = 0u32;
    let mut fresh = Vec::new();

    while count < target {
        round += 1;
        fresh.clear();
        for &x in &active {
            for y in g.neighbors(x) {
                if time[y].is_none() && rng.gen_bool(p) {
                    time[y] = Some(round as f64);
                    fresh.push(y);
                }
            }
        }
        count += fresh.len();
        active.extend_from_slice(&fresh);
        active.retain(|&x| g.neighbors(x).any(|y| time[y].is_none()));
        if fresh.is_empty() && (active.is_empty() || p == 0.0) {
            return Err(Error::RunFailed(format!(
                "SI process stalled at {count} of {target} required infections"
            )));
        }
    }
    Ok(Cascade::from_times(source, time))
}

/// Independent cascade: every newly infected node gets one chance, in the
/// following round, to infect each susceptible neighbor with probability `p`.
pub fn simulate_ic<R: Rng + ?Sized>(
    g: &Graph,
    source: NodeId,
    p: f64,
    rng: &mut R,
) -> Result<Cascade> {
    g.check_node(source)?;
    check_probability("p", p)?;
    let mut time: Vec<Option<f64>> = vec![None; g.node_count()];
    time[source] = Some(0.0);
    let mut frontier = vec![source];
    let mut next = Vec::new();
    let mut round = 0u32;
    while !frontier.is_empty() {
        round += 1;
        next.clear();
        for &x in &frontier {
            for y in g.neighbors(x) {
                if time[y].is_none() && rng.gen_bool(p) {
                    time[y] = Some(round as f64);
                    next.push(y);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    Ok(Cascade::from_times(source, time))
}

/// Outcome of [`calibrate_ic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcCalibration {
    pub p: f64,
    /// Monte Carlo estimate of the infected fraction at `p`.
    pub estimate: f64,
    /// False when even `p = 1` stays below the target.
    pub reachable: bool,
}

/// Resolution of the probability grid searched by [`calibrate_ic`].
pub const IC_GRID: u32 = 256;

/// Mean infected fraction of IC runs at probability `p` from uniformly
/// random sources. The same `seed` reuses the same random numbers, so
/// estimates at different `p` are directly comparable.
pub fn estimate_ic_fraction(g: &Graph, p: f64, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.node_count();
    let mut total = 0usize;
    for _ in 0..trials {
        let source = rng.gen_range(0..n);
        total += simulate_ic(g, source, p, &mut rng)?.infected_count();
    }
    Ok(total as f64 / (trials as f64 * n as f64))
}

/// Finds the smallest `p` on a 1/256 grid whose estimated infected
/// fraction reaches `target_fraction`, by bisection.
pub fn calibrate_ic<R: Rng + ?Sized>(
    g: &Graph,
    target_fraction: f64,
    trials: usize,
    rng: &mut R,
) -> Result<IcCalibration> {
    if !(target_fraction > 0.0 && target_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target fraction {target_fraction} is not in (0, 1)"
        )));
    }
    if trials == 0 || g.node_count() == 0 {
        return Err(Error::InvalidParameter(
            "calibration needs trials and nodes".into(),
        ));
    }
    let seed: u64 = rng.gen();
    let estimate = |step: u32| estimate_ic_fraction(g, step as f64 / IC_GRID as f64, trials, seed);

    let at_zero = estimate(0)?;
    if at_zero >= target_fraction {
        return Ok(IcCalibration {
            p: 0.0,
            estimate: at_zero,
            reachable: true,
        });
    }
    let at_one = estimate(IC_GRID)?;
    if at_one < target_fraction {
        log::warn!("IC target {target_fraction} unreachable, best fraction {at_one:.4}");
        return Ok(IcCalibration {
            p: 1.0,
            estimate: at_one,
            reachable: false,
        });
    }
    // estimate(lo) < target <= estimate(hi)
    let (mut lo, mut hi, mut hi_estimate) = (0u32, IC_GRID, at_one);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        let e = estimate(mid)?;
        if e >= target_fraction {
            hi = mid;
            hi_estimate = e;
        } else {
            lo = mid;
        }
    }
    Ok(IcCalibration {
        p: hi as f64 / IC_GRID as f64,
        estimate: hi_estimate,
        reachable: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Arrival(f64, NodeId);

impl Eq for Arrival {}

impl Ord for Arrival {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Arrival {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Continuous-time cascade: every edge carries an independent
/// Exponential(`beta`) transmission delay and a node's infection time is its
/// earliest arrival time from the source. Only the first
/// `stop_fraction * n` arrivals are kept.
pub fn simulate_ct<R: Rng + ?Sized>(
    g: &Graph,
    source: NodeId,
    beta: f64,
    stop_fraction: f64,
    rng: &mut R,
) -> Result<Cascade> {
    let exp = Exp::new(beta)
        .ok()
        .filter(|_| beta > 0.0 && beta.is_finite())
        .ok_or_else(|| Error::InvalidParameter(format!("beta = {beta} must be positive")))?;
    let delays: Vec<f64> = (0..g.edge_count()).map(|_| exp.sample(rng)).collect();
    simulate_ct_with_delays(g, source, stop_fraction, &delays)
}

/// Earliest-arrival cascade over fixed per-edge delays, indexed by edge id.
pub fn simulate_ct_with_delays(
    g: &Graph,
    source: NodeId,
    stop_fraction: f64,
    delays: &[f64],
) -> Result<Cascade> {
    g.check_node(source)?;
    check_stop(stop_fraction)?;
    if delays.len() != g.edge_count() {
        return Err(Error::InvalidParameter(format!(
            "{} delays for {} edges",
            delays.len(),
            g.edge_count()
        )));
    }
    let n = g.node_count();
    let target = stop_target(n, stop_fraction);
    let mut best = vec![f64::INFINITY; n];
    let mut time: Vec<Option<f64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    best[source] = 0.0;
    heap.push(Arrival(0.0, source));
    let mut count = 0;
    while let Some(Arrival(t, x)) = heap.pop() {
        if time[x].is_some() || t > best[x] {
            continue;
        }
        time[x] = Some(t);
        count += 1;
        if count == target {
            return Ok(Cascade::from_times(source, time));
        }
        for (y, e) in g.incident(x) {
            let arrival = t + delays[e];
            if time[y].is_none() && arrival < best[y] {
                best[y] = arrival;
                heap.push(Arrival(arrival, y));
            }
        }
    }
    Err(Error::RunFailed(format!(
        "CT process reached {count} of {target} required infections"
    )))
}

/// Shortest-path propagation: infection time is hop distance from the
/// source. Whole distance layers are added until at least
/// `stop_fraction * n` nodes are infected.
pub fn simulate_sp(g: &Graph, source: NodeId, stop_fraction: f64) -> Result<Cascade> {
    g.check_node(source)?;
    check_stop(stop_fraction)?;
    let n = g.node_count();
    let target = stop_target(n, stop_fraction);
    let mut time: Vec<Option<f64>> = vec![None; n];
    time[source] = Some(0.0);
    let mut count = 1;
    let mut layer = vec![source];
    let mut next = Vec::new();
    let mut depth = 0.0;
    while count < target && !layer.is_empty() {
        depth += 1.0;
        next.clear();
        for &x in &layer {
            for y in g.neighbors(x) {
                if time[y].is_none() {
                    time[y] = Some(depth);
                    next.push(y);
                }
            }
        }
        count += next.len();
        std::mem::swap(&mut layer, &mut next);
    }
    if count < target {
        return Err(Error::RunFailed(format!(
            "SP process reached {count} of {target} required infections"
        )));
    }
    Ok(Cascade::from_times(source, time))
}

/// Observes each infected node independently with probability `q`, keeping
/// its true infection time. Empty samples are redrawn up to
/// [`SAMPLE_ATTEMPTS`] times.
pub fn sample_reports<R: Rng + ?Sized>(c: &Cascade, q: f64, rng: &mut R) -> Result<ReportSet> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} is not in (0, 1]")));
    }
    for _ in 0..SAMPLE_ATTEMPTS {
        let entries: Vec<(NodeId, f64)> = c
            .infected()
            .filter(|_| rng.gen_bool(q))
            .map(|v| (v, c.time[v].unwrap()))
            .collect();
        if !entries.is_empty() {
            return ReportSet::new(entries, c.node_count());
        }
    }
    Err(Error::RunFailed(format!(
        "report sample empty after {SAMPLE_ATTEMPTS} attempts"
    )))
}
