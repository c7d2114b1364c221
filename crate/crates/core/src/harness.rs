//! Reproducible ensemble experiments over parameter grids.
//!
//! Each `(parameter cell, replica)` pair is one generation run to the
//! largest `n` in the grid; smaller `n` values are prefixes of that run, so
//! every row can be reproduced with `generate(params, n, seed)`. Runs are
//! spread over the rayon pool and rows are sorted before they are returned.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{GpmError, Result};
use crate::generator::{GpmParams, GpmProcess, TraceMode};
use crate::graph_stats::{
    diameter_bounding, diameter_exact, events_hold_in, vertex_triangles, LTraceAccumulator, SimpleGraph, TriangleCount,
    UnionFind, DEFAULT_EPS, DEFAULT_MIN_PI,
};
use crate::theory::{check_events, connectivity_scale, SlotEvent};

pub const RESULTS_FORMAT_VERSION: u32 = 1;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "GPM_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Triangles,
    MaxDegree,
    Connectivity,
    Diameter,
    LConcentration,
    Eq31,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Triangles => "triangles",
            Self::MaxDegree => "max_degree",
            Self::Connectivity => "connectivity",
            Self::Diameter => "diameter",
            Self::LConcentration => "l_concentration",
            Self::Eq31 => "eq31",
        }
    }
}

fn default_d() -> Vec<usize> {
    vec![2]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamGrid {
    #[serde(default = "default_d")]
    pub d: Vec<usize>,
    pub m: Vec<usize>,
    pub delta: Vec<f64>,
    pub p: Vec<f64>,
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}
fn default_min_pi() -> f64 {
    DEFAULT_MIN_PI
}
fn default_low_x() -> f64 {
    0.5
}
fn default_high_x() -> f64 {
    20.0
}
fn default_min_pn() -> f64 {
    50.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentOptions {
    /// Band half-width for L scoring.
    #[serde(default = "default_eps")]
    pub epsilon: f64,
    /// Trace rows are scored when `p i >= min_pi`.
    #[serde(default = "default_min_pi")]
    pub min_pi: f64,
    /// Record every `k`-th trace row. Defaults to 1 for `l_concentration`
    /// and to no tracing otherwise.
    #[serde(default)]
    pub trace_stride: Option<usize>,
    /// Slot events `[a, b, t]` for `eq31`.
    #[serde(default)]
    pub events: Vec<[u32; 3]>,
    /// Cap on eccentricity searches per diameter computation; the diameter
    /// is then reported as certified bounds. Without it diameters are exact.
    #[serde(default)]
    pub diameter_bfs_budget: Option<usize>,
    /// Cells with `x = p^(m/(m-1)) n` at or below this are expected to be
    /// mostly disconnected (calibrated by pilot runs).
    #[serde(default = "default_low_x")]
    pub connectivity_low_x: f64,
    /// Cells with `x` at or above this and `p n >= connectivity_min_pn` are
    /// expected to be mostly connected (calibrated by pilot runs).
    #[serde(default = "default_high_x")]
    pub connectivity_high_x: f64,
    #[serde(default = "default_min_pn")]
    pub connectivity_min_pn: f64,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            epsilon: default_eps(),
            min_pi: default_min_pi(),
            trace_stride: None,
            events: Vec::new(),
            diameter_bfs_budget: None,
            connectivity_low_x: default_low_x(),
            connectivity_high_x: default_high_x(),
            connectivity_min_pn: default_min_pn(),
        }
    }
}

/// An experiment description, read from TOML:
///
/// ```toml
/// kind = "triangles"
/// master_seed = 1
/// replicas = 50
/// n = [2000, 8000, 32000, 128000]
///
/// [grid]
/// d = [2]
/// m = [2]
/// delta = [1.0]
/// p = [1.0, 0.3]
///
/// [options]
/// trace_stride = 101
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub master_seed: u64,
    pub replicas: usize,
    pub n: Vec<u64>,
    pub grid: ParamGrid,
    #[serde(default)]
    pub options: ExperimentOptions,
    /// Default destination for the CLI.
    #[serde(default)]
    pub output: Option<String>,
}

fn config_error(msg: impl Into<String>) -> GpmError {
    GpmError::InvalidConfig(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form, hex encoded.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_toml().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn events(&self) -> Vec<SlotEvent> {
        self.options.events.iter().map(|&[a, b, t]| SlotEvent::new(a, b, t)).collect()
    }

    pub fn trace_stride(&self) -> Option<usize> {
        match (self.options.trace_stride, self.kind) {
            (Some(0), _) => None,
            (Some(k), _) => Some(k),
            (None, ExperimentKind::LConcentration) => Some(1),
            (None, _) => None,
        }
    }

    /// Parameter cells in grid order (`d`, `m`, `delta`, `p`, outermost
    /// first).
    pub fn cells(&self) -> Vec<GpmParams> {
        let g = &self.grid;
        let mut out = Vec::new();
        for &d in &g.d {
            for &m in &g.m {
                for &delta in &g.delta {
                    for &p in &g.p {
                        out.push(GpmParams { d, m, delta, p, kernel: Default::default() });
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(config_error("replicas must be at least 1"));
        }
        let g = &self.grid;
        if self.n.is_empty() || g.d.is_empty() || g.m.is_empty() || g.delta.is_empty() || g.p.is_empty() {
            return Err(config_error("n, d, m, delta and p grids must be non-empty"));
        }
        if self.n.contains(&0) {
            return Err(config_error("n values must be at least 1"));
        }
        for params in self.cells() {
            params.validate().map_err(|e| config_error(e.to_string()))?;
            if self.kind == ExperimentKind::Connectivity && params.m < 2 {
                return Err(config_error("connectivity experiments need m >= 2"));
            }
        }
        let o = &self.options;
        if !(o.epsilon > 0.0) || !(o.min_pi >= 0.0) {
            return Err(config_error("epsilon must be positive and min_pi non-negative"));
        }
        if let Some(delta) = g.delta.iter().find(|&&d| o.epsilon >= 2.0 + d) {
            return Err(config_error(format!("epsilon must be below 2 + delta = {}", 2.0 + delta)));
        }
        if self.kind == ExperimentKind::Eq31 {
            let events = self.events();
            if events.is_empty() {
                return Err(config_error("eq31 experiments need at least one event"));
            }
            let min_m = *g.m.iter().min().unwrap();
            check_events(&events, min_m).map_err(|e| config_error(e.to_string()))?;
            let max_b = events.iter().map(|e| e.b as u64).max().unwrap();
            if let Some(n) = self.n.iter().find(|&&n| n < max_b) {
                return Err(config_error(format!("n = {n} is smaller than event vertex {max_b}")));
            }
        }
        Ok(())
    }
}

/// Seed of replica `replica` in cell `cell`: a SplitMix64 hash chain over
/// the three inputs.
pub fn derive_seed(master: u64, cell: usize, replica: usize) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(master) ^ cell as u64) ^ replica as u64)
}

/// One `(cell, n, replica)` measurement. Columns that do not apply to the
/// experiment kind are empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub kind: ExperimentKind,
    pub cell: usize,
    pub d: usize,
    pub m: usize,
    pub delta: f64,
    pub p: f64,
    pub n: u64,
    pub replica: usize,
    pub seed: u64,
    pub triangles_slots: Option<u64>,
    pub triangles_distinct: Option<u64>,
    pub t_over_log_n: Option<f64>,
    pub max_degree: Option<u64>,
    pub log_max_degree: Option<f64>,
    pub components: Option<u64>,
    pub isolated: Option<u64>,
    pub connected: Option<bool>,
    pub scale_x: Option<f64>,
    pub diameter: Option<u32>,
    pub diameter_upper: Option<u32>,
    pub diameter_exact: Option<bool>,
    pub diam_over_log_n: Option<f64>,
    pub l_stride: Option<u64>,
    pub l_rows: Option<u64>,
    pub l_ratio_mean: Option<f64>,
    pub l_band_fraction: Option<f64>,
    pub event_hit: Option<bool>,
}

impl ResultRow {
    pub fn params(&self) -> GpmParams {
        GpmParams { d: self.d, m: self.m, delta: self.delta, p: self.p, kernel: Default::default() }
    }
}

fn run_replica(config: &ExperimentConfig, cell: usize, params: &GpmParams, replica: usize) -> Result<Vec<ResultRow>> {
    let seed = derive_seed(config.master_seed, cell, replica);
    let stride = config.trace_stride();
    let mode = match stride {
        Some(1) => TraceMode::Full,
        Some(k) => TraceMode::Every(k),
        None => TraceMode::Off,
    };
    let kind = config.kind;
    let m = params.m;
    let events = config.events();
    let mut process = GpmProcess::new(params.clone(), seed, mode)?;
    let mut uf = UnionFind::default();
    let mut triangles = TriangleCount::default();
    let mut l_acc = match stride {
        Some(_) => Some(LTraceAccumulator::new(params, config.options.epsilon, config.options.min_pi)?),
        None => None,
    };
    let track_components = matches!(kind, ExperimentKind::Connectivity | ExperimentKind::Diameter);

    let mut checkpoints = config.n.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in &checkpoints {
        while (process.n() as u64) < n {
            let id = process.add_vertex().id;
            if kind == ExperimentKind::Triangles {
                triangles += vertex_triangles(process.edges(), m, id);
            }
            if track_components {
                let v = uf.push();
                for e in &process.edges()[process.edges().len() - m..] {
                    if !e.is_self_loop() {
                        uf.union(v, e.target as usize - 1);
                    }
                }
            }
            if let Some(acc) = l_acc.as_mut() {
                if let Some(row) = process.trace_rows().last() {
                    acc.push(row);
                }
                process.clear_trace();
            }
        }
        let log_n = (n as f64).ln();
        let mut row = ResultRow {
            kind,
            cell,
            d: params.d,
            m,
            delta: params.delta,
            p: params.p,
            n,
            replica,
            seed,
            triangles_slots: None,
            triangles_distinct: None,
            t_over_log_n: None,
            max_degree: None,
            log_max_degree: None,
            components: None,
            isolated: None,
            connected: None,
            scale_x: None,
            diameter: None,
            diameter_upper: None,
            diameter_exact: None,
            diam_over_log_n: None,
            l_stride: None,
            l_rows: None,
            l_ratio_mean: None,
            l_band_fraction: None,
            event_hit: None,
        };
        match kind {
            ExperimentKind::Triangles => {
                row.triangles_slots = Some(triangles.slots);
                row.triangles_distinct = Some(triangles.distinct);
                row.t_over_log_n = (n > 1).then(|| triangles.slots as f64 / log_n);
            }
            ExperimentKind::MaxDegree => {
                let max = process.degrees().iter().copied().max().unwrap_or(0);
                row.max_degree = Some(max);
                row.log_max_degree = Some((max as f64).ln());
            }
            ExperimentKind::Connectivity => {
                row.components = Some(uf.components() as u64);
                row.isolated = Some(uf.singletons() as u64);
                row.connected = Some(uf.components() == 1);
                row.scale_x = Some(connectivity_scale(params, n)?);
            }
            ExperimentKind::Diameter => {
                let g = SimpleGraph::from_edges(
                    n as usize,
                    process.edges().iter().map(|e| (e.source as usize - 1, e.target as usize - 1)),
                );
                let diam = match config.options.diameter_bfs_budget {
                    Some(budget) => diameter_bounding(&g, Some(budget)),
                    None => diameter_exact(&g),
                };
                row.components = Some(uf.components() as u64);
                row.connected = Some(uf.components() == 1);
                row.diameter = Some(diam.lower);
                row.diameter_upper = Some(diam.upper);
                row.diameter_exact = Some(diam.exact);
                row.diam_over_log_n = (n > 1).then(|| diam.lower as f64 / log_n);
            }
            ExperimentKind::LConcentration => {}
            ExperimentKind::Eq31 => {
                row.event_hit = Some(events_hold_in(process.edges(), m, &events));
            }
        }
        if let (Some(acc), Some(k)) = (l_acc.as_ref(), stride) {
            row.l_stride = Some(k as u64);
            let summary = acc.summary();
            row.l_rows = Some(summary.map_or(0, |s| s.rows as u64));
            row.l_ratio_mean = summary.map(|s| s.mean);
            row.l_band_fraction = summary.map(|s| s.band_fraction);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs every `(cell, replica)` on the current rayon pool. Rows come back
/// sorted by `(cell, n, replica)`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let cells = config.cells();
    let tasks: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..config.replicas).map(move |r| (c, r))).collect();
    let chunks: Vec<Vec<ResultRow>> =
        tasks.par_iter().map(|&(c, r)| run_replica(config, c, &cells[c], r)).collect::<Result<_>>()?;
    let mut rows: Vec<ResultRow> = chunks.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.cell, r.n, r.replica));
    Ok(rows)
}

/// Thread count from `GPM_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// Runs on a dedicated pool with `threads` workers (or the rayon default).
pub fn run_experiment_with_threads(config: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<ResultRow>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| GpmError::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(config))
}

/// Columns that [`aggregate`] can summarize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    TrianglesSlots,
    TrianglesDistinct,
    MaxDegree,
    Components,
    Isolated,
    Connected,
    Diameter,
    DiamOverLogN,
    LRatioMean,
    LBandFraction,
    EventHit,
}

/// How cell means are regressed on `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// `mean ~ slope * ln n`.
    LinearInLogN,
    /// `ln mean ~ slope * ln n`.
    LogLog,
}

impl Statistic {
    pub fn value(&self, row: &ResultRow) -> Option<f64> {
        let b = |x: Option<bool>| x.map(|v| v as u8 as f64);
        match self {
            Self::TrianglesSlots => row.triangles_slots.map(|v| v as f64),
            Self::TrianglesDistinct => row.triangles_distinct.map(|v| v as f64),
            Self::MaxDegree => row.max_degree.map(|v| v as f64),
            Self::Components => row.components.map(|v| v as f64),
            Self::Isolated => row.isolated.map(|v| v as f64),
            Self::Connected => b(row.connected),
            Self::Diameter => row.diameter.map(f64::from),
            Self::DiamOverLogN => row.diam_over_log_n,
            Self::LRatioMean => row.l_ratio_mean,
            Self::LBandFraction => row.l_band_fraction,
            Self::EventHit => b(row.event_hit),
        }
    }

    pub fn fit(&self) -> Option<FitKind> {
        match self {
            Self::TrianglesSlots | Self::TrianglesDistinct | Self::Diameter => Some(FitKind::LinearInLogN),
            Self::MaxDegree => Some(FitKind::LogLog),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub params: GpmParams,
    pub n: u64,
    pub replicas: usize,
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub cell: usize,
    pub params: GpmParams,
    pub kind: FitKind,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub statistic: Statistic,
    pub cells: Vec<CellSummary>,
    pub fits: Vec<Fit>,
}

impl Summary {
    pub fn fit_for(&self, cell: usize) -> Option<&Fit> {
        self.fits.iter().find(|f| f.cell == cell)
    }
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn ols(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(GpmError::InsufficientData("regression needs at least 2 paired points".into()));
    }
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(GpmError::InsufficientData("regression needs distinct x values".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Per-cell means with standard errors, plus a regression on `ln n` per
/// parameter cell for statistics that have one (which then needs at least
/// three `n` values per cell).
pub fn aggregate(rows: &[ResultRow], statistic: Statistic) -> Result<Summary> {
    let mut groups: BTreeMap<(usize, u64), (GpmParams, Vec<f64>)> = BTreeMap::new();
    for row in rows {
        if let Some(v) = statistic.value(row) {
            groups.entry((row.cell, row.n)).or_insert_with(|| (row.params(), Vec::new())).1.push(v);
        }
    }
    if groups.is_empty() {
        return Err(GpmError::InsufficientData(format!("no rows carry {statistic:?}")));
    }
    let cells: Vec<CellSummary> = groups
        .into_iter()
        .map(|((cell, n), (params, values))| {
            let (mean, stderr) = mean_stderr(&values);
            CellSummary { cell, params, n, replicas: values.len(), mean, stderr }
        })
        .collect();
    let mut fits = Vec::new();
    if let Some(kind) = statistic.fit() {
        let mut by_cell: BTreeMap<usize, Vec<&CellSummary>> = BTreeMap::new();
        for c in &cells {
            by_cell.entry(c.cell).or_default().push(c);
        }
        for (cell, points) in by_cell {
            if points.len() < 3 {
                return Err(GpmError::InsufficientData(format!(
                    "cell {cell} has {} n values; regression needs at least 3",
                    points.len()
                )));
            }
            let x: Vec<f64> = points.iter().map(|c| (c.n as f64).ln()).collect();
            let y: Vec<f64> = points
                .iter()
                .map(|c| match kind {
                    FitKind::LinearInLogN => c.mean,
                    FitKind::LogLog => c.mean.ln(),
                })
                .collect();
            let (slope, intercept) = ols(&x, &y)?;
            fits.push(Fit { cell, params: points[0].params.clone(), kind, slope, intercept, points: points.len() });
        }
    }
    Ok(Summary { statistic, cells, fits })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityPoint {
    pub cell: usize,
    pub params: GpmParams,
    pub n: u64,
    /// `p^(m/(m-1)) n`.
    pub x: f64,
    pub replicas: usize,
    pub probability: f64,
    pub stderr: f64,
}

/// Empirical `P(connected)` per `(cell, n)` against the scale variable.
/// Cells with equal `x` stay separate.
pub fn connectivity_curve(rows: &[ResultRow]) -> Result<Vec<ConnectivityPoint>> {
    let summary = aggregate(rows, Statistic::Connected)?;
    summary
        .cells
        .into_iter()
        .map(|c| {
            let q = c.mean;
            Ok(ConnectivityPoint {
                x: connectivity_scale(&c.params, c.n)?,
                stderr: (q * (1.0 - q) / c.replicas as f64).sqrt(),
                probability: q,
                replicas: c.replicas,
                n: c.n,
                cell: c.cell,
                params: c.params,
            })
        })
        .collect()
}

/// Adjacent `n` pairs (same cell) where `P(connected)` drops by more than
/// three combined standard errors, and the number of pairs checked.
pub fn monotonicity_violations(curve: &[ConnectivityPoint]) -> (usize, usize) {
    let mut violations = 0;
    let mut pairs = 0;
    for w in curve.windows(2) {
        if w[0].cell != w[1].cell {
            continue;
        }
        pairs += 1;
        let se = (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        if w[1].probability < w[0].probability - 3.0 * se {
            violations += 1;
        }
    }
    (violations, pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PooledL {
    /// Vertices represented (scored rows times trace stride).
    pub weight: f64,
    pub mean: f64,
    pub band_fraction: f64,
}

/// Pools L statistics over runs, using the last checkpoint of each
/// `(cell, replica)` and weighting rows by their trace stride.
pub fn pooled_l_concentration(rows: &[ResultRow]) -> Option<PooledL> {
    let mut last: BTreeMap<(ExperimentKind, usize, usize, u64), &ResultRow> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.l_rows.is_some_and(|k| k > 0)) {
        let key = (row.kind, row.cell, row.replica, row.seed);
        if last.get(&key).is_none_or(|r| r.n < row.n) {
            last.insert(key, row);
        }
    }
    let mut weight = 0.0;
    let mut mean = 0.0;
    let mut band = 0.0;
    for row in last.values() {
        let w = (row.l_rows? * row.l_stride?) as f64;
        weight += w;
        mean += w * row.l_ratio_mean?;
        band += w * row.l_band_fraction?;
    }
    (weight > 0.0).then(|| PooledL { weight, mean: mean / weight, band_fraction: band / weight })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

/// Writes rows after a versioned header: a `#` comment line for CSV, a
/// header object for JSON lines.
pub fn write_results<W: Write>(
    out: &mut W,
    rows: &[ResultRow],
    config: &ExperimentConfig,
    format: OutputFormat,
) -> Result<()> {
    let digest = config.digest();
    match format {
        OutputFormat::Csv => {
            writeln!(out, "# gpm-results format_version={RESULTS_FORMAT_VERSION} config_sha256={digest}")?;
            let mut writer = csv::Writer::from_writer(&mut *out);
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        OutputFormat::Jsonl => {
            serde_json::to_writer(
                &mut *out,
                &serde_json::json!({ "format_version": RESULTS_FORMAT_VERSION, "config_sha256": digest }),
            )?;
            out.write_all(b"\n")?;
            for row in rows {
                serde_json::to_writer(&mut *out, row)?;
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

/// Reads rows written by [`write_results`] in CSV form.
pub fn read_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    reader.deserialize().map(|r| r.map_err(GpmError::from)).collect()
}
