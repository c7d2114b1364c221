//! The sequential geometric preferential attachment process.
//!
//! Vertex `n` lands uniformly on the sphere and then places `m` edges one
//! at a time. Before edge `i + 1` (with `i` edges already placed) the target
//! is drawn with probability
//!
//! ```text
//! P(k)  = f(D(V_n, V_k)) (deg_k + m delta) / Z         for k < n
//! P(n)  = (deg_n + m delta + m - i) / Z                (self-loop)
//! Z     = sum_{k < n} f(D(V_n, V_k)) (deg_k + m delta) + deg_n + m delta + m - i
//! ```
//!
//! where degrees are those of the partially built graph and a self-loop
//! adds 2 to `deg_n`. For the indicator kernel `Z = L(n) - m + i` with
//! `L(n) = sum_{k < n, D <= r} W_k + m (2 + delta)`.
//!
//! Two exact samplers are used. Small candidate sets are enumerated once per
//! vertex (through a latitude-band grid on `S^2`) into a local prefix-sum
//! tree. Large ones are sampled by rejection: propose `k` from a global
//! Fenwick tree over all weights and accept when `k` is inside the cap
//! (or with probability `f(D) / max f`). The choice depends only on the
//! vertex index, so output is fully determined by `(params, seed)` and a
//! run to `n` is a prefix of any longer run with the same seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, GpmError, Result};
use crate::geometry::{chord_distance_unchecked, sample_uniform, CapSpec, SpherePoint};
use crate::kernel::{KernelTable, PreferenceKernel};
use crate::sampling::FenwickTree;
use crate::spatial::BandGrid;

/// 1-based vertex id, matching `V_1, V_2, ...`.
pub type VertexId = u32;

/// Kernel selection as stored in parameter sets and graph files.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelChoice {
    /// `1{D <= r}` with `r` derived from `p`.
    #[default]
    Indicator,
    /// Tabulated kernel; every previous vertex is a candidate.
    Table { points: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpmParams {
    pub d: usize,
    pub m: usize,
    pub delta: f64,
    pub p: f64,
    #[serde(default)]
    pub kernel: KernelChoice,
}

impl GpmParams {
    pub fn new(d: usize, m: usize, delta: f64, p: f64) -> Result<Self> {
        let params = Self { d, m, delta, p, kernel: KernelChoice::Indicator };
        params.validate()?;
        Ok(params)
    }

    pub fn with_kernel_table(mut self, table: KernelTable) -> Self {
        self.kernel = KernelChoice::Table { points: table.points().to_vec() };
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(invalid("d must be at least 1"));
        }
        if self.m == 0 {
            return Err(invalid("m must be at least 1"));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(invalid(format!("delta must be > 0, got {}", self.delta)));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(invalid(format!("p must lie in (0, 1], got {}", self.p)));
        }
        if let KernelChoice::Table { points } = &self.kernel {
            KernelTable::new(points.clone())?;
        }
        Ok(())
    }

    /// Detection cap of area `p`.
    pub fn cap(&self) -> Result<CapSpec> {
        CapSpec::from_area(self.d, self.p)
    }

    /// Chord radius `r` of the detection cap.
    pub fn radius(&self) -> Result<f64> {
        Ok(self.cap()?.r)
    }

    pub fn kernel(&self) -> Result<PreferenceKernel> {
        Ok(match &self.kernel {
            KernelChoice::Indicator => PreferenceKernel::Indicator { radius: self.radius()? },
            KernelChoice::Table { points } => PreferenceKernel::Table(KernelTable::new(points.clone())?),
        })
    }

    pub fn is_indicator(&self) -> bool {
        matches!(self.kernel, KernelChoice::Indicator)
    }

    /// `m * delta`, the fitness part of every weight.
    pub fn fitness(&self) -> f64 {
        self.m as f64 * self.delta
    }
}

/// Edge `e_{source, slot} = (V_source, V_target)`; a self-loop when
/// `target == source`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: VertexId,
    pub slot: u32,
    pub target: VertexId,
}

impl EdgeRecord {
    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A generated multigraph.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphRecord {
    pub params: GpmParams,
    pub seed: u64,
    pub positions: Vec<SpherePoint>,
    /// `m * n` edges ordered by `(source, slot)`.
    pub edges: Vec<EdgeRecord>,
    /// Self-loops count 2.
    pub degrees: Vec<u64>,
}

impl GraphRecord {
    /// Assembles a graph from positions and edges, recomputing degrees and
    /// checking the slot layout.
    pub fn from_parts(
        params: GpmParams,
        seed: u64,
        positions: Vec<SpherePoint>,
        edges: Vec<EdgeRecord>,
    ) -> Result<Self> {
        params.validate()?;
        let n = positions.len();
        let m = params.m;
        if edges.len() != n * m {
            return Err(invalid(format!("expected {} edges for n = {n}, m = {m}, got {}", n * m, edges.len())));
        }
        let mut degrees = vec![0u64; n];
        for (idx, e) in edges.iter().enumerate() {
            let source = (idx / m + 1) as VertexId;
            let slot = (idx % m + 1) as u32;
            if e.source != source || e.slot != slot {
                return Err(invalid(format!(
                    "edge {} is ({}, {}) but slot order requires ({source}, {slot})",
                    idx + 1,
                    e.source,
                    e.slot
                )));
            }
            if e.target == 0 || e.target > e.source {
                return Err(invalid(format!(
                    "edge ({}, {}) has target {} outside 1..={}",
                    e.source, e.slot, e.target, e.source
                )));
            }
            degrees[e.source as usize - 1] += 1;
            degrees[e.target as usize - 1] += 1;
        }
        Ok(Self { params, seed, positions, edges, degrees })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    pub fn position(&self, v: VertexId) -> &SpherePoint {
        &self.positions[v as usize - 1]
    }

    pub fn degree(&self, v: VertexId) -> u64 {
        self.degrees[v as usize - 1]
    }

    /// `deg(v) + m delta`.
    pub fn weight(&self, v: VertexId) -> f64 {
        self.degree(v) as f64 + self.params.fitness()
    }

    /// The `m` out-edges of `v` in slot order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeRecord] {
        let m = self.m();
        let start = (v as usize - 1) * m;
        &self.edges[start..start + m]
    }

    /// All out-edges are self-loops and nothing attached to `v`.
    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.out_edges(v).iter().all(EdgeRecord::is_self_loop) && self.degree(v) == 2 * self.m() as u64
    }

    /// The graph `GPM_n` for `n <= self.n()`.
    pub fn prefix(&self, n: usize) -> GraphRecord {
        let n = n.min(self.n());
        let edges = self.edges[..n * self.m()].to_vec();
        let mut degrees = vec![0u64; n];
        for e in &edges {
            degrees[e.source as usize - 1] += 1;
            degrees[e.target as usize - 1] += 1;
        }
        GraphRecord {
            params: self.params.clone(),
            seed: self.seed,
            positions: self.positions[..n].to_vec(),
            edges,
            degrees,
        }
    }
}

/// Exact integer bookkeeping for the indicator kernel, where every weight
/// sum is `degrees + terms * m delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactWeights {
    /// Degree part of `L(n)`: candidate degrees plus `2m`.
    pub l_degrees: u64,
    /// Number of `m delta` terms in `L(n)`: candidates plus one.
    pub weight_terms: u64,
    /// Degree part of the denominator observed before each edge.
    pub denominator_degrees: Vec<u64>,
}

/// Per-vertex audit of the attachment normalizer.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub n: u64,
    pub l: f64,
    /// Previous vertices inside the detection region (or with `f(D) > 0`).
    pub candidates: u64,
    /// Denominator observed before edge `i + 1`, `i = 0..m`.
    pub denominators: Vec<f64>,
    pub exact: Option<ExactWeights>,
}

impl TraceRow {
    /// For the indicator kernel, whether every observed denominator equals
    /// `L(n) - m + i` exactly. `None` for other kernels.
    pub fn denominator_identity_holds(&self, params: &GpmParams) -> Option<bool> {
        let exact = self.exact.as_ref()?;
        let m = params.m as u64;
        let fitness = params.fitness();
        let ok = exact.denominator_degrees.iter().enumerate().all(|(i, &den)| {
            let expected = exact.l_degrees - m + i as u64;
            den == expected && self.denominators[i] == expected as f64 + exact.weight_terms as f64 * fitness
        });
        Some(ok && exact.denominator_degrees.len() == params.m)
    }
}

/// Which vertices get a trace row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceMode {
    Full,
    /// Vertices `1, 1 + k, 1 + 2k, ...`.
    Every(usize),
    Off,
}

impl TraceMode {
    pub fn records(&self, n: usize) -> bool {
        match *self {
            TraceMode::Full => true,
            TraceMode::Every(k) => (n - 1).is_multiple_of(k.max(1)),
            TraceMode::Off => false,
        }
    }

    /// How many vertices each recorded row stands for.
    pub fn stride(&self) -> usize {
        match *self {
            TraceMode::Full => 1,
            TraceMode::Every(k) => k.max(1),
            TraceMode::Off => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationTrace {
    pub mode: TraceMode,
    pub rows: Vec<TraceRow>,
}

/// Borrowed view of the vertex just added.
#[derive(Debug)]
pub struct VertexStep<'a> {
    pub id: VertexId,
    pub position: &'a SpherePoint,
    pub edges: &'a [EdgeRecord],
    pub trace: Option<&'a TraceRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Strategy {
    Enumerate,
    Reject,
}

/// Random geometric graphs use brute force below this expected degree.
const GRID_MIN_EXPECTED: f64 = 64.0;
/// General kernels are enumerated while the graph is this small.
const TABLE_ENUMERATE_MAX: usize = 256;

/// A running generation.
pub struct GpmProcess {
    params: GpmParams,
    cap: CapSpec,
    kernel: PreferenceKernel,
    indicator: bool,
    full_cap: bool,
    fitness: f64,
    kernel_max: f64,
    rng: ChaCha8Rng,
    positions: Vec<SpherePoint>,
    degrees: Vec<u64>,
    edges: Vec<EdgeRecord>,
    weights: FenwickTree,
    grid: Option<BandGrid>,
    total_degree: u64,
    trace_mode: TraceMode,
    trace: Vec<TraceRow>,
    candidates: Vec<(usize, f64)>,
}

impl GpmProcess {
    pub fn new(params: GpmParams, seed: u64, trace_mode: TraceMode) -> Result<Self> {
        params.validate()?;
        let cap = params.cap()?;
        let kernel = params.kernel()?;
        let indicator = params.is_indicator();
        let full_cap = indicator && cap.is_full();
        let grid = (indicator && !full_cap && params.d == 2).then(|| BandGrid::new(cap.angle()));
        Ok(Self {
            fitness: params.fitness(),
            kernel_max: kernel.max_weight(),
            params,
            cap,
            kernel,
            indicator,
            full_cap,
            rng: ChaCha8Rng::seed_from_u64(seed),
            positions: Vec::new(),
            degrees: Vec::new(),
            edges: Vec::new(),
            weights: FenwickTree::new(),
            grid,
            total_degree: 0,
            trace_mode,
            trace: Vec::new(),
            candidates: Vec::new(),
        })
    }

    pub fn params(&self) -> &GpmParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn positions(&self) -> &[SpherePoint] {
        &self.positions
    }

    pub fn trace_rows(&self) -> &[TraceRow] {
        &self.trace
    }

    /// Drops the trace rows collected so far (for long runs that consume
    /// rows as they are produced).
    pub fn clear_trace(&mut self) {
        self.trace.clear();
    }

    fn strategy(&self, old: usize) -> Strategy {
        if old == 0 {
            return Strategy::Enumerate;
        }
        if !self.indicator {
            return if old <= TABLE_ENUMERATE_MAX { Strategy::Enumerate } else { Strategy::Reject };
        }
        if self.full_cap {
            return Strategy::Reject;
        }
        let p = self.cap.p;
        let expected = p * old as f64;
        let enumerate_cost = if self.grid.is_some() { 3.0 * expected + 32.0 } else { old as f64 };
        let reject_cost = self.params.m as f64 * ((old as f64 + 1.0).log2() + 4.0) / p;
        if enumerate_cost <= reject_cost {
            Strategy::Enumerate
        } else {
            Strategy::Reject
        }
    }

    /// Previous vertices with positive kernel weight and their kernel
    /// factor, in index order when `sorted`.
    fn collect_candidates(&mut self, pos: &[f64], sorted: bool) {
        let mut out = std::mem::take(&mut self.candidates);
        out.clear();
        let old = self.positions.len();
        if self.indicator {
            if self.full_cap {
                out.extend((0..old).map(|k| (k, 1.0)));
            } else {
                let r = self.cap.r;
                let positions = &self.positions;
                let mut push = |k: usize| {
                    if chord_distance_unchecked(positions[k].coords(), pos) <= r {
                        out.push((k, 1.0));
                    }
                };
                match &self.grid {
                    Some(grid) => {
                        grid.visit_candidates(pos, self.cap.angle(), |id| push(id as usize));
                        if sorted {
                            out.sort_unstable_by_key(|c| c.0);
                        }
                    }
                    None => (0..old).for_each(push),
                }
            }
        } else {
            for (k, x) in self.positions.iter().enumerate() {
                let f = self.kernel.eval(chord_distance_unchecked(x.coords(), pos));
                if f > 0.0 {
                    out.push((k, f));
                }
            }
        }
        self.candidates = out;
    }

    fn candidate_mass(&self) -> f64 {
        self.candidates.iter().map(|&(k, f)| f * (self.degrees[k] as f64 + self.fitness)).sum()
    }

    fn candidate_degrees(&self) -> u64 {
        if self.full_cap {
            self.total_degree
        } else {
            self.candidates.iter().map(|&(k, _)| self.degrees[k]).sum()
        }
    }

    /// Adds the next vertex and its `m` edges.
    pub fn add_vertex(&mut self) -> VertexStep<'_> {
        let m = self.params.m;
        let n = self.positions.len() + 1;
        let old = n - 1;
        let pos = sample_uniform(self.params.d, &mut self.rng);
        let strategy = self.strategy(old);
        let traced = self.trace_mode.records(n);
        let need_candidates = strategy == Strategy::Enumerate || (traced && !self.full_cap);
        if need_candidates {
            self.collect_candidates(pos.coords(), strategy == Strategy::Enumerate);
        } else {
            self.candidates.clear();
        }
        let candidate_count = if self.full_cap { old } else { self.candidates.len() } as u64;

        // Every non-self target of the indicator kernel is a candidate, so
        // the candidate degree sum only needs one scan per traced step.
        let mut cand_degrees = if traced && self.indicator { self.candidate_degrees() } else { 0 };
        let mut row = traced.then(|| {
            let two_m_fitness = 2.0 * m as f64 + self.fitness;
            if self.indicator {
                let l_degrees = cand_degrees + 2 * m as u64;
                let weight_terms = candidate_count + 1;
                TraceRow {
                    n: n as u64,
                    l: l_degrees as f64 + weight_terms as f64 * self.fitness,
                    candidates: candidate_count,
                    denominators: Vec::with_capacity(m),
                    exact: Some(ExactWeights { l_degrees, weight_terms, denominator_degrees: Vec::with_capacity(m) }),
                }
            } else {
                TraceRow {
                    n: n as u64,
                    l: self.candidate_mass() + two_m_fitness,
                    candidates: candidate_count,
                    denominators: Vec::with_capacity(m),
                    exact: None,
                }
            }
        });

        let mut local = (strategy == Strategy::Enumerate).then(|| {
            let w: Vec<f64> =
                self.candidates.iter().map(|&(k, f)| f * (self.degrees[k] as f64 + self.fitness)).collect();
            FenwickTree::from_weights(&w)
        });

        let mut own_degree = 0u64;
        let id = n as VertexId;
        for i in 0..m {
            let remaining = (m - i) as u64;
            if let Some(row) = row.as_mut() {
                match row.exact.as_mut() {
                    Some(exact) => {
                        let den = cand_degrees + own_degree + remaining;
                        exact.denominator_degrees.push(den);
                        row.denominators.push(den as f64 + exact.weight_terms as f64 * self.fitness);
                    }
                    None => {
                        let den = self.candidate_mass() + own_degree as f64 + self.fitness + remaining as f64;
                        row.denominators.push(den);
                    }
                }
            }
            let self_weight = own_degree as f64 + self.fitness + remaining as f64;
            let target = match local.as_mut() {
                Some(tree) => {
                    let mass = tree.total();
                    let u = self.rng.random::<f64>() * (mass + self_weight);
                    if u >= mass || tree.is_empty() {
                        None
                    } else {
                        let j = tree.find(u);
                        tree.add(j, self.candidates[j].1);
                        Some(self.candidates[j].0)
                    }
                }
                None => self.reject_sample(&pos, self_weight),
            };
            match target {
                Some(k) => {
                    cand_degrees += 1;
                    self.degrees[k] += 1;
                    self.weights.add(k, 1.0);
                    self.total_degree += 1;
                    own_degree += 1;
                    self.edges.push(EdgeRecord { source: id, slot: i as u32 + 1, target: k as VertexId + 1 });
                }
                None => {
                    own_degree += 2;
                    self.edges.push(EdgeRecord { source: id, slot: i as u32 + 1, target: id });
                }
            }
        }

        self.total_degree += own_degree;
        self.degrees.push(own_degree);
        self.weights.push(own_degree as f64 + self.fitness);
        if let Some(grid) = self.grid.as_mut() {
            grid.insert(old as u32, pos.coords());
        }
        self.positions.push(pos);
        if let Some(row) = row {
            self.trace.push(row);
        }
        let edge_start = self.edges.len() - m;
        VertexStep {
            id,
            position: &self.positions[old],
            edges: &self.edges[edge_start..],
            trace: if traced { self.trace.last() } else { None },
        }
    }

    /// Proposes from all previous weights (scaled by `max f`) plus the
    /// self-loop weight, accepting by kernel value. `None` is a self-loop.
    fn reject_sample(&mut self, pos: &SpherePoint, self_weight: f64) -> Option<usize> {
        let scale = self.kernel_max;
        let mass = self.weights.total() * scale;
        loop {
            let u = self.rng.random::<f64>() * (mass + self_weight);
            if u >= mass {
                return None;
            }
            let k = self.weights.find(u / scale);
            if self.full_cap {
                return Some(k);
            }
            let dist = chord_distance_unchecked(self.positions[k].coords(), pos.coords());
            if self.indicator {
                if dist <= self.cap.r {
                    return Some(k);
                }
            } else {
                let f = self.kernel.eval(dist);
                if self.rng.random::<f64>() * scale < f {
                    return Some(k);
                }
            }
        }
    }

    /// Snapshot of the current graph.
    pub fn graph(&self, seed: u64) -> GraphRecord {
        GraphRecord {
            params: self.params.clone(),
            seed,
            positions: self.positions.clone(),
            edges: self.edges.clone(),
            degrees: self.degrees.clone(),
        }
    }

    pub fn finish(self, seed: u64) -> (GraphRecord, GenerationTrace) {
        let graph = GraphRecord {
            params: self.params,
            seed,
            positions: self.positions,
            edges: self.edges,
            degrees: self.degrees,
        };
        (graph, GenerationTrace { mode: self.trace_mode, rows: self.trace })
    }
}

/// Runs the process for `n` vertices with a full trace.
pub fn generate(params: &GpmParams, n: usize, seed: u64) -> Result<(GraphRecord, GenerationTrace)> {
    generate_with(params, n, seed, TraceMode::Full)
}

pub fn generate_with(
    params: &GpmParams,
    n: usize,
    seed: u64,
    trace: TraceMode,
) -> Result<(GraphRecord, GenerationTrace)> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut process = GpmProcess::new(params.clone(), seed, trace)?;
    for _ in 0..n {
        process.add_vertex();
    }
    Ok(process.finish(seed))
}

/// Probability of each target for the next edge of a new vertex at
/// `new_position`, given previous `positions`/`degrees`, the new vertex's
/// current degree and the number of edges it has placed. Entry `k - 1` is
/// vertex `k`; the last entry is the self-loop.
pub fn attachment_distribution(
    params: &GpmParams,
    positions: &[SpherePoint],
    degrees: &[u64],
    new_position: &SpherePoint,
    new_degree: u64,
    edges_placed: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    if edges_placed >= params.m {
        return Err(invalid(format!("edges_placed = {edges_placed} must be below m = {}", params.m)));
    }
    if positions.len() != degrees.len() {
        return Err(invalid("positions and degrees differ in length"));
    }
    let kernel = params.kernel()?;
    let cap = params.cap()?;
    let fitness = params.fitness();
    let mut probs = Vec::with_capacity(positions.len() + 1);
    for (x, &deg) in positions.iter().zip(degrees) {
        if x.coords().len() != new_position.coords().len() {
            return Err(GpmError::DimensionMismatch { left: x.dim(), right: new_position.dim() });
        }
        let dist = chord_distance_unchecked(x.coords(), new_position.coords());
        let f = match kernel {
            PreferenceKernel::Indicator { .. } => {
                if cap.contains_distance(dist) {
                    1.0
                } else {
                    0.0
                }
            }
            _ => kernel.eval(dist),
        };
        probs.push(f * (deg as f64 + fitness));
    }
    probs.push(new_degree as f64 + fitness + (params.m - edges_placed) as f64);
    let z: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|q| *q /= z);
    Ok(probs)
}

/// Random geometric graph on the same vertex positions.
#[derive(Clone, Debug, PartialEq)]
pub struct RggRecord {
    pub radius: f64,
    pub n: usize,
    /// Pairs `(i, j)` with `i < j`, 1-based, sorted.
    pub edges: Vec<(VertexId, VertexId)>,
}

impl RggRecord {
    pub fn neighbors(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i as usize - 1].push(j);
            adj[j as usize - 1].push(i);
        }
        adj
    }
}

fn rgg_cap(positions: &[SpherePoint], r: f64) -> Result<CapSpec> {
    let d = positions.first().map(SpherePoint::dim).unwrap_or(2).max(1);
    if let Some(bad) = positions.iter().find(|x| x.dim() != d) {
        return Err(GpmError::DimensionMismatch { left: d, right: bad.dim() });
    }
    CapSpec::from_radius(d, r)
}

/// `(i, j)` adjacent iff `D(V_i, V_j) <= r`. Uses the band grid when
/// `d = 2` and the expected degree `n p` exceeds 64.
pub fn generate_rgg(positions: &[SpherePoint], r: f64) -> Result<RggRecord> {
    let cap = rgg_cap(positions, r)?;
    if cap.d == 2 && !cap.is_full() && positions.len() as f64 * cap.p > GRID_MIN_EXPECTED {
        generate_rgg_indexed(positions, r)
    } else {
        generate_rgg_brute(positions, r)
    }
}

pub fn generate_rgg_brute(positions: &[SpherePoint], r: f64) -> Result<RggRecord> {
    let cap = rgg_cap(positions, r)?;
    let mut edges = Vec::new();
    for i in 0..positions.len() {
        for j in i + 1..positions.len() {
            if cap.contains_distance(chord_distance_unchecked(positions[i].coords(), positions[j].coords())) {
                edges.push((i as VertexId + 1, j as VertexId + 1));
            }
        }
    }
    Ok(RggRecord { radius: r, n: positions.len(), edges })
}

pub fn generate_rgg_indexed(positions: &[SpherePoint], r: f64) -> Result<RggRecord> {
    let cap = rgg_cap(positions, r)?;
    if cap.d != 2 {
        return Err(invalid("the band grid index only covers d = 2"));
    }
    let mut grid = BandGrid::new(cap.angle());
    for (i, x) in positions.iter().enumerate() {
        grid.insert(i as u32, x.coords());
    }
    let mut edges = Vec::new();
    let mut found = Vec::new();
    for (i, x) in positions.iter().enumerate() {
        found.clear();
        grid.visit_candidates(x.coords(), cap.angle(), |j| {
            let j = j as usize;
            if j > i && cap.contains_distance(chord_distance_unchecked(x.coords(), positions[j].coords())) {
                found.push(j);
            }
        });
        found.sort_unstable();
        edges.extend(found.iter().map(|&j| (i as VertexId + 1, j as VertexId + 1)));
    }
    Ok(RggRecord { radius: r, n: positions.len(), edges })
}
