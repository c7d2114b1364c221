//! Structural statistics of generated graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, GpmError, Result};
use crate::generator::{EdgeRecord, GpmParams, GraphRecord, TraceRow, VertexId};
use crate::theory::{check_events, SlotEvent};

/// Triangle counts: `slots` counts `(a < b < c, t1, t2, t3)` with
/// `v_{b,t1} = a`, `v_{c,t2} = a`, `v_{c,t3} = b`; `distinct` counts vertex
/// triples joined by at least one edge on each side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCount {
    pub slots: u64,
    pub distinct: u64,
}

impl std::ops::AddAssign for TriangleCount {
    fn add_assign(&mut self, rhs: Self) {
        self.slots += rhs.slots;
        self.distinct += rhs.distinct;
    }
}

/// Triangles whose largest vertex is `c`, given the slot-ordered edge list
/// of a graph with out-degree `m` that contains `c`.
pub fn vertex_triangles(edges: &[EdgeRecord], m: usize, c: VertexId) -> TriangleCount {
    let out = |v: VertexId| &edges[(v as usize - 1) * m..v as usize * m];
    // Distinct non-loop targets of c with multiplicities.
    let mut targets: Vec<(VertexId, u64)> = Vec::with_capacity(m);
    for e in out(c).iter().filter(|e| !e.is_self_loop()) {
        match targets.iter_mut().find(|t| t.0 == e.target) {
            Some(t) => t.1 += 1,
            None => targets.push((e.target, 1)),
        }
    }
    let mut count = TriangleCount::default();
    for (i, &(x, mx)) in targets.iter().enumerate() {
        for &(y, my) in &targets[i + 1..] {
            let (a, b) = if x < y { (x, y) } else { (y, x) };
            let mult = out(b).iter().filter(|e| e.target == a).count() as u64;
            if mult > 0 {
                count.slots += mx * my * mult;
                count.distinct += 1;
            }
        }
    }
    count
}

pub fn count_triangles(graph: &GraphRecord) -> TriangleCount {
    let mut total = TriangleCount::default();
    for c in 1..=graph.n() as VertexId {
        total += vertex_triangles(&graph.edges, graph.m(), c);
    }
    total
}

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
    singletons: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        let mut uf = Self::default();
        for _ in 0..n {
            uf.push();
        }
        uf
    }

    /// Adds a new singleton element and returns its index.
    pub fn push(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id as u32);
        self.size.push(1);
        self.components += 1;
        self.singletons += 1;
        id
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.singletons -= (self.size[ra] == 1) as usize + (self.size[rb] == 1) as usize;
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn singletons(&self) -> usize {
        self.singletons
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    pub count: usize,
    pub isolated: usize,
    /// Sizes in decreasing order.
    pub sizes: Vec<usize>,
}

/// Components over non-loop edges; isolated vertices are singletons.
pub fn components(graph: &GraphRecord) -> Components {
    let mut uf = UnionFind::new(graph.n());
    for e in graph.edges.iter().filter(|e| !e.is_self_loop()) {
        uf.union(e.source as usize - 1, e.target as usize - 1);
    }
    let mut sizes = vec![0usize; graph.n()];
    for v in 0..graph.n() {
        let root = uf.find(v);
        sizes[root] += 1;
    }
    let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Components { count: uf.components(), isolated: uf.singletons(), sizes }
}

/// Simple undirected graph in compressed adjacency form: loops dropped,
/// parallel edges merged. Vertices are 0-based.
#[derive(Clone, Debug)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (a, b) in edges {
            if a != b {
                pairs.push((a as u32, b as u32));
                pairs.push((b as u32, a as u32));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &pairs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Self { offsets, neighbors: pairs.into_iter().map(|p| p.1).collect() }
    }

    pub fn from_graph(graph: &GraphRecord) -> Self {
        Self::from_edges(graph.n(), graph.edges.iter().map(|e| (e.source as usize - 1, e.target as usize - 1)))
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Fills `dist` with hop distances from `source` (`u32::MAX` when
    /// unreachable) and returns the vertices reached in BFS order.
    pub fn bfs(&self, source: usize, dist: &mut Vec<u32>, order: &mut Vec<u32>) {
        dist.clear();
        dist.resize(self.len(), u32::MAX);
        order.clear();
        dist[source] = 0;
        order.push(source as u32);
        let mut head = 0;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            let next = dist[v] + 1;
            for &w in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = next;
                    order.push(w);
                }
            }
        }
    }

    /// Largest finite distance from `source`.
    pub fn eccentricity(&self, source: usize) -> u32 {
        let mut dist = Vec::new();
        let mut order = Vec::new();
        self.bfs(source, &mut dist, &mut order);
        order.last().map_or(0, |&v| dist[v as usize])
    }
}

/// Diameter over connected pairs. `lower == upper` when `exact`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub lower: u32,
    pub upper: u32,
    pub exact: bool,
    /// Searches spent on sweeps and eccentricities (component labelling
    /// is not counted).
    pub bfs_runs: usize,
}

impl Diameter {
    pub fn value(&self) -> u32 {
        self.lower
    }
}

/// Graphs up to this size use all-pairs BFS by default.
pub const ALL_PAIRS_MAX: usize = 20_000;

/// Exact diameter: all-pairs BFS for `n <= 20000`; above that, bounded
/// eccentricity search followed by exact eccentricities of the vertices
/// the bounds could not rule out.
pub fn diameter(graph: &GraphRecord) -> Diameter {
    let g = SimpleGraph::from_graph(graph);
    if g.len() <= ALL_PAIRS_MAX {
        diameter_all_pairs(&g)
    } else {
        diameter_exact(&g)
    }
}

/// Eccentricity (largest finite distance) of each source, by breadth-first
/// search from 64 sources at a time with one bit per source.
pub fn eccentricities(g: &SimpleGraph, sources: &[u32]) -> Vec<u32> {
    sources.par_chunks(64).flat_map_iter(|chunk| eccentricity_batch(g, chunk)).collect()
}

fn eccentricity_batch(g: &SimpleGraph, sources: &[u32]) -> Vec<u32> {
    let n = g.len();
    let full = if sources.len() == 64 { u64::MAX } else { (1u64 << sources.len()) - 1 };
    let mut seen = vec![0u64; n];
    let mut frontier = vec![0u64; n];
    let mut next = vec![0u64; n];
    for (i, &s) in sources.iter().enumerate() {
        seen[s as usize] |= 1 << i;
        frontier[s as usize] |= 1 << i;
    }
    let mut ecc = vec![0u32; sources.len()];
    let mut level = 0;
    loop {
        level += 1;
        let mut reached = 0u64;
        for v in 0..n {
            if seen[v] == full {
                next[v] = 0;
                continue;
            }
            let mut bits = 0u64;
            for &w in g.neighbors(v) {
                bits |= frontier[w as usize];
            }
            bits &= !seen[v];
            next[v] = bits;
            reached |= bits;
        }
        if reached == 0 {
            break;
        }
        let mut bits = reached;
        while bits != 0 {
            ecc[bits.trailing_zeros() as usize] = level;
            bits &= bits - 1;
        }
        for v in 0..n {
            seen[v] |= next[v];
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    ecc
}

pub fn diameter_all_pairs(g: &SimpleGraph) -> Diameter {
    let sources: Vec<u32> = (0..g.len() as u32).collect();
    let best = eccentricities(g, &sources).into_iter().max().unwrap_or(0);
    Diameter { lower: best, upper: best, exact: true, bfs_runs: g.len() }
}

/// iFUB (iterative fringe upper bound) per connected component, seeded by a
/// double sweep. With a budget on the number of BFS runs the result may be
/// a certified interval instead of an exact value.
pub fn diameter_ifub(g: &SimpleGraph, budget: Option<usize>) -> Diameter {
    let n = g.len();
    let mut dist = Vec::new();
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    let mut runs = 0usize;
    let mut lower = 0u32;
    let mut upper = 0u32;
    let spent = |runs: &mut usize| {
        *runs += 1;
        budget.is_some_and(|b| *runs > b)
    };
    let mut out_of_budget = false;

    for start in 0..n {
        if seen[start] {
            continue;
        }
        if g.degree(start) == 0 {
            seen[start] = true;
            continue;
        }
        // Component of `start`; its highest-degree vertex seeds the sweep.
        g.bfs(start, &mut dist, &mut order);
        let component: Vec<u32> = order.clone();
        for &v in &component {
            seen[v as usize] = true;
        }
        if out_of_budget {
            // Unexplored component: only the trivial bound applies.
            let ecc = order.last().map_or(0, |&v| dist[v as usize]);
            lower = lower.max(ecc);
            upper = upper.max(2 * ecc);
            continue;
        }
        let hub = *component.iter().max_by_key(|&&v| (g.degree(v as usize), std::cmp::Reverse(v))).unwrap() as usize;

        // Double sweep: hub -> a -> b, then the midpoint of the a-b path.
        out_of_budget |= spent(&mut runs);
        g.bfs(hub, &mut dist, &mut order);
        let a = *order.last().unwrap() as usize;
        out_of_budget |= spent(&mut runs);
        g.bfs(a, &mut dist, &mut order);
        let b = *order.last().unwrap() as usize;
        let sweep = dist[b];
        let mut comp_lower = sweep;
        let mut mid = b;
        let target = sweep / 2;
        while dist[mid] > target {
            mid = *g.neighbors(mid).iter().find(|&&w| dist[w as usize] + 1 == dist[mid]).unwrap() as usize;
        }

        out_of_budget |= spent(&mut runs);
        g.bfs(mid, &mut dist, &mut order);
        let mut level = order.last().map_or(0, |&v| dist[v as usize]);
        comp_lower = comp_lower.max(level);
        let mut comp_upper = 2 * level;
        // Fringe vertices grouped by distance from the center.
        let mut by_level: Vec<Vec<u32>> = vec![Vec::new(); level as usize + 1];
        for &v in &order {
            by_level[dist[v as usize] as usize].push(v);
        }
        let mut bfs_dist = Vec::new();
        let mut bfs_order = Vec::new();
        while comp_upper > comp_lower && level > 0 && !out_of_budget {
            let mut fringe_max = 0u32;
            for &v in &by_level[level as usize] {
                if spent(&mut runs) {
                    out_of_budget = true;
                    break;
                }
                g.bfs(v as usize, &mut bfs_dist, &mut bfs_order);
                let ecc = bfs_order.last().map_or(0, |&w| bfs_dist[w as usize]);
                fringe_max = fringe_max.max(ecc);
            }
            comp_lower = comp_lower.max(fringe_max);
            if out_of_budget {
                break;
            }
            if comp_lower > 2 * (level - 1) {
                comp_upper = comp_lower;
            } else {
                comp_upper = 2 * (level - 1);
            }
            level -= 1;
        }
        comp_upper = comp_upper.max(comp_lower);
        lower = lower.max(comp_lower);
        upper = upper.max(comp_upper);
    }
    Diameter { lower, upper, exact: lower == upper, bfs_runs: runs }
}

/// Eccentricity bounding: every search from `v` tightens
/// `max(d, ecc(v) - d) <= ecc(w) <= ecc(v) + d` for all `w` at distance
/// `d`; sources alternate between the largest upper and smallest lower
/// bound among vertices that can still move either diameter bound. With a
/// budget the result may be a certified interval.
pub fn diameter_bounding(g: &SimpleGraph, budget: Option<usize>) -> Diameter {
    bound_eccentricities(g, budget).0
}

/// Searches spent per component before the remaining candidates are
/// resolved in bit-parallel batches.
const BOUNDING_ROUNDS: usize = 32;

/// Exact diameter for large graphs: a short bounding phase per component,
/// then exact eccentricities for every vertex whose upper bound still
/// exceeds the lower bound.
pub fn diameter_exact(g: &SimpleGraph) -> Diameter {
    let (bounds, live) = bound_eccentricities_per_component(g, BOUNDING_ROUNDS);
    let ecc = eccentricities(g, &live);
    let best = ecc.into_iter().max().unwrap_or(0).max(bounds.lower);
    Diameter { lower: best, upper: best, exact: true, bfs_runs: bounds.bfs_runs + live.len() }
}

fn bound_eccentricities(g: &SimpleGraph, budget: Option<usize>) -> (Diameter, Vec<u32>) {
    bound_components(g, |runs_total, _| budget.is_some_and(|b| runs_total >= b))
}

fn bound_eccentricities_per_component(g: &SimpleGraph, rounds: usize) -> (Diameter, Vec<u32>) {
    bound_components(g, |_, runs_here| runs_here >= rounds)
}

/// Runs the bounding loop on every component until `stop(total, in_component)`
/// says so. Returns the bounds and the vertices that could still raise the
/// lower bound.
fn bound_components(g: &SimpleGraph, stop: impl Fn(usize, usize) -> bool) -> (Diameter, Vec<u32>) {
    let n = g.len();
    let mut ecc_lo = vec![0u32; n];
    let mut ecc_hi = vec![u32::MAX; n];
    let mut dist = Vec::new();
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    let mut runs = 0usize;
    let mut lower = 0u32;
    let mut upper = 0u32;
    let mut unresolved = Vec::new();
    for start in 0..n {
        if seen[start] || g.degree(start) == 0 {
            seen[start] = true;
            continue;
        }
        g.bfs(start, &mut dist, &mut order);
        let mut live: Vec<u32> = order.clone();
        for &v in &live {
            seen[v as usize] = true;
        }
        let start_ecc = dist[*order.last().unwrap() as usize];
        let mut comp_lo = start_ecc;
        let mut comp_hi = 2 * start_ecc;
        let mut pick_high = true;
        let mut runs_here = 0;
        while comp_lo < comp_hi && !live.is_empty() && !stop(runs, runs_here) {
            let key = |v: &&u32| (g.degree(**v as usize), std::cmp::Reverse(**v));
            let v = if pick_high {
                let best = live.iter().map(|&v| ecc_hi[v as usize]).max().unwrap();
                *live.iter().filter(|&&v| ecc_hi[v as usize] == best).max_by_key(key).unwrap()
            } else {
                let best = live.iter().map(|&v| ecc_lo[v as usize]).min().unwrap();
                *live.iter().filter(|&&v| ecc_lo[v as usize] == best).max_by_key(key).unwrap()
            } as usize;
            pick_high = !pick_high;
            runs += 1;
            runs_here += 1;
            g.bfs(v, &mut dist, &mut order);
            let ecc = dist[*order.last().unwrap() as usize];
            comp_lo = comp_lo.max(ecc);
            let mut max_hi = 0u32;
            for &w in &order {
                let w = w as usize;
                let d = dist[w];
                ecc_lo[w] = ecc_lo[w].max(d.max(ecc - d));
                ecc_hi[w] = ecc_hi[w].min(ecc + d);
                max_hi = max_hi.max(ecc_hi[w]);
            }
            comp_hi = comp_hi.min(max_hi);
            live.retain(|&w| {
                let (lo, hi) = (ecc_lo[w as usize], ecc_hi[w as usize]);
                lo != hi && !(hi <= comp_lo && 2 * lo >= comp_hi)
            });
        }
        if comp_lo < comp_hi {
            // Only vertices whose eccentricity might exceed the lower bound
            // matter for the diameter.
            unresolved.extend(live.iter().filter(|&&w| ecc_hi[w as usize] > comp_lo));
        }
        lower = lower.max(comp_lo);
        upper = upper.max(comp_hi.max(comp_lo));
    }
    (Diameter { lower, upper, exact: lower == upper, bfs_runs: runs }, unresolved)
}

/// Highest degree, lowest id on ties.
pub fn max_degree(graph: &GraphRecord) -> Option<(VertexId, u64)> {
    let mut best: Option<(VertexId, u64)> = None;
    for (i, &d) in graph.degrees.iter().enumerate() {
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((i as VertexId + 1, d));
        }
    }
    best
}

/// `(degree, count)` pairs in increasing degree order.
pub fn degree_histogram(graph: &GraphRecord) -> Vec<(u64, u64)> {
    let mut hist = std::collections::BTreeMap::new();
    for &d in &graph.degrees {
        *hist.entry(d).or_insert(0u64) += 1;
    }
    hist.into_iter().collect()
}

/// Whether slot `t` of every listed `b` points at `a`.
pub fn events_hold(graph: &GraphRecord, events: &[SlotEvent]) -> Result<bool> {
    check_events(events, graph.m())?;
    if let Some(e) = events.iter().find(|e| e.b as usize > graph.n()) {
        return Err(GpmError::InvalidEvent(format!("vertex {} exceeds n = {}", e.b, graph.n())));
    }
    Ok(events_hold_in(&graph.edges, graph.m(), events))
}

/// Event check on a slot-ordered edge list that covers every listed `b`.
pub(crate) fn events_hold_in(edges: &[EdgeRecord], m: usize, events: &[SlotEvent]) -> bool {
    events.iter().all(|e| edges[(e.b as usize - 1) * m + e.t as usize - 1].target == e.a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub hits: usize,
    pub trials: usize,
    pub frequency: f64,
    /// Binomial standard error.
    pub stderr: f64,
}

impl Frequency {
    pub fn new(hits: usize, trials: usize) -> Self {
        let q = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        let stderr = if trials == 0 { 0.0 } else { (q * (1.0 - q) / trials as f64).sqrt() };
        Self { hits, trials, frequency: q, stderr }
    }
}

/// Fraction of graphs in which every event holds.
pub fn edge_event_frequency(ensemble: &[GraphRecord], events: &[SlotEvent]) -> Result<Frequency> {
    if let Some(first) = ensemble.first() {
        if ensemble.iter().any(|g| g.params != first.params) {
            return Err(invalid("ensemble graphs have different parameters"));
        }
    }
    let mut hits = 0;
    for g in ensemble {
        hits += events_hold(g, events)? as usize;
    }
    Ok(Frequency::new(hits, ensemble.len()))
}

/// Summary of `L(i) / ((2+δ) m p i)` over trace rows with `p i >= min_pi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LTraceSummary {
    pub rows: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Share of rows with `|ratio - 1| <= eps / (2+δ)`.
    pub band_fraction: f64,
}

/// Running accumulator behind [`LTraceSummary`].
#[derive(Clone, Debug)]
pub struct LTraceAccumulator {
    scale: f64,
    half_width: f64,
    min_i: f64,
    rows: usize,
    sum: f64,
    min: f64,
    max: f64,
    in_band: usize,
}

impl LTraceAccumulator {
    pub fn new(params: &GpmParams, eps: f64, min_pi: f64) -> Result<Self> {
        params.validate()?;
        if !(eps > 0.0 && eps < 2.0 + params.delta) {
            return Err(invalid(format!("eps must lie in (0, 2 + delta), got {eps}")));
        }
        Ok(Self {
            scale: (2.0 + params.delta) * params.m as f64 * params.p,
            half_width: eps / (2.0 + params.delta),
            min_i: min_pi / params.p,
            rows: 0,
            sum: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            in_band: 0,
        })
    }

    pub fn push(&mut self, row: &TraceRow) {
        let i = row.n as f64;
        if i < self.min_i {
            return;
        }
        let ratio = row.l / (self.scale * i);
        self.rows += 1;
        self.sum += ratio;
        self.min = self.min.min(ratio);
        self.max = self.max.max(ratio);
        self.in_band += ((ratio - 1.0).abs() <= self.half_width) as usize;
    }

    pub fn summary(&self) -> Option<LTraceSummary> {
        (self.rows > 0).then(|| LTraceSummary {
            rows: self.rows,
            mean: self.sum / self.rows as f64,
            min: self.min,
            max: self.max,
            band_fraction: self.in_band as f64 / self.rows as f64,
        })
    }
}

pub fn l_trace_summary(params: &GpmParams, rows: &[TraceRow], eps: f64, min_pi: f64) -> Result<Option<LTraceSummary>> {
    let mut acc = LTraceAccumulator::new(params, eps, min_pi)?;
    rows.iter().for_each(|r| acc.push(r));
    Ok(acc.summary())
}

/// Statistics that [`stats_report`] may leave out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StatsSelection {
    pub skip_triangles: bool,
    pub skip_diameter: bool,
    pub skip_histogram: bool,
}

/// Flat per-graph report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n: usize,
    pub m: usize,
    pub edges: usize,
    pub self_loops: usize,
    pub triangles_slots: Option<u64>,
    pub triangles_distinct: Option<u64>,
    pub max_degree: u64,
    pub max_degree_vertex: VertexId,
    pub degree_histogram: Option<Vec<(u64, u64)>>,
    pub components: usize,
    pub isolated: usize,
    pub connected: bool,
    pub diameter: Option<u32>,
    pub diameter_upper: Option<u32>,
    pub diameter_exact: Option<bool>,
    pub l_rows: Option<usize>,
    pub l_ratio_mean: Option<f64>,
    pub l_ratio_min: Option<f64>,
    pub l_ratio_max: Option<f64>,
    pub l_band_fraction: Option<f64>,
}

/// Default band half-width `ε` for L scoring.
pub const DEFAULT_EPS: f64 = 0.15;
/// Default threshold: rows with `p i >= 100` are scored.
pub const DEFAULT_MIN_PI: f64 = 100.0;

pub fn stats_report(graph: &GraphRecord, trace: &[TraceRow], select: StatsSelection) -> Result<StatsReport> {
    if graph.n() == 0 {
        return Err(invalid("graph has no vertices"));
    }
    let tri = (!select.skip_triangles).then(|| count_triangles(graph));
    let comps = components(graph);
    let (max_v, max_d) = max_degree(graph).expect("non-empty graph");
    let diam = (!select.skip_diameter).then(|| diameter(graph));
    let l = l_trace_summary(&graph.params, trace, DEFAULT_EPS, DEFAULT_MIN_PI)?;
    Ok(StatsReport {
        n: graph.n(),
        m: graph.m(),
        edges: graph.edges.len(),
        self_loops: graph.edges.iter().filter(|e| e.is_self_loop()).count(),
        triangles_slots: tri.map(|t| t.slots),
        triangles_distinct: tri.map(|t| t.distinct),
        max_degree: max_d,
        max_degree_vertex: max_v,
        degree_histogram: (!select.skip_histogram).then(|| degree_histogram(graph)),
        components: comps.count,
        isolated: comps.isolated,
        connected: comps.count == 1,
        diameter: diam.map(|d| d.lower),
        diameter_upper: diam.map(|d| d.upper),
        diameter_exact: diam.map(|d| d.exact),
        l_rows: l.map(|s| s.rows),
        l_ratio_mean: l.map(|s| s.mean),
        l_ratio_min: l.map(|s| s.min),
        l_ratio_max: l.map(|s| s.max),
        l_band_fraction: l.map(|s| s.band_fraction),
    })
}
