//! Exact invariant checks shared by the `invariants` and `acceptance`
//! targets. Each check returns a short detail string or a failure message.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use gpm::generator::generate_rgg_brute;
use gpm::geometry::{cap_area_fraction, chord_distance, radius_for_area, sample_uniform};
use gpm::graph_stats::{
    components, count_triangles, diameter_all_pairs, diameter_bounding, diameter_exact, diameter_ifub, eccentricities,
    SimpleGraph,
};
use gpm::io::write_graph;
use gpm::{attachment_distribution, generate, generate_with, GpmParams, GraphRecord, KernelTable, TraceMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = fn() -> Result<String, String>;

pub const EXACT_SUITE: &[(&str, Check)] = &[
    ("normalization", normalization),
    ("degree_sum", degree_sum),
    ("denominator_identity", denominator_identity),
    ("l_matches_brute_force", l_matches_brute_force),
    ("subgraph_of_rgg", subgraph_of_rgg),
    ("isolated_weight", isolated_weight),
    ("triangles_brute_force", triangles_brute_force),
    ("diameter_components_oracle", diameter_components_oracle),
    ("cap_round_trips", cap_round_trips),
    ("reproducibility", reproducibility),
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn random_params(rng: &mut ChaCha8Rng) -> GpmParams {
    let d = [1, 2, 2, 2, 3][rng.random_range(0..5)];
    let m = rng.random_range(1..=4);
    let delta = rng.random_range(0.05..4.0);
    let p = [0.01, 0.05, 0.2, 0.5, 1.0, rng.random_range(0.001..1.0)][rng.random_range(0..6)];
    GpmParams::new(d, m, delta, p).unwrap()
}

fn degrees_of_prefix(graph: &GraphRecord, n: usize) -> Vec<u64> {
    let mut deg = vec![0u64; n];
    for e in &graph.edges[..n * graph.m()] {
        deg[e.source as usize - 1] += 1;
        deg[e.target as usize - 1] += 1;
    }
    deg
}

/// Attachment probabilities sum to one within 1e-12 over 1000 random
/// states, for both kernels.
pub fn normalization() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for case in 0..1000 {
        let mut params = random_params(&mut rng);
        if case % 4 == 0 {
            let r = params.radius().unwrap();
            let table = KernelTable::new(vec![(0.0, 1.0), (0.5 * r, 1.5), (r, 0.25), (1.5 * r, 0.0)]).unwrap();
            params = params.with_kernel_table(table);
        }
        let n = rng.random_range(1..80);
        let (g, _) = generate_with(&params, n, rng.random(), TraceMode::Off).unwrap();
        let pos = sample_uniform(params.d, &mut rng);
        let placed = rng.random_range(0..params.m);
        let own = rng.random_range(0..=2 * placed as u64);
        let probs = attachment_distribution(&params, &g.positions, &g.degrees, &pos, own, placed).unwrap();
        ensure(probs.len() == n + 1 && probs.iter().all(|&q| q >= 0.0), || format!("case {case}: bad vector"))?;
        worst = worst.max((probs.iter().sum::<f64>() - 1.0).abs());
    }
    ensure(worst <= 1e-12, || format!("max |sum - 1| = {worst:e}"))?;
    Ok(format!("1000 cases, max |sum - 1| = {worst:.1e}"))
}

pub fn degree_sum() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..200 {
        let params = random_params(&mut rng);
        let n = rng.random_range(1..400);
        let (g, _) = generate_with(&params, n, rng.random(), TraceMode::Off).unwrap();
        let sum: u64 = g.degrees.iter().sum();
        ensure(sum == 2 * (params.m * n) as u64, || format!("case {case}: degree sum {sum} != 2mn"))?;
        ensure(g.degrees == degrees_of_prefix(&g, n), || format!("case {case}: degrees disagree with edges"))?;
    }
    Ok("200 graphs".into())
}

/// Every denominator equals `L(n) - m + i` in exact integer arithmetic.
pub fn denominator_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rows = 0;
    for case in 0..60 {
        let params = random_params(&mut rng);
        let n = rng.random_range(1..1500);
        let (_, trace) = generate(&params, n, rng.random()).unwrap();
        for row in &trace.rows {
            rows += 1;
            ensure(row.denominator_identity_holds(&params) == Some(true), || {
                format!("case {case}: identity fails at n = {}", row.n)
            })?;
        }
    }
    Ok(format!("{rows} trace rows"))
}

/// Trace values of `L(n)` and the candidate count against a scan over
/// the prefix graph.
pub fn l_matches_brute_force() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..30 {
        let params = random_params(&mut rng);
        let n = rng.random_range(1..300);
        let (g, trace) = generate(&params, n, rng.random()).unwrap();
        let cap = params.cap().unwrap();
        let m = params.m as f64;
        for row in &trace.rows {
            let k = row.n as usize;
            let deg = degrees_of_prefix(&g, k - 1);
            let x = &g.positions[k - 1];
            let mut l = m * (2.0 + params.delta);
            let mut count = 0;
            for (pos, &d) in g.positions[..k - 1].iter().zip(&deg) {
                if cap.contains_distance(chord_distance(pos, x).unwrap()) {
                    l += d as f64 + m * params.delta;
                    count += 1;
                }
            }
            ensure(row.candidates == count, || {
                format!("case {case}: n = {k} candidates {} vs {count}", row.candidates)
            })?;
            ensure((row.l - l).abs() <= 1e-9 * l, || format!("case {case}: n = {k} L {} vs {l}", row.l))?;
        }
    }
    Ok("30 graphs".into())
}

/// Every non-loop edge joins two vertices within distance `r`.
pub fn subgraph_of_rgg() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut edges = 0;
    for case in 0..100 {
        let params = random_params(&mut rng);
        let n = rng.random_range(2..300);
        let (g, _) = generate_with(&params, n, rng.random(), TraceMode::Off).unwrap();
        let rgg = generate_rgg_brute(&g.positions, params.radius().unwrap()).unwrap();
        let pairs: BTreeSet<(u32, u32)> = rgg.edges.iter().copied().collect();
        for e in g.edges.iter().filter(|e| !e.is_self_loop()) {
            edges += 1;
            let pair = (e.target.min(e.source), e.target.max(e.source));
            ensure(pairs.contains(&pair), || format!("case {case}: edge {pair:?} not in the RGG"))?;
        }
    }
    Ok(format!("{edges} edges"))
}

/// Isolated vertices carry weight `m(2 + delta)`.
pub fn isolated_weight() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut isolated = 0;
    for case in 0..100 {
        let m = rng.random_range(1..=4);
        let delta = rng.random_range(0.1..3.0);
        let params = GpmParams::new(2, m, delta, rng.random_range(0.001..0.02)).unwrap();
        let (g, _) = generate_with(&params, 200, rng.random(), TraceMode::Off).unwrap();
        let mut has_in = vec![false; g.n()];
        for e in g.edges.iter().filter(|e| !e.is_self_loop()) {
            has_in[e.target as usize - 1] = true;
        }
        for v in 1..=g.n() as u32 {
            let all_loops = g.out_edges(v).iter().all(|e| e.is_self_loop());
            let expected = all_loops && !has_in[v as usize - 1];
            ensure(g.is_isolated(v) == expected, || format!("case {case}: vertex {v} isolation flag"))?;
            if expected {
                isolated += 1;
                let w = g.weight(v);
                let target = m as f64 * (2.0 + delta);
                ensure((w - target).abs() <= 1e-12 * target, || format!("case {case}: weight {w} vs {target}"))?;
            }
        }
    }
    ensure(isolated > 0, || "no isolated vertices generated".into())?;
    Ok(format!("{isolated} isolated vertices"))
}

/// Brute force over vertex triples and slot triples.
pub fn triangles_by_enumeration(g: &GraphRecord) -> (u64, u64) {
    let n = g.n() as u32;
    let mult = |b: u32, a: u32| g.out_edges(b).iter().filter(|e| e.target == a).count() as u64;
    let (mut slots, mut distinct) = (0, 0);
    for a in 1..=n {
        for b in a + 1..=n {
            let ab = mult(b, a);
            if ab == 0 {
                continue;
            }
            for c in b + 1..=n {
                let s = ab * mult(c, a) * mult(c, b);
                slots += s;
                distinct += (s > 0) as u64;
            }
        }
    }
    (slots, distinct)
}

pub fn triangles_brute_force() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    for case in 0..300 {
        let params = random_params(&mut rng);
        let n = rng.random_range(1..=60);
        let (g, _) = generate_with(&params, n, rng.random(), TraceMode::Off).unwrap();
        let fast = count_triangles(&g);
        let (slots, distinct) = triangles_by_enumeration(&g);
        total += slots;
        ensure(fast.slots == slots && fast.distinct == distinct, || {
            format!("case {case}: {fast:?} vs ({slots}, {distinct})")
        })?;
    }
    ensure(total > 0, || "no triangles in any case".into())?;
    Ok(format!("300 graphs, {total} slot triangles"))
}

/// Floyd-Warshall distances; `u32::MAX` marks unreachable pairs.
pub fn all_distances(g: &SimpleGraph) -> Vec<Vec<u32>> {
    let n = g.len();
    let inf = u32::MAX;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
        for &w in g.neighbors(v) {
            if w as usize != v {
                row[w as usize] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == inf {
                continue;
            }
            for j in 0..n {
                if d[k][j] != inf && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn component_count(g: &SimpleGraph) -> usize {
    let mut seen = vec![false; g.len()];
    let mut count = 0;
    for s in 0..g.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
    }
    count
}

fn random_simple_graph(rng: &mut ChaCha8Rng) -> SimpleGraph {
    let n = rng.random_range(1..=300);
    let density = [0.5, 1.0, 1.5, 3.0][rng.random_range(0..4)] / n as f64;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < density {
                edges.push((i, j));
            }
        }
    }
    SimpleGraph::from_edges(n, edges)
}

/// Diameter algorithms and component counts against Floyd-Warshall and a
/// plain BFS, on generated graphs and sparse random graphs (often
/// disconnected), all with `n <= 300`.
pub fn diameter_components_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..160 {
        let (g, comps) = if case % 2 == 0 {
            let params = random_params(&mut rng);
            let n = rng.random_range(1..=300);
            let (graph, _) = generate_with(&params, n, rng.random(), TraceMode::Off).unwrap();
            let c = components(&graph);
            (SimpleGraph::from_graph(&graph), Some(c))
        } else {
            (random_simple_graph(&mut rng), None)
        };
        let dist = all_distances(&g);
        let ecc: Vec<u32> =
            dist.iter().map(|row| row.iter().copied().filter(|&x| x != u32::MAX).max().unwrap()).collect();
        let diam = ecc.iter().copied().max().unwrap();
        let sources: Vec<u32> = (0..g.len() as u32).collect();
        ensure(eccentricities(&g, &sources) == ecc, || format!("case {case}: eccentricities differ"))?;
        for (name, d) in [
            ("all_pairs", diameter_all_pairs(&g)),
            ("exact", diameter_exact(&g)),
            ("bounding", diameter_bounding(&g, None)),
            ("ifub", diameter_ifub(&g, None)),
        ] {
            ensure(d.exact && d.lower == diam && d.upper == diam, || format!("case {case}: {name} {d:?} vs {diam}"))?;
        }
        for budget in [1, 3] {
            let d = diameter_bounding(&g, Some(budget));
            ensure(d.lower <= diam && diam <= d.upper, || format!("case {case}: budget {budget} bounds {d:?}"))?;
        }
        if let Some(c) = comps {
            let expected = component_count(&g);
            ensure(c.count == expected, || format!("case {case}: {} components vs {expected}", c.count))?;
            ensure(c.sizes.iter().sum::<usize>() == g.len(), || format!("case {case}: sizes do not cover"))?;
        }
    }
    Ok("160 graphs".into())
}

/// `radius_for_area` inverts `cap_area_fraction`, and the closed forms for
/// `d = 1, 2` hold.
pub fn cap_round_trips() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for d in 1..=6 {
        for _ in 0..200 {
            let p = rng.random_range(1e-6..1.0);
            let r = radius_for_area(d, p).map_err(|e| e.to_string())?;
            let back = cap_area_fraction(d, r).map_err(|e| e.to_string())?;
            worst = worst.max((back - p).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("round-trip error {worst:e}"))?;
    for r in [0.01, 0.1, 0.2, 0.3] {
        let one = cap_area_fraction(1, r).unwrap();
        let two = cap_area_fraction(2, r).unwrap();
        let pi = std::f64::consts::PI;
        ensure((one - 2.0 / pi * (pi * r).asin()).abs() < 1e-12, || format!("d = 1 closed form at r = {r}"))?;
        ensure((two - pi * r * r).abs() < 1e-12, || format!("d = 2 closed form at r = {r}"))?;
    }
    Ok(format!("d = 1..6, max error {worst:.1e}"))
}

fn file_bytes(g: &GraphRecord, trace: &[gpm::TraceRow]) -> Vec<u8> {
    let mut out = Vec::new();
    write_graph(&mut out, g, trace).unwrap();
    out
}

/// Same seed, same bytes; trace mode and prefix length do not change the
/// graph.
pub fn reproducibility() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..40 {
        let params = random_params(&mut rng);
        let n = rng.random_range(1..2000);
        let seed = rng.random();
        let (a, ta) = generate(&params, n, seed).unwrap();
        let (b, tb) = generate(&params, n, seed).unwrap();
        ensure(file_bytes(&a, &ta.rows) == file_bytes(&b, &tb.rows), || format!("case {case}: bytes differ"))?;
        let (c, _) = generate_with(&params, n, seed, TraceMode::Off).unwrap();
        ensure(c == a, || format!("case {case}: trace mode changed the graph"))?;
        let k = rng.random_range(1..=n);
        let (short, _) = generate_with(&params, k, seed, TraceMode::Every(7)).unwrap();
        ensure(short == a.prefix(k), || format!("case {case}: prefix {k} differs"))?;
    }
    Ok("40 seeds".into())
}
