mod common;

use gpm::generator::generate_rgg_brute;
use gpm::geometry::{cap_area_fraction, chord_distance, radius_for_area, sample_uniform, SpherePoint};
use gpm::graph_stats::{count_triangles, diameter_exact, SimpleGraph};
use gpm::{attachment_distribution, generate_with, GpmParams, TraceMode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(check: common::Check) {
    if let Err(msg) = check() {
        panic!("{msg}");
    }
}

#[test]
fn normalization() {
    run(common::normalization);
}

#[test]
fn degree_sum() {
    run(common::degree_sum);
}

#[test]
fn denominator_identity() {
    run(common::denominator_identity);
}

#[test]
fn l_matches_brute_force() {
    run(common::l_matches_brute_force);
}

#[test]
fn subgraph_of_rgg() {
    run(common::subgraph_of_rgg);
}

#[test]
fn isolated_weight() {
    run(common::isolated_weight);
}

#[test]
fn triangles_brute_force() {
    run(common::triangles_brute_force);
}

#[test]
fn diameter_components_oracle() {
    run(common::diameter_components_oracle);
}

#[test]
fn cap_round_trips() {
    run(common::cap_round_trips);
}

#[test]
fn reproducibility() {
    run(common::reproducibility);
}

fn params_strategy() -> impl Strategy<Value = GpmParams> {
    (1usize..=3, 1usize..=4, 0.01f64..5.0, prop_oneof![Just(1.0), 0.001f64..1.0])
        .prop_map(|(d, m, delta, p)| GpmParams::new(d, m, delta, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_sum_to_one(params in params_strategy(), n in 1usize..60, seed: u64, placed_frac in 0.0f64..1.0) {
        let (g, _) = generate_with(&params, n, seed, TraceMode::Off).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let pos = sample_uniform(params.d, &mut rng);
        let placed = ((placed_frac * params.m as f64) as usize).min(params.m - 1);
        let probs = attachment_distribution(&params, &g.positions, &g.degrees, &pos, 2 * placed as u64, placed).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(probs.iter().all(|&q| q >= 0.0));
        prop_assert!(*probs.last().unwrap() > 0.0);
    }

    /// With a full cap the law ignores every position.
    #[test]
    fn full_cap_ignores_positions(m in 1usize..4, delta in 0.01f64..5.0, n in 1usize..50, seed: u64) {
        let params = GpmParams::new(2, m, delta, 1.0).unwrap();
        let (g, _) = generate_with(&params, n, seed, TraceMode::Off).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved: Vec<SpherePoint> = (0..n).map(|_| sample_uniform(2, &mut rng)).collect();
        let new = sample_uniform(2, &mut rng);
        let a = attachment_distribution(&params, &g.positions, &g.degrees, &new, 0, 0).unwrap();
        let b = attachment_distribution(&params, &moved, &g.degrees, &SpherePoint::pole(2), 0, 0).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn edges_stay_in_the_rgg(params in params_strategy(), n in 2usize..150, seed: u64) {
        let (g, _) = generate_with(&params, n, seed, TraceMode::Off).unwrap();
        let r = params.radius().unwrap();
        let rgg = generate_rgg_brute(&g.positions, r).unwrap();
        for e in g.edges.iter().filter(|e| !e.is_self_loop()) {
            let pair = (e.target, e.source);
            prop_assert!(rgg.edges.binary_search(&pair).is_ok());
            let dist = chord_distance(g.position(e.source), g.position(e.target)).unwrap();
            prop_assert!(params.cap().unwrap().contains_distance(dist));
        }
    }

    #[test]
    fn triangle_counts_match_enumeration(params in params_strategy(), n in 1usize..=60, seed: u64) {
        let (g, _) = generate_with(&params, n, seed, TraceMode::Off).unwrap();
        let fast = count_triangles(&g);
        prop_assert_eq!((fast.slots, fast.distinct), common::triangles_by_enumeration(&g));
    }

    #[test]
    fn cap_area_round_trip(d in 1usize..=8, p in 1e-8f64..=1.0) {
        let r = radius_for_area(d, p).unwrap();
        prop_assert!((cap_area_fraction(d, r).unwrap() - p).abs() <= 1e-9);
    }

    #[test]
    fn diameter_matches_floyd_warshall(n in 1usize..120, edges in prop::collection::vec((0usize..120, 0usize..120), 0..200)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let g = SimpleGraph::from_edges(n, edges);
        let dist = common::all_distances(&g);
        let diam = dist.iter().flatten().copied().filter(|&x| x != u32::MAX).max().unwrap();
        let d = diameter_exact(&g);
        prop_assert!(d.exact);
        prop_assert_eq!(d.lower, diam);
    }

    #[test]
    fn same_seed_same_graph(params in params_strategy(), n in 1usize..300, seed: u64, k in 1usize..300) {
        let (a, _) = generate_with(&params, n, seed, TraceMode::Full).unwrap();
        let (b, _) = generate_with(&params, n, seed, TraceMode::Off).unwrap();
        prop_assert_eq!(&a, &b);
        let k = k.min(n);
        let (c, _) = generate_with(&params, k, seed, TraceMode::Off).unwrap();
        prop_assert_eq!(c, a.prefix(k));
    }
}
