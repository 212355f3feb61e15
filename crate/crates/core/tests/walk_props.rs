mod common;

use proptest::prelude::*;
use tightwalk::hypergraph::{complete, generate, DiracParams, GraphKind};
use tightwalk::matching::{matching_average_weighting, AverageOptions, EdgeWeighting};
use tightwalk::walk::{
    empirical_position_law, run_walk, selfavoiding_distribution_at, stationarity_residual,
    stationary_distribution, step_distribution, Distribution, WalkConfig, WalkMode,
    DEFAULT_WALK_BUDGET,
};
use tightwalk::{KGraph, OrderedTuple, VertexSet};

fn dirac(n: usize, seed: u64) -> KGraph {
    generate(&GraphKind::Dirac(DiracParams::new(0.1)), n, 3, seed).unwrap().graph
}

fn average(g: &KGraph) -> EdgeWeighting {
    matching_average_weighting(g, AverageOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn step_laws_are_normalized_on_the_neighbourhood(n in 8usize..13, seed: u64, a in 0u32..8, b in 0u32..8) {
        prop_assume!(a != b);
        let g = dirac(n, seed);
        let x = average(&g);
        let t = OrderedTuple::new(vec![a, b]).unwrap();
        for mode in [WalkMode::Simple, WalkMode::SelfAvoiding] {
            let d = step_distribution(&g, &x, &t, t.as_set(), mode).unwrap();
            prop_assert!(d.is_normalized(1e-12));
            let nb = g.neighbors(t.as_set());
            if let Distribution::Vertices(m) = d {
                prop_assert!(m.keys().all(|&v| nb.contains(v)));
            }
        }
    }

    #[test]
    fn traces_are_tight_and_reproducible(n in 8usize..13, seed: u64, len in 1usize..6) {
        let g = dirac(n, seed);
        let x = average(&g);
        let cfg = WalkConfig::from_tuple(WalkMode::SelfAvoiding, OrderedTuple::new(vec![0, 1]).unwrap(), len, seed);
        let t = run_walk(&g, &x, &cfg).unwrap();
        prop_assert_eq!(&t, &run_walk(&g, &x, &cfg).unwrap());
        let set: VertexSet = t.vertices.iter().copied().collect();
        prop_assert_eq!(set.len(), t.vertices.len());
        for w in t.vertices.windows(3) {
            prop_assert!(g.contains_edge(w.iter().copied().collect()));
        }
    }

    #[test]
    fn stationary_vectors_are_fixed_points(n in 8usize..12, seed: u64) {
        let g = dirac(n, seed);
        let x = average(&g);
        let pi = stationary_distribution(&g, &x).unwrap();
        prop_assert!(stationarity_residual(&g, &x, &pi).unwrap() <= 1e-10);
    }
}

fn law_consistency(g: &KGraph, q: usize) {
    let x = average(g);
    let start = OrderedTuple::new(vec![0, 1]).unwrap();
    let exact = selfavoiding_distribution_at(g, &x, &start, q, DEFAULT_WALK_BUDGET).unwrap();
    let runs = 100_000u64;
    let cfg = WalkConfig::from_tuple(WalkMode::SelfAvoiding, start, q, 17);
    let (empirical, terminated) = empirical_position_law(g, &x, &cfg, q, runs).unwrap();
    assert_eq!(terminated, 0);
    for v in g.vertices() {
        let p = exact.vertex_prob(v);
        let tol = 4.0 * (p * (1.0 - p) / runs as f64).sqrt();
        assert!(
            (empirical.vertex_prob(v) - p).abs() <= tol.max(1e-12),
            "v={v} p={p} got {}",
            empirical.vertex_prob(v)
        );
    }
}

#[test]
fn monte_carlo_matches_exact_law() {
    law_consistency(&complete(6, 3), 3);
    law_consistency(&dirac(10, 3), 3);
}
