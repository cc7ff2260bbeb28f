use std::collections::BTreeMap;

use lapspread::constructor::{base_routing_diam2_with, construct, Side};
use lapspread::generators::{labeled_graph, random_gnp};
use lapspread::graph6::{encode_graph6, parse_graph6};
use lapspread::oracle::min_congestion_routing;
use lapspread::routing::{spectral_bound_check, validate_routing, weighted_congestion};
use lapspread::scan::{scan, Corpus, ScanOptions};
use lapspread::spectral::{complement_spectrum_check, lambda2};
use lapspread::{Graph, Path, Routing};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn permuted(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.order(), g.edges().into_iter().map(|(a, b)| (perm[a], perm[b]))).unwrap()
}

fn graph_and_perm(n_max: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (2..=n_max, 0.0f64..=1.0, any::<u64>()).prop_flat_map(|(n, p, seed)| {
        let g = random_gnp(n, p, seed).unwrap();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// A random simple path from `s` to `t` found by depth-first search with
/// shuffled neighbor order.
fn random_path(g: &Graph, s: usize, t: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    fn dfs(g: &Graph, t: usize, stack: &mut Vec<usize>, seen: &mut [bool], rng: &mut ChaCha8Rng) -> bool {
        let cur = *stack.last().unwrap();
        if cur == t {
            return true;
        }
        let mut next: Vec<usize> = g.neighbor_indices(cur).filter(|&x| !seen[x]).collect();
        next.shuffle(rng);
        for x in next {
            seen[x] = true;
            stack.push(x);
            if dfs(g, t, stack, seen, rng) {
                return true;
            }
            stack.pop();
        }
        false
    }
    let mut seen = vec![false; g.order()];
    seen[s] = true;
    let mut stack = vec![s];
    assert!(dfs(g, t, &mut stack, &mut seen, rng), "graph is connected");
    stack
}

fn random_routing(g: &Graph, rng: &mut ChaCha8Rng) -> Routing {
    let mut r = Routing::new();
    for s in 0..g.order() {
        for t in s + 1..g.order() {
            r.insert(Path::new(random_path(g, s, t, rng)).unwrap());
        }
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_is_label_invariant((g, perm) in graph_and_perm(5)) {
        prop_assume!(g.is_connected());
        let a = min_congestion_routing(&g).unwrap().w;
        let b = min_congestion_routing(&permuted(&g, &perm)).unwrap().w;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn congestion_profile_is_label_invariant((g, perm) in graph_and_perm(9), seed in any::<u64>()) {
        prop_assume!(g.is_connected());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_routing(&g, &mut rng);
        let moved = r.relabel(|v| perm[v]);
        let h = permuted(&g, &perm);
        let before = weighted_congestion(&g, &r).unwrap();
        let after = weighted_congestion(&h, &moved).unwrap();
        let mut lhs: Vec<u64> = before.per_edge.values().copied().collect();
        let mut rhs: Vec<u64> = after.per_edge.values().copied().collect();
        lhs.sort_unstable();
        rhs.sort_unstable();
        prop_assert_eq!(lhs, rhs);
        for ((a, b), w) in &before.per_edge {
            prop_assert_eq!(after.get(perm[*a], perm[*b]), *w);
        }
    }

    /// Every routing, not only a good one, certifies λ2 >= n / w.
    #[test]
    fn any_valid_routing_bounds_lambda2(n in 2usize..=9, p in 0.2f64..=1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, seed).unwrap();
        prop_assume!(g.is_connected());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
        let r = random_routing(&g, &mut rng);
        prop_assert!(validate_routing(&g, &r).is_valid());
        let report = spectral_bound_check(&g, &r).unwrap();
        prop_assert!(report.holds, "{:?}", report);
    }

    #[test]
    fn construction_is_total(n in 2usize..=12, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, seed).unwrap();
        let cert = construct(&g);
        let complement = g.complement();
        let side = cert.side.pick(&g, &complement);
        prop_assert!(side.is_connected());
        prop_assert!(cert.routing_valid);
        prop_assert!(validate_routing(side, &cert.routing).is_valid());
        prop_assert_eq!(weighted_congestion(side, &cert.routing).unwrap().w, cert.w());
        prop_assert!(cert.w() >= 1);
        let bound = spectral_bound_check(side, &cert.routing).unwrap();
        prop_assert!(bound.holds);
        if cert.certified {
            prop_assert!(cert.bound_ok);
            prop_assert!(!cert.is_fallback());
        }
    }

    #[test]
    fn base_rule_respects_2n_minus_3(n in 2usize..=14, p in 0.5f64..=1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, seed).unwrap();
        prop_assume!(g.diameter().at_most(2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let r = base_routing_diam2_with(&g, |c| rng.gen_range(0..c.len())).unwrap();
            prop_assert!(validate_routing(&g, &r).is_valid());
            prop_assert!(weighted_congestion(&g, &r).unwrap().w <= 2 * n as u64 - 3);
        }
    }

    #[test]
    fn complement_identity_on_larger_graphs(n in 2usize..=24, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, seed).unwrap();
        prop_assert!(complement_spectrum_check(&g).unwrap().holds);
    }

    #[test]
    fn graph6_round_trip_up_to_62(n in 1usize..=62, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let g = random_gnp(n, p, seed).unwrap();
        let text = encode_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(text.as_bytes()).unwrap(), g);
    }
}

#[test]
fn lambda2_is_positive_exactly_on_connected_graphs() {
    for code in 0..1u64 << 10 {
        let g = labeled_graph(5, code).unwrap();
        assert_eq!(lambda2(&g).unwrap() > 1e-9, g.is_connected(), "{g:?}");
    }
}

#[test]
fn relabeled_construction_keeps_labels() {
    let g = random_gnp(8, 0.5, 11).unwrap().with_labels(vec![40, 41, 7, 9, 100, 3, 5, 60]).unwrap();
    let cert = construct(&g);
    let labels: Vec<usize> = g.labels().to_vec();
    for path in cert.routing.paths() {
        assert!(path.vertices().iter().all(|v| labels.contains(v)));
    }
    assert_eq!(cert.routing.len(), 28);
}

#[test]
fn scans_are_deterministic() {
    let corpus = Corpus::Sample { n: 8, p: 0.45, seed: 3, count: 300 };
    let run = |parallel| {
        let mut lines = Vec::new();
        let r = scan(&corpus, &ScanOptions { parallel, ..Default::default() }, |rec| lines.push(rec.to_line()))
            .unwrap();
        (lines, r.render_aggregate())
    };
    let a = run(true);
    assert_eq!(a, run(true));
    assert_eq!(a, run(false));
}

#[test]
fn graph_side_constructions_never_beat_the_optimum() {
    let mut by_n: BTreeMap<usize, u64> = BTreeMap::new();
    for n in 3..=5 {
        for code in 0..1u64 << (n * (n - 1) / 2) {
            let g = labeled_graph(n, code).unwrap();
            if !g.is_connected() {
                continue;
            }
            let cert = construct(&g);
            if cert.side == Side::Graph {
                let opt = min_congestion_routing(&g).unwrap();
                assert!(cert.w() >= opt.w, "{g:?}");
                *by_n.entry(n).or_default() += 1;
            }
        }
    }
    assert!(by_n.values().all(|&c| c > 0));
}
