//! Property tests for generic rigidity: cone and gluing lemmas, monotonicity.

use g2lab::graph::Graph;
use g2lab::rigidity::*;
use proptest::prelude::*;

fn arb_graph(max_n: u32) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), (n * (n - 1) / 2) as usize).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b)));
            let edges: Vec<(u32, u32)> = pairs.zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            Graph::new(0..n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cone_lemma(g in arb_graph(12), d in 2usize..5, seed in any::<u64>()) {
        let apex = g.fresh_vertex();
        let cone = cone_graph(&g, apex).unwrap();
        let k = kernel_dim(&cone, d + 1, DEFAULT_TRIALS, seed);
        prop_assert_eq!(kernel_dim(&g, d, DEFAULT_TRIALS, seed), k);
        if k > 0 {
            prop_assert!(participating_vertices(&cone, d + 1, seed).contains(&apex));
        }
    }

    #[test]
    fn adding_an_edge_raises_rank_by_at_most_one(g in arb_graph(10), d in 1usize..4, a in 0u32..10, b in 0u32..10) {
        prop_assume!(a != b && a < g.n() as u32 && b < g.n() as u32 && !g.has_edge(a, b));
        let h = g.with_edge(a, b).unwrap();
        let (r, s) = (generic_rank(&g, d, DEFAULT_TRIALS, 0), generic_rank(&h, d, DEFAULT_TRIALS, 0));
        prop_assert!(s == r || s == r + 1);
    }

    #[test]
    fn stresses_are_in_equilibrium(g in arb_graph(9), d in 1usize..4, seed in any::<u64>()) {
        let a = analyze(&g, d, DEFAULT_TRIALS, seed);
        prop_assert_eq!(a.stresses.len() + a.rank, g.edge_count());
        for s in &a.stresses {
            prop_assert!(s.is_equilibrium(&g, &a.embedding));
        }
    }

    #[test]
    fn gluing_lemma(d in 1usize..4, extra_a in 1u32..4, extra_b in 1u32..4, shared_extra in 0u32..2) {
        // two complete graphs overlapping in at least d vertices
        let shared = d as u32 + shared_extra;
        let left = Graph::complete(shared + extra_a);
        let offset = extra_a;
        let right_vertices: Vec<u32> = (0..shared + extra_b).map(|v| v + offset).collect();
        let right_edges: Vec<(u32, u32)> = right_vertices
            .iter()
            .flat_map(|&a| right_vertices.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect();
        let right = Graph::new(right_vertices.clone(), right_edges).unwrap();
        prop_assert!(is_generically_rigid(&left, d) && is_generically_rigid(&right, d));
        prop_assert!(is_generically_rigid(&left.union(&right), d));
    }
}

#[test]
fn complete_graph_ranks() {
    for d in 1..=6 {
        for n in 1..=10u32 {
            let g = Graph::complete(n);
            assert_eq!(generic_rank(&g, d, DEFAULT_TRIALS, 0), complete_graph_rank(n as usize, d), "K_{n}, d = {d}");
        }
    }
}

#[test]
fn sharing_too_few_vertices_is_flexible() {
    // two triangles sharing one vertex hinge in the plane
    let g = Graph::new(0..5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
    assert!(!is_generically_rigid(&g, 2));
}
