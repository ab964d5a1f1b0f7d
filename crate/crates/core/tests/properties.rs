//! Randomized checks of the library against brute-force oracles.

use proptest::prelude::*;

use cops_core::acceptance::enumerate_nb_walks;
use cops_core::generators::{gen_gnp, GnpParams};
use cops_core::retracts::{find_retraction_bruteforce, find_retraction_onto, is_retraction};
use cops_core::solver::{cop_number_exact, dismantling_order, SolverBudget};
use cops_core::walks::count_nb_walks;
use cops_core::{Graph, VertexSet};

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..=1.0, any::<u64>())
        .prop_map(|(n, p, seed)| gen_gnp(GnpParams { n, p, seed }).unwrap())
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    small_graph(max_n).prop_filter("connected", Graph::is_connected)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(g in small_graph(30)) {
        let back = Graph::parse_text(&g.to_text()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.hash_hex(), g.hash_hex());
    }

    #[test]
    fn walk_counts_match_enumeration(g in small_graph(8), x in 0usize..8, len in 0usize..6) {
        let x = x % g.n();
        let counts = enumerate_nb_walks(&g, x, len);
        for v in 0..g.n() {
            let target = VertexSet::from_vertices(g.n(), [v]).unwrap();
            let got = count_nb_walks(&g, x, &target, len, None).unwrap();
            prop_assert_eq!(got.exact(), Some(counts[len][v]));
        }
    }

    #[test]
    fn one_cop_wins_exactly_on_dismantlable_graphs(g in connected_graph(8)) {
        let k = cop_number_exact(&g, 4, &SolverBudget::default()).unwrap();
        prop_assert_eq!(k == 1, dismantling_order(&g).is_some());
    }

    #[test]
    fn retract_search_agrees_with_brute_force(g in small_graph(6), mask in 1u32..64) {
        let n = g.n();
        let h = VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1)).unwrap();
        prop_assume!(!h.is_empty());
        let found = find_retraction_onto(&g, &h, 1_000_000).unwrap();
        let brute = find_retraction_bruteforce(&g, &h).unwrap();
        prop_assert_eq!(found.is_some(), brute.is_some());
        if let Some(f) = found {
            prop_assert!(is_retraction(&g, &f));
            for v in h.iter() {
                prop_assert_eq!(f[v], v);
            }
        }
    }
}

#[test]
fn girth_five_graphs_need_min_degree_cops() {
    for (name, want) in [("petersen", 3), ("heawood", 3), ("cycle:5", 2)] {
        let g = cops_core::generators::fixture(name).unwrap();
        let bound = cops_core::bounds::girth5_lower_bound(&g).unwrap();
        let k = cop_number_exact(&g, 4, &SolverBudget::default()).unwrap();
        assert!(bound <= k, "{name}: bound {bound} above cop number {k}");
        assert_eq!(k, want, "{name}");
    }
}
