use proptest::prelude::*;
use twofold::suites::{self, Suite};
use twofold::twofold::{aut_pi, double_cover};
use twofold::{graph6, tfiso, Graph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n).unwrap();
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            for ((u, v), b) in pairs.zip(bits) {
                if b {
                    g.add_edge(u, v).unwrap();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma_and_parity_hold(g in graph_strategy(8).prop_filter("reduced", Graph::is_reduced)) {
        prop_assert!(suites::check_gamma(&g).unwrap().is_empty());
        prop_assert!(suites::check_parity(&g).unwrap().is_empty());
    }

    #[test]
    fn fast_structure_matches_oracle(g in graph_strategy(8).prop_filter("reduced", Graph::is_reduced)) {
        prop_assert!(suites::check_oracle(&g).unwrap().is_empty());
    }

    #[test]
    fn witnesses_share_the_double_cover(
        g in graph_strategy(8).prop_filter("census", |g| Suite::Identities.applies_to(g))
    ) {
        let t = aut_pi(&g).unwrap();
        let c = tfiso::census_from(&t, false, true).unwrap();
        let cover = double_cover(&g);
        for (_, w) in c.witnesses.as_ref().unwrap() {
            prop_assert!(tfiso::tf_isomorphic(&g, w).unwrap().is_some());
            prop_assert_eq!(double_cover(w).edge_count(), cover.edge_count());
            prop_assert!(w.is_reduced());
        }
        prop_assert_eq!(c.inst_sum(), c.ant0_size as u64);
    }

    #[test]
    fn graph6_round_trip(g in graph_strategy(12)) {
        prop_assert_eq!(graph6::decode(&graph6::encode(&g).unwrap()).unwrap(), g);
    }
}
