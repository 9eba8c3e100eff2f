//! Ingestion invariants over generated edge lists.

use clan_core::graph::{edge_list_string, parse_edge_list_str, EdgeListOptions};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn edge_lines() -> impl Strategy<Value = String> {
    // up to 30 lines over 12 node names, quarter-integer weights
    prop::collection::vec((0..12u8, 0..12u8, 1..=12u8), 1..30).prop_map(|edges| {
        edges
            .into_iter()
            .map(|(u, v, w)| format!("n{u}\tn{v}\t{}", w as f64 / 4.0))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degree_sum_is_twice_edge_weight(text in edge_lines()) {
        let g = parse_edge_list_str(&text, &EdgeListOptions::default()).unwrap();
        let edge_weight: f64 = g.edges().iter().map(|&(_, _, w)| w).sum();
        prop_assert!((g.total_weight_2m() - 2.0 * edge_weight).abs() <= 1e-9);
        prop_assert!((g.recompute_total_weight_2m() - g.total_weight_2m()).abs() <= 1e-9);
    }

    #[test]
    fn round_trip_preserves_adjacency(text in edge_lines()) {
        let g = parse_edge_list_str(&text, &EdgeListOptions::default()).unwrap();
        let g2 = parse_edge_list_str(&edge_list_string(&g), &EdgeListOptions::default()).unwrap();
        prop_assert_eq!(g.node_count(), g2.node_count());
        prop_assert_eq!(g.edge_count(), g2.edge_count());
        for u in 0..g.node_count() {
            let u2 = g2.node_id(g.external_id(u)).unwrap();
            let mut a: BTreeMap<&str, f64> = g.neighbors(u).iter()
                .map(|&(v, w)| (g.external_id(v), w)).collect();
            let b: BTreeMap<&str, f64> = g2.neighbors(u2).iter()
                .map(|&(v, w)| (g2.external_id(v), w)).collect();
            // same neighbor names; weights equal exactly (shortest-repr round trip)
            prop_assert_eq!(a.len(), b.len());
            for (name, w) in b {
                prop_assert_eq!(a.remove(name), Some(w));
            }
        }
    }

    #[test]
    fn ingestion_is_deterministic(text in edge_lines()) {
        let g1 = parse_edge_list_str(&text, &EdgeListOptions::default()).unwrap();
        let g2 = parse_edge_list_str(&text, &EdgeListOptions::default()).unwrap();
        prop_assert_eq!(g1.external_ids(), g2.external_ids());
        prop_assert_eq!(g1.edges(), g2.edges());
    }
}
