//! Shared inputs for the benchmark targets.

use clan_core::fixtures;
use clan_core::{generate_attributed_sbm, AttributeTable, Graph, LabelTable};

/// The karate club graph.
pub fn karate() -> Graph {
    fixtures::karate_club_graph()
}

/// A 100-node two-block dataset with informative tokens.
pub fn small_sbm() -> (Graph, AttributeTable, LabelTable) {
    generate_attributed_sbm(&fixtures::small_sbm_spec()).expect("valid spec")
}

/// The 160-node dataset used by the resilience sweep.
pub fn resilience_sbm() -> (Graph, AttributeTable, LabelTable) {
    generate_attributed_sbm(&fixtures::resilience_sbm_spec(1)).expect("valid spec")
}

/// The 800-node degree-skewed dataset used by the ratio harness.
pub fn skew_sbm() -> (Graph, AttributeTable, LabelTable) {
    generate_attributed_sbm(&fixtures::skew_sbm_spec(1)).expect("valid spec")
}
