//! Embedded test datasets: the two-triangle graph, the Zachary karate club,
//! and a small attributed block-model spec. Test suites and examples use these
//! so no network access is ever required.

use std::fmt::Write as _;

use crate::graph::{parse_edge_list, EdgeListOptions, Graph};
use crate::sbm::SbmSpec;

/// Two disjoint triangles {a,b,c} and {d,e,f}, unit weights.
pub const TWO_TRIANGLE_EDGES: &str = "\
a\tb
b\tc
c\ta
d\te
e\tf
f\td
";

/// Token lists separating the two triangles by vocabulary.
pub const TWO_TRIANGLE_ATTRS: &str = r#"{"id":"a","tokens":["red","crimson"]}
{"id":"b","tokens":["red","scarlet"]}
{"id":"c","tokens":["crimson","scarlet"]}
{"id":"d","tokens":["blue","azure"]}
{"id":"e","tokens":["blue","navy"]}
{"id":"f","tokens":["azure","navy"]}
"#;

/// Ground truth for the two triangles.
pub const TWO_TRIANGLE_LABELS: &str = "\
a,left
b,left
c,left
d,right
e,right
f,right
";

pub fn two_triangle_graph() -> Graph {
    parse_edge_list(
        TWO_TRIANGLE_EDGES,
        std::path::Path::new("two_triangle.tsv"),
        &EdgeListOptions::default(),
    )
    .expect("fixture parses")
}

/// Zachary's karate club: 34 nodes, 78 unit edges, external ids "0".."33".
pub const KARATE_CLUB_EDGES: &str = "\
0\t1
0\t2
0\t3
0\t4
0\t5
0\t6
0\t7
0\t8
0\t10
0\t11
0\t12
0\t13
0\t17
0\t19
0\t21
0\t31
1\t2
1\t3
1\t7
1\t13
1\t17
1\t19
1\t21
1\t30
2\t3
2\t7
2\t8
2\t9
2\t13
2\t27
2\t28
2\t32
3\t7
3\t12
3\t13
4\t6
4\t10
5\t6
5\t10
5\t16
6\t16
8\t30
8\t32
8\t33
9\t33
13\t33
14\t32
14\t33
15\t32
15\t33
18\t32
18\t33
19\t33
20\t32
20\t33
22\t32
22\t33
23\t25
23\t27
23\t29
23\t32
23\t33
24\t25
24\t27
24\t31
25\t31
26\t29
26\t33
27\t33
28\t31
28\t33
29\t32
29\t33
30\t32
30\t33
31\t32
31\t33
32\t33
";

/// Faction of each karate node (true = instructor's side).
const KARATE_FACTION: [bool; 34] = [
    true, true, true, true, true, true, true, true, true, false, true, true, true, true, false,
    false, true, true, false, true, false, true, false, false, false, false, false, false, false,
    false, false, false, false, false,
];

pub fn karate_club_graph() -> Graph {
    parse_edge_list(
        KARATE_CLUB_EDGES,
        std::path::Path::new("karate.tsv"),
        &EdgeListOptions::default(),
    )
    .expect("fixture parses")
}

/// Synthetic token lists for the karate club: each node carries tokens from
/// its faction's vocabulary, rotated by node id so lists differ.
pub fn karate_club_attrs_jsonl() -> String {
    let instructor = ["practice", "sensei", "mat", "kata"];
    let officer = ["board", "dues", "tournament", "charter"];
    let mut out = String::new();
    for (node, &hi) in KARATE_FACTION.iter().enumerate() {
        let vocab: &[&str] = if hi { &instructor } else { &officer };
        let tokens: Vec<&str> = (0..3).map(|k| vocab[(node + k) % vocab.len()]).collect();
        let record = serde_json::json!({ "id": node.to_string(), "tokens": tokens });
        let _ = writeln!(out, "{record}");
    }
    out
}

/// Faction ground truth for the karate club.
pub fn karate_club_labels_csv() -> String {
    let mut out = String::new();
    for (node, &hi) in KARATE_FACTION.iter().enumerate() {
        let label = if hi { "instructor" } else { "officer" };
        let _ = writeln!(out, "{node},{label}");
    }
    out
}

/// Small attributed block model used as the default generated fixture:
/// two planted blocks with mostly disjoint vocabularies.
pub fn small_sbm_spec() -> SbmSpec {
    SbmSpec {
        block_sizes: vec![50, 50],
        p_in: 0.2,
        p_out: 0.01,
        tokens_per_node: 6,
        vocab_per_block: 30,
        token_overlap: 0.1,
        degree_label_correlation: 0.0,
        seed: 42,
    }
}

/// Degree-skewed block model for the ratio-curve harness: non-assortative
/// (p_in = p_out) so subsampling removals hit both groups' neighborhoods
/// evenly, with block 0 biased toward higher degree.
pub fn skew_sbm_spec(seed: u64) -> SbmSpec {
    SbmSpec {
        block_sizes: vec![400, 400],
        p_in: 0.03,
        p_out: 0.03,
        tokens_per_node: 6,
        vocab_per_block: 30,
        token_overlap: 0.1,
        degree_label_correlation: 0.06,
        seed,
    }
}

/// Two well-separated blocks with informative tokens; slope subsampling on
/// this fixture strands enough low-degree nodes in sub-threshold communities
/// to exercise the reassignment step.
pub fn resilience_sbm_spec(seed: u64) -> SbmSpec {
    SbmSpec {
        block_sizes: vec![80, 80],
        p_in: 0.15,
        p_out: 0.01,
        tokens_per_node: 8,
        vocab_per_block: 40,
        token_overlap: 0.1,
        degree_label_correlation: 0.0,
        seed,
    }
}
