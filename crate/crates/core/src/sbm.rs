//! Seeded attributed stochastic-block-model generator. Produces desk-scale
//! planted-community datasets: a graph, per-node token lists drawn from
//! per-block vocabulary slices, and block membership as ground truth.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::labels::LabelTable;

fn default_seed() -> u64 {
    42
}

/// Generator parameters. `degree_label_correlation` scales the "activity" of
/// block 0 by (1 + c): a pair's edge probability is the base intra/inter
/// probability times both endpoints' activities (clamped to 1), so a positive
/// c makes block-0 membership correlate with degree and a negative c starves
/// block 0 of edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbmSpec {
    pub block_sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub tokens_per_node: usize,
    pub vocab_per_block: usize,
    /// Fraction of a block's vocabulary slice shared with its neighbor slice.
    pub token_overlap: f64,
    #[serde(default)]
    pub degree_label_correlation: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl SbmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() || self.block_sizes.contains(&0) {
            return Err(Error::InvalidSpec("block sizes must be positive".into()));
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::InvalidSpec(format!("{name} must be in [0,1]")));
            }
        }
        if self.p_out > self.p_in {
            return Err(Error::InvalidSpec(
                "p_out must be <= p_in (planted-community regime)".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.token_overlap) {
            return Err(Error::InvalidSpec("token_overlap must be in [0,1]".into()));
        }
        if self.tokens_per_node > 0 && self.vocab_per_block == 0 {
            return Err(Error::InvalidSpec(
                "vocab_per_block must be >= 1 when tokens are drawn".into(),
            ));
        }
        if self.degree_label_correlation < -1.0 {
            return Err(Error::InvalidSpec(
                "degree_label_correlation must be >= -1".into(),
            ));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

/// Generate a planted-block graph with attributes and ground-truth labels.
/// Deterministic given the spec (including its seed).
pub fn generate_attributed_sbm(spec: &SbmSpec) -> Result<(Graph, AttributeTable, LabelTable)> {
    spec.validate()?;
    let n = spec.node_count();

    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in spec.block_sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, size));
    }
    let activity = |u: usize| -> f64 {
        if block_of[u] == 0 {
            1.0 + spec.degree_label_correlation
        } else {
            1.0
        }
    };

    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut builder = GraphBuilder::new();
    let names: Vec<String> = (0..n).map(|u| format!("n{u}")).collect();
    for name in &names {
        builder.ensure_node(name);
    }
    for u in 0..n {
        for v in (u + 1)..n {
            let base = if block_of[u] == block_of[v] {
                spec.p_in
            } else {
                spec.p_out
            };
            let p = (base * activity(u) * activity(v)).min(1.0);
            // one draw per pair keeps the stream layout independent of outcomes
            let roll: f64 = rng.gen();
            if roll < p {
                builder.add_edge(&names[u], &names[v], 1.0);
            }
        }
    }
    let graph = builder.build();

    // Block b draws from vocabulary slice [b*stride, b*stride + vocab_per_block);
    // stride shrinks with overlap so adjacent slices share tokens.
    let stride = ((spec.vocab_per_block as f64) * (1.0 - spec.token_overlap)).round() as usize;
    let mut tokens: Vec<Vec<String>> = Vec::with_capacity(n);
    for &block in &block_of {
        let start = block * stride;
        let mut list = Vec::with_capacity(spec.tokens_per_node);
        for _ in 0..spec.tokens_per_node {
            let offset = rng.gen_range(0..spec.vocab_per_block);
            list.push(format!("tok{}", start + offset));
        }
        tokens.push(list);
    }
    let attrs = AttributeTable::from_tokens(tokens);

    let labels: BTreeMap<usize, String> = (0..n)
        .map(|u| (u, format!("block{}", block_of[u])))
        .collect();
    let truth = LabelTable::from_map(labels);

    Ok((graph, attrs, truth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_list_string;

    fn base_spec() -> SbmSpec {
        SbmSpec {
            block_sizes: vec![4, 4],
            p_in: 1.0,
            p_out: 0.0,
            tokens_per_node: 3,
            vocab_per_block: 5,
            token_overlap: 0.0,
            degree_label_correlation: 0.0,
            seed: 1,
        }
    }

    #[test]
    fn extreme_probabilities_give_two_cliques() {
        let (graph, _, truth) = generate_attributed_sbm(&base_spec()).unwrap();
        assert_eq!(graph.node_count(), 8);
        assert_eq!(graph.edge_count(), 12); // two disjoint K4s
        for &(u, v, w) in graph.edges() {
            assert_eq!(w, 1.0);
            assert_eq!(truth.label(u), truth.label(v));
        }
    }

    #[test]
    fn zero_overlap_separates_vocabularies() {
        let (_, attrs, truth) = generate_attributed_sbm(&base_spec()).unwrap();
        let mut block0 = std::collections::BTreeSet::new();
        let mut block1 = std::collections::BTreeSet::new();
        for node in 0..8 {
            let target = if truth.label(node) == Some("block0") {
                &mut block0
            } else {
                &mut block1
            };
            target.extend(attrs.tokens(node).iter().cloned());
        }
        assert!(block0.is_disjoint(&block1));
    }

    #[test]
    fn full_overlap_shares_vocabulary_slice() {
        let mut spec = base_spec();
        spec.token_overlap = 1.0;
        let (_, attrs, _) = generate_attributed_sbm(&spec).unwrap();
        // stride is 0, so every token index is below vocab_per_block
        for node in 0..8 {
            for token in attrs.tokens(node) {
                let idx: usize = token.trim_start_matches("tok").parse().unwrap();
                assert!(idx < spec.vocab_per_block);
            }
        }
    }

    #[test]
    fn generator_is_deterministic_bit_for_bit() {
        let spec = crate::fixtures::small_sbm_spec();
        let (g1, a1, l1) = generate_attributed_sbm(&spec).unwrap();
        let (g2, a2, l2) = generate_attributed_sbm(&spec).unwrap();
        assert_eq!(edge_list_string(&g1), edge_list_string(&g2));
        assert_eq!(
            crate::attributes::attributes_jsonl_string(&g1, &a1),
            crate::attributes::attributes_jsonl_string(&g2, &a2)
        );
        assert_eq!(
            crate::labels::labels_csv_string(&g1, &l1),
            crate::labels::labels_csv_string(&g2, &l2)
        );
    }

    #[test]
    fn different_seeds_differ() {
        let mut spec = crate::fixtures::small_sbm_spec();
        let (g1, _, _) = generate_attributed_sbm(&spec).unwrap();
        spec.seed = 43;
        let (g2, _, _) = generate_attributed_sbm(&spec).unwrap();
        assert_ne!(edge_list_string(&g1), edge_list_string(&g2));
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = base_spec();
        spec.p_in = 0.1;
        spec.p_out = 0.5;
        assert!(matches!(
            generate_attributed_sbm(&spec),
            Err(Error::InvalidSpec(_))
        ));

        let mut spec = base_spec();
        spec.block_sizes = vec![];
        assert!(generate_attributed_sbm(&spec).is_err());

        let mut spec = base_spec();
        spec.token_overlap = 1.5;
        assert!(generate_attributed_sbm(&spec).is_err());
    }

    #[test]
    fn positive_correlation_raises_block0_degrees() {
        let spec = SbmSpec {
            block_sizes: vec![40, 40],
            p_in: 0.2,
            p_out: 0.05,
            tokens_per_node: 0,
            vocab_per_block: 1,
            token_overlap: 0.0,
            degree_label_correlation: 1.0,
            seed: 5,
        };
        let (graph, _, truth) = generate_attributed_sbm(&spec).unwrap();
        let mean = |label: &str| {
            let nodes: Vec<usize> = (0..graph.node_count())
                .filter(|&u| truth.label(u) == Some(label))
                .collect();
            nodes.iter().map(|&u| graph.degree(u)).sum::<f64>() / nodes.len() as f64
        };
        assert!(mean("block0") > 1.5 * mean("block1"));
    }
}
