//! Pipeline-level properties: classifier scale invariance, posterior
//! normalization, and the inclusiveness/conservativeness guarantees of the
//! two-step run.

use std::collections::BTreeMap;

use clan_core::fixtures;
use clan_core::louvain::LouvainConfig;
use clan_core::pipeline::{run_clan, TokenClassifierModel};
use clan_core::{generate_attributed_sbm, significant_assignment, unlabeled_fraction};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn random_documents(rng: &mut ChaCha20Rng, classes: usize) -> Vec<(usize, Vec<String>)> {
    let vocab: Vec<String> = (0..12).map(|i| format!("w{i}")).collect();
    let mut docs = Vec::new();
    for class in 0..classes {
        for _ in 0..rng.gen_range(1..4) {
            let len = rng.gen_range(0..6);
            let doc = (0..len)
                .map(|_| vocab[rng.gen_range(0..vocab.len())].clone())
                .collect();
            docs.push((class, doc));
        }
    }
    docs
}

#[test]
fn argmax_invariant_under_document_replication() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    for round in 0..20 {
        let classes = rng.gen_range(2..4usize);
        let docs = random_documents(&mut rng, classes);
        if docs.iter().all(|(_, d)| d.is_empty()) {
            continue;
        }
        let weights: BTreeMap<usize, f64> = (0..classes).map(|c| (c, 1.0 + c as f64)).collect();
        let alpha = 1.0;
        let base = TokenClassifierModel::fit(&docs, &weights, alpha).unwrap();

        for k in [2usize, 5] {
            let mut replicated = Vec::new();
            for _ in 0..k {
                replicated.extend(docs.iter().cloned());
            }
            let scaled =
                TokenClassifierModel::fit(&replicated, &weights, alpha * k as f64).unwrap();

            for _ in 0..10 {
                let query: Vec<String> = (0..rng.gen_range(0..5))
                    .map(|_| format!("w{}", rng.gen_range(0..14)))
                    .collect();
                let (class_base, p_base) = base.classify(&query);
                let (class_scaled, p_scaled) = scaled.classify(&query);
                assert_eq!(
                    class_base, class_scaled,
                    "round {round}, k={k}: argmax changed"
                );
                assert!((p_base - p_scaled).abs() <= 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posteriors_always_normalize(
        seed in 0u64..1000,
        query_len in 0usize..6,
    ) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let docs = random_documents(&mut rng, 3);
        prop_assume!(docs.iter().any(|(_, d)| !d.is_empty()));
        let weights: BTreeMap<usize, f64> = (0..3).map(|c| (c, 1.0)).collect();
        let model = TokenClassifierModel::fit(&docs, &weights, 0.5).unwrap();

        let query: Vec<String> =
            (0..query_len).map(|_| format!("w{}", rng.gen_range(0..14))).collect();
        let posteriors = model.posteriors(&query);
        let total: f64 = posteriors.iter().map(|&(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        for &(_, p) in &posteriors {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}

#[test]
fn clan_runs_are_inclusive_and_conservative_on_sbm() {
    for seed in 1..=5u64 {
        let mut spec = fixtures::small_sbm_spec();
        spec.seed = seed;
        let (graph, attrs, _) = generate_attributed_sbm(&spec).unwrap();
        let config = LouvainConfig::default();
        let result = run_clan(&graph, &attrs, 10, &config, 1.0).unwrap();

        // inclusiveness: every node in a significant community
        let assignment = significant_assignment(&result.final_partition, &result.split.significant);
        assert_eq!(assignment.len(), graph.node_count());
        assert_eq!(unlabeled_fraction(graph.node_count(), &assignment), 0.0);

        // conservativeness: significant nodes keep their step-1 community
        for node in 0..graph.node_count() {
            let step1 = result.step1_partition.community_of(node);
            if result.split.significant.contains(&step1) {
                assert_eq!(result.final_partition.community_of(node), step1);
            }
        }

        // determinism of the whole pipeline
        let again = run_clan(&graph, &attrs, 10, &config, 1.0).unwrap();
        assert_eq!(
            result.final_partition.assignment(),
            again.final_partition.assignment()
        );
        assert_eq!(result.reassigned.len(), again.reassigned.len());
    }
}
