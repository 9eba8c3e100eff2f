//! Metric battery properties on random partition pairs.

use clan_core::eval::{averaged_scores, pairwise_f1, pairwise_jaccard, PartialAssignment};
use clan_core::labels::LabelTable;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;

fn random_case(rng: &mut ChaCha20Rng) -> (PartialAssignment, LabelTable) {
    let n = rng.gen_range(4..16usize);
    let truth_groups = rng.gen_range(1..4usize);
    let detected_comms = rng.gen_range(1..5usize);
    let labels = (0..n)
        .map(|node| (node, format!("g{}", rng.gen_range(0..truth_groups))))
        .collect();
    let mut assignment = PartialAssignment::new();
    for node in 0..n {
        if rng.gen::<f64>() < 0.8 {
            assignment.insert(node, rng.gen_range(0..detected_comms));
        }
    }
    (assignment, LabelTable::from_map(labels))
}

#[test]
fn avg_f1_dominates_avg_jaccard_on_random_pairs() {
    let mut rng = ChaCha20Rng::seed_from_u64(7321);
    let mut checked = 0;
    while checked < 100 {
        let (assignment, truth) = random_case(&mut rng);
        if assignment.is_empty() {
            continue;
        }
        let scores = averaged_scores(&assignment, &truth).unwrap();
        assert!(
            scores.avg_f1 >= scores.avg_jaccard - 1e-12,
            "f1 {} < jaccard {}",
            scores.avg_f1,
            scores.avg_jaccard
        );
        assert!((0.0..=1.0).contains(&scores.avg_f1));
        assert!((0.0..=1.0).contains(&scores.avg_jaccard));
        checked += 1;
    }
}

#[test]
fn pairwise_f1_dominates_jaccard() {
    let mut rng = ChaCha20Rng::seed_from_u64(99);
    for _ in 0..200 {
        let a: BTreeSet<usize> = (0..12).filter(|_| rng.gen::<bool>()).collect();
        let b: BTreeSet<usize> = (0..12).filter(|_| rng.gen::<bool>()).collect();
        if b.is_empty() {
            continue;
        }
        let f1 = pairwise_f1(&a, &b).unwrap();
        let j = pairwise_jaccard(&a, &b).unwrap();
        assert!(f1 >= j - 1e-15);
        // F1 = 2J/(1+J) exactly
        assert!((f1 - 2.0 * j / (1.0 + j)).abs() <= 1e-12);
    }
}

#[test]
fn exact_match_iff_scores_are_one() {
    let mut rng = ChaCha20Rng::seed_from_u64(1234);
    for _ in 0..100 {
        let (assignment, truth) = random_case(&mut rng);
        if assignment.is_empty() {
            continue;
        }
        let scores = averaged_scores(&assignment, &truth).unwrap();
        // rebuild both side families restricted to labeled nodes
        let mut detected: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
        for (&node, &c) in &assignment {
            if truth.label(node).is_some() {
                detected.entry(c).or_default().insert(node);
            }
        }
        let mut groups: std::collections::BTreeMap<&str, BTreeSet<usize>> = Default::default();
        for (&node, label) in truth.labels() {
            groups.entry(label).or_default().insert(node);
        }
        let detected_family: BTreeSet<BTreeSet<usize>> = detected.into_values().collect();
        let truth_family: BTreeSet<BTreeSet<usize>> = groups.into_values().collect();
        let identical = detected_family == truth_family;
        let perfect =
            (scores.avg_f1 - 1.0).abs() <= 1e-12 && (scores.avg_jaccard - 1.0).abs() <= 1e-12;
        assert_eq!(identical, perfect);
    }
}
