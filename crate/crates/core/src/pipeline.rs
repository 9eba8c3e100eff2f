//! The two-step detection pipeline: modularity partitioning, then
//! attribute-based reassignment of every node from small ("minority")
//! communities into the large ("significant") ones.
//!
//! Step 2 trains a multinomial naive-Bayes model with add-alpha smoothing on
//! the token lists of significant-community nodes and classifies each minority
//! node individually. Significant-node assignments are never altered and the
//! graph structure is never modified, so every node ends up in a significant
//! community.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{CommunityId, Graph, NodeId, Partition};
use crate::louvain::{louvain, LouvainConfig};

/// Default significance threshold: max(10, ceil(0.01 * node_count)).
pub fn default_threshold(node_count: usize) -> usize {
    10.max((node_count as f64 * 0.01).ceil() as usize)
}

/// Communities partitioned into significant (size strictly above the
/// threshold) and minority (everything else).
#[derive(Debug, Clone)]
pub struct ThresholdSplit {
    pub significant: BTreeSet<CommunityId>,
    pub minority: BTreeSet<CommunityId>,
    pub threshold: usize,
}

/// Split by strict `size > threshold`. At least one community must qualify.
pub fn split_by_threshold(partition: &Partition, threshold: usize) -> Result<ThresholdSplit> {
    if threshold < 1 {
        return Err(Error::InvalidConfig("threshold must be >= 1".into()));
    }
    let mut significant = BTreeSet::new();
    let mut minority = BTreeSet::new();
    for (cid, &size) in partition.sizes().iter().enumerate() {
        if size == 0 {
            continue;
        }
        if size > threshold {
            significant.insert(cid);
        } else {
            minority.insert(cid);
        }
    }
    if significant.is_empty() {
        return Err(Error::NoSignificantCommunities { threshold });
    }
    Ok(ThresholdSplit {
        significant,
        minority,
        threshold,
    })
}

/// Multinomial naive-Bayes over token counts with add-alpha smoothing.
#[derive(Debug, Clone)]
pub struct TokenClassifierModel {
    classes: Vec<CommunityId>,
    log_priors: Vec<f64>,
    /// Per class: token -> log P(token | class), for tokens seen in the class.
    seen_log_likelihood: Vec<HashMap<String, f64>>,
    /// Per class: log P(token | class) for vocabulary tokens unseen in the class.
    unseen_log_likelihood: Vec<f64>,
    vocabulary: BTreeSet<String>,
    smoothing_alpha: f64,
}

impl TokenClassifierModel {
    /// Fit from (class, document) pairs. `prior_weights` carries the
    /// unnormalized prior mass per class (community node counts in the
    /// pipeline); every key becomes a class even with no tokens.
    pub fn fit(
        documents: &[(CommunityId, Vec<String>)],
        prior_weights: &BTreeMap<CommunityId, f64>,
        alpha: f64,
    ) -> Result<TokenClassifierModel> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidConfig("alpha must be > 0".into()));
        }
        if prior_weights.is_empty() {
            return Err(Error::InvalidConfig("classifier needs >= 1 class".into()));
        }
        let classes: Vec<CommunityId> = prior_weights.keys().copied().collect();
        let class_index: HashMap<CommunityId, usize> =
            classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();

        let mut vocabulary: BTreeSet<String> = BTreeSet::new();
        let mut counts: Vec<HashMap<String, f64>> = vec![HashMap::new(); classes.len()];
        let mut totals = vec![0.0f64; classes.len()];
        for (class, doc) in documents {
            let idx = *class_index.get(class).ok_or_else(|| {
                Error::InvalidConfig(format!("document for unknown class {class}"))
            })?;
            for token in doc {
                vocabulary.insert(token.clone());
                *counts[idx].entry(token.clone()).or_insert(0.0) += 1.0;
                totals[idx] += 1.0;
            }
        }
        if vocabulary.is_empty() {
            return Err(Error::NoTrainingFeatures);
        }

        let weight_total: f64 = prior_weights.values().sum();
        if weight_total.is_nan() || weight_total <= 0.0 {
            return Err(Error::InvalidConfig("prior weights must sum to > 0".into()));
        }
        let log_priors: Vec<f64> = classes
            .iter()
            .map(|c| (prior_weights[c] / weight_total).ln())
            .collect();

        let vocab_size = vocabulary.len() as f64;
        let mut seen_log_likelihood = Vec::with_capacity(classes.len());
        let mut unseen_log_likelihood = Vec::with_capacity(classes.len());
        for idx in 0..classes.len() {
            let denom = totals[idx] + alpha * vocab_size;
            let seen = counts[idx]
                .iter()
                .map(|(token, &count)| (token.clone(), ((count + alpha) / denom).ln()))
                .collect();
            seen_log_likelihood.push(seen);
            unseen_log_likelihood.push((alpha / denom).ln());
        }

        Ok(TokenClassifierModel {
            classes,
            log_priors,
            seen_log_likelihood,
            unseen_log_likelihood,
            vocabulary,
            smoothing_alpha: alpha,
        })
    }

    pub fn classes(&self) -> &[CommunityId] {
        &self.classes
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    pub fn smoothing_alpha(&self) -> f64 {
        self.smoothing_alpha
    }

    /// P(class), by class position.
    pub fn prior(&self, class_idx: usize) -> f64 {
        self.log_priors[class_idx].exp()
    }

    /// P(token | class), including the smoothed mass of unseen tokens.
    /// Returns None for tokens outside the vocabulary.
    pub fn likelihood(&self, class_idx: usize, token: &str) -> Option<f64> {
        if !self.vocabulary.contains(token) {
            return None;
        }
        Some(
            self.seen_log_likelihood[class_idx]
                .get(token)
                .copied()
                .unwrap_or(self.unseen_log_likelihood[class_idx])
                .exp(),
        )
    }

    /// Normalized posterior per class for a token document. Tokens outside
    /// the vocabulary are dropped before scoring; with no effective tokens
    /// the posteriors equal the priors.
    pub fn posteriors(&self, tokens: &[String]) -> Vec<(CommunityId, f64)> {
        let mut log_scores: Vec<f64> = self.log_priors.clone();
        for token in tokens {
            if !self.vocabulary.contains(token) {
                continue;
            }
            for (idx, score) in log_scores.iter_mut().enumerate() {
                *score += self.seen_log_likelihood[idx]
                    .get(token)
                    .copied()
                    .unwrap_or(self.unseen_log_likelihood[idx]);
            }
        }
        // log-sum-exp normalization
        let max = log_scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let denom: f64 = log_scores.iter().map(|&s| (s - max).exp()).sum();
        self.classes
            .iter()
            .zip(&log_scores)
            .map(|(&class, &s)| (class, (s - max).exp() / denom))
            .collect()
    }

    /// Argmax-posterior class; ties break toward the lowest community id.
    pub fn classify(&self, tokens: &[String]) -> (CommunityId, f64) {
        let posteriors = self.posteriors(tokens);
        let mut best = posteriors[0];
        for &(class, p) in &posteriors[1..] {
            if p > best.1 {
                best = (class, p);
            }
        }
        best
    }
}

/// Train the reassignment classifier on significant-community nodes: one
/// document per node, priors proportional to community node counts.
pub fn train_classifier(
    graph: &Graph,
    attrs: &AttributeTable,
    partition: &Partition,
    split: &ThresholdSplit,
    alpha: f64,
) -> Result<TokenClassifierModel> {
    if attrs.node_count() != graph.node_count() {
        return Err(Error::InvalidConfig(
            "attribute table does not cover the graph".into(),
        ));
    }
    let mut documents = Vec::new();
    for node in 0..graph.node_count() {
        let community = partition.community_of(node);
        if split.significant.contains(&community) {
            documents.push((community, attrs.tokens(node).to_vec()));
        }
    }
    let prior_weights: BTreeMap<CommunityId, f64> = split
        .significant
        .iter()
        .map(|&c| (c, partition.sizes()[c] as f64))
        .collect();
    TokenClassifierModel::fit(&documents, &prior_weights, alpha)
}

/// Classify one node's token document with a trained model.
pub fn classify_node(model: &TokenClassifierModel, tokens: &[String]) -> (CommunityId, f64) {
    model.classify(tokens)
}

/// Where a minority node moved and how confidently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reassignment {
    pub from: CommunityId,
    pub to: CommunityId,
    pub posterior: f64,
}

/// Output of the full two-step pipeline.
#[derive(Debug, Clone)]
pub struct ClanResult {
    /// Every node assigned to a significant community. Community ids match
    /// `step1_partition`'s significant ids; significant nodes are unchanged.
    pub final_partition: Partition,
    pub step1_partition: Partition,
    pub split: ThresholdSplit,
    pub reassigned: BTreeMap<NodeId, Reassignment>,
}

/// Run both steps: modularity partitioning, threshold split, classifier
/// training, and per-node reassignment of every minority-community node.
pub fn run_clan(
    graph: &Graph,
    attrs: &AttributeTable,
    threshold: usize,
    louvain_config: &LouvainConfig,
    alpha: f64,
) -> Result<ClanResult> {
    let step1_partition = louvain(graph, louvain_config)?;
    let split = split_by_threshold(&step1_partition, threshold)?;

    if split.minority.is_empty() {
        return Ok(ClanResult {
            final_partition: step1_partition.clone(),
            step1_partition,
            split,
            reassigned: BTreeMap::new(),
        });
    }

    let model = train_classifier(graph, attrs, &step1_partition, &split, alpha)?;
    let mut assignment = step1_partition.assignment().to_vec();
    let mut reassigned = BTreeMap::new();
    for (node, slot) in assignment.iter_mut().enumerate() {
        let from = step1_partition.community_of(node);
        if !split.minority.contains(&from) {
            continue;
        }
        let (to, posterior) = model.classify(attrs.tokens(node));
        *slot = to;
        reassigned.insert(
            node,
            Reassignment {
                from,
                to,
                posterior,
            },
        );
    }

    Ok(ClanResult {
        final_partition: Partition::from_assignment(assignment),
        step1_partition,
        split,
        reassigned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attributes::parse_attributes;
    use crate::fixtures;
    use crate::graph::{parse_edge_list, EdgeListOptions};
    use std::path::Path;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn toy_model() -> TokenClassifierModel {
        // class 0: one document ["x","x"]; class 1: one document ["y"]
        let docs = vec![
            (0usize, vec!["x".to_string(), "x".to_string()]),
            (1usize, vec!["y".to_string()]),
        ];
        let weights: BTreeMap<usize, f64> = [(0, 1.0), (1, 1.0)].into_iter().collect();
        TokenClassifierModel::fit(&docs, &weights, 1.0).unwrap()
    }

    #[test]
    fn split_examples() {
        let p = Partition::from_assignment(vec![0, 0, 0, 0, 0, 1, 1]);
        let s = split_by_threshold(&p, 3).unwrap();
        assert!(s.significant.contains(&0));
        assert!(s.minority.contains(&1));

        let p = Partition::from_assignment(vec![0, 0, 0, 0, 0, 1, 1, 1, 1]);
        let s = split_by_threshold(&p, 3).unwrap();
        assert!(s.minority.is_empty());

        let p = Partition::from_assignment(vec![0, 0, 1, 1]);
        assert!(matches!(
            split_by_threshold(&p, 3),
            Err(Error::NoSignificantCommunities { threshold: 3 })
        ));
    }

    #[test]
    fn add_one_smoothing_oracle() {
        let model = toy_model();
        // P(x|0) = (2+1)/(2+2) = 0.75, P(y|0) = (0+1)/4 = 0.25
        assert_close(model.likelihood(0, "x").unwrap(), 0.75, 1e-12);
        assert_close(model.likelihood(0, "y").unwrap(), 0.25, 1e-12);
        // P(x|1) = (0+1)/(1+2) = 1/3, P(y|1) = (1+1)/3
        assert_close(model.likelihood(1, "x").unwrap(), 1.0 / 3.0, 1e-12);
        assert_close(model.likelihood(1, "y").unwrap(), 2.0 / 3.0, 1e-12);
        assert!(model.likelihood(0, "zzz").is_none());
    }

    #[test]
    fn equal_doc_mass_gives_equal_priors() {
        let model = toy_model();
        assert_close(model.prior(0), 0.5, 1e-12);
        assert_close(model.prior(1), 0.5, 1e-12);
    }

    #[test]
    fn likelihoods_and_priors_normalize() {
        let model = toy_model();
        for idx in 0..2 {
            let total: f64 = model
                .vocabulary()
                .iter()
                .map(|t| model.likelihood(idx, t).unwrap())
                .sum();
            assert_close(total, 1.0, 1e-9);
        }
        assert_close(model.prior(0) + model.prior(1), 1.0, 1e-9);
    }

    #[test]
    fn classify_hand_computed_posterior() {
        let model = toy_model();
        // P(0|x) = 0.5*0.75 / (0.5*0.75 + 0.5/3) = 9/13
        let (class, posterior) = model.classify(&["x".to_string()]);
        assert_eq!(class, 0);
        assert_close(posterior, 9.0 / 13.0, 1e-9);
    }

    #[test]
    fn empty_tokens_fall_back_to_prior_with_low_id_tiebreak() {
        let model = toy_model();
        let (class, posterior) = model.classify(&[]);
        assert_eq!(class, 0); // equal priors, lowest community id wins
        assert_close(posterior, 0.5, 1e-12);
    }

    #[test]
    fn out_of_vocabulary_tokens_are_dropped() {
        let model = toy_model();
        let oov = vec!["unseen".to_string(), "also-unseen".to_string()];
        let (class, posterior) = model.classify(&oov);
        let (class_empty, posterior_empty) = model.classify(&[]);
        assert_eq!(class, class_empty);
        assert_close(posterior, posterior_empty, 1e-12);
    }

    #[test]
    fn posteriors_sum_to_one() {
        let model = toy_model();
        for tokens in [vec![], vec!["x".into()], vec!["x".into(), "y".into()]] {
            let total: f64 = model.posteriors(&tokens).iter().map(|&(_, p)| p).sum();
            assert_close(total, 1.0, 1e-9);
        }
    }

    #[test]
    fn no_training_features_is_error() {
        let docs = vec![(0usize, vec![]), (1usize, vec![])];
        let weights: BTreeMap<usize, f64> = [(0, 1.0), (1, 1.0)].into_iter().collect();
        assert!(matches!(
            TokenClassifierModel::fit(&docs, &weights, 1.0),
            Err(Error::NoTrainingFeatures)
        ));
    }

    /// Two triangles plus an isolated node `g` whose tokens come from the
    /// first triangle's vocabulary.
    fn triangle_with_satellite() -> (Graph, AttributeTable) {
        let graph = parse_edge_list(
            fixtures::TWO_TRIANGLE_EDGES,
            Path::new("t"),
            &EdgeListOptions::default(),
        )
        .unwrap();
        let attrs = format!(
            "{}{}",
            fixtures::TWO_TRIANGLE_ATTRS,
            r#"{"id":"g","tokens":["red","crimson"]}"#
        );
        parse_attributes(&attrs, Path::new("a"), graph).unwrap()
    }

    #[test]
    fn run_clan_reassigns_by_token_evidence() {
        let (graph, attrs) = triangle_with_satellite();
        let result = run_clan(&graph, &attrs, 2, &LouvainConfig::default(), 1.0).unwrap();

        assert_eq!(result.split.significant.len(), 2);
        assert_eq!(result.split.minority.len(), 1);

        let g_node = graph.node_id("g").unwrap();
        let red_comm = result
            .step1_partition
            .community_of(graph.node_id("a").unwrap());
        assert_eq!(result.final_partition.community_of(g_node), red_comm);

        let r = result.reassigned[&g_node];
        assert_eq!(r.to, red_comm);
        assert!(r.posterior > 0.5);

        // conservativeness: significant nodes untouched
        for node in 0..graph.node_count() {
            if node != g_node {
                assert_eq!(
                    result.final_partition.community_of(node),
                    result.step1_partition.community_of(node)
                );
            }
        }
        // inclusiveness: every node in a significant community
        for node in 0..graph.node_count() {
            assert!(result
                .split
                .significant
                .contains(&result.final_partition.community_of(node)));
        }
    }

    #[test]
    fn run_clan_identity_when_no_minority() {
        let graph = fixtures::two_triangle_graph();
        let attrs = AttributeTable::empty(&graph);
        let result = run_clan(&graph, &attrs, 2, &LouvainConfig::default(), 1.0).unwrap();
        assert!(result.reassigned.is_empty());
        assert_eq!(
            result.final_partition.assignment(),
            result.step1_partition.assignment()
        );
    }

    #[test]
    fn run_clan_errors_when_threshold_excludes_everything() {
        let graph = fixtures::two_triangle_graph();
        let attrs = AttributeTable::empty(&graph);
        assert!(matches!(
            run_clan(&graph, &attrs, 3, &LouvainConfig::default(), 1.0),
            Err(Error::NoSignificantCommunities { threshold: 3 })
        ));
    }

    #[test]
    fn run_clan_propagates_no_training_features() {
        let graph = parse_edge_list(
            fixtures::TWO_TRIANGLE_EDGES,
            Path::new("t"),
            &EdgeListOptions::default(),
        )
        .unwrap();
        let (graph, attrs) =
            parse_attributes(r#"{"id":"g","tokens":["lonely"]}"#, Path::new("a"), graph).unwrap();
        assert!(matches!(
            run_clan(&graph, &attrs, 2, &LouvainConfig::default(), 1.0),
            Err(Error::NoTrainingFeatures)
        ));
    }

    #[test]
    fn default_threshold_floor_and_scaling() {
        assert_eq!(default_threshold(6), 10);
        assert_eq!(default_threshold(1000), 10);
        assert_eq!(default_threshold(5000), 50);
    }
}
