//! Detection-quality metrics against ground truth: symmetric average
//! best-match F1/Jaccard, unlabeled-node percentage, the discarded-token
//! audit, and per-node agreement coloring.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{CommunityId, NodeId, Partition};
use crate::labels::LabelTable;

/// Partial node → community map (nodes in significant communities only).
pub type PartialAssignment = BTreeMap<NodeId, CommunityId>;

/// Restrict a total partition to the nodes of the given communities.
pub fn significant_assignment(
    partition: &Partition,
    significant: &BTreeSet<CommunityId>,
) -> PartialAssignment {
    partition
        .assignment()
        .iter()
        .enumerate()
        .filter(|(_, c)| significant.contains(c))
        .map(|(node, &c)| (node, c))
        .collect()
}

/// F1 = 2|A∩B| / (|A| + |B|). The truth set must be non-empty.
pub fn pairwise_f1(detected: &BTreeSet<NodeId>, truth: &BTreeSet<NodeId>) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptyTruthSet);
    }
    let inter = detected.intersection(truth).count();
    Ok(2.0 * inter as f64 / (detected.len() + truth.len()) as f64)
}

/// Jaccard = |A∩B| / |A∪B|. At least one set must be non-empty.
pub fn pairwise_jaccard(a: &BTreeSet<NodeId>, b: &BTreeSet<NodeId>) -> Result<f64> {
    if a.is_empty() && b.is_empty() {
        return Err(Error::BothSetsEmpty);
    }
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    Ok(inter as f64 / union as f64)
}

/// Best-match row for one detected community.
#[derive(Debug, Clone, Serialize)]
pub struct CommunityMatch {
    pub community: CommunityId,
    pub best_truth: String,
    pub f1: f64,
    pub jaccard: f64,
}

/// Symmetric average best-match scores plus the detected → truth matching.
#[derive(Debug, Clone)]
pub struct AveragedScores {
    pub avg_f1: f64,
    pub avg_jaccard: f64,
    pub per_community: Vec<CommunityMatch>,
    pub matching: BTreeMap<CommunityId, String>,
}

/// Compute the symmetric average best-match F1 and Jaccard.
///
/// Evaluation is restricted to ground-truth-labeled nodes. Each detected
/// community is matched to its best-F1 truth group and vice versa; the final
/// score is the mean of the two directional averages. Matching by F1 also
/// maximizes Jaccard since F1 = 2J/(1+J) is monotone in J. Ties break toward
/// the larger candidate group, then the lower id. Labeled nodes outside the
/// assignment count against the recall of their truth group.
pub fn averaged_scores(detected: &PartialAssignment, truth: &LabelTable) -> Result<AveragedScores> {
    if truth.labeled_count() == 0 {
        return Err(Error::NoLabeledNodes);
    }

    let mut truth_sets: BTreeMap<&str, BTreeSet<NodeId>> = BTreeMap::new();
    for (&node, label) in truth.labels() {
        truth_sets.entry(label).or_default().insert(node);
    }
    let truth_sets: Vec<(&str, BTreeSet<NodeId>)> = truth_sets.into_iter().collect();

    let mut detected_sets: BTreeMap<CommunityId, BTreeSet<NodeId>> = BTreeMap::new();
    for (&node, &community) in detected {
        if truth.label(node).is_some() {
            detected_sets.entry(community).or_default().insert(node);
        }
    }
    let detected_sets: Vec<(CommunityId, BTreeSet<NodeId>)> = detected_sets.into_iter().collect();

    // detected -> truth direction
    let mut per_community = Vec::new();
    let mut matching = BTreeMap::new();
    let mut f1_dt_sum = 0.0;
    let mut j_dt_sum = 0.0;
    for (community, members) in &detected_sets {
        let mut best: Option<(f64, usize, usize)> = None; // (f1, size, index)
        for (idx, (_, group)) in truth_sets.iter().enumerate() {
            let f1 = pairwise_f1(members, group)?;
            let better = match best {
                None => true,
                Some((bf, bs, _)) => f1 > bf || (f1 == bf && group.len() > bs),
            };
            if better {
                best = Some((f1, group.len(), idx));
            }
        }
        let (f1, _, idx) = best.expect("at least one truth group");
        let (label, group) = &truth_sets[idx];
        let jaccard = pairwise_jaccard(members, group)?;
        f1_dt_sum += f1;
        j_dt_sum += jaccard;
        matching.insert(*community, label.to_string());
        per_community.push(CommunityMatch {
            community: *community,
            best_truth: label.to_string(),
            f1,
            jaccard,
        });
    }
    let (f1_dt, j_dt) = if detected_sets.is_empty() {
        (0.0, 0.0)
    } else {
        let n = detected_sets.len() as f64;
        (f1_dt_sum / n, j_dt_sum / n)
    };

    // truth -> detected direction; nodes missing from every detected
    // community simply depress the attainable intersection
    let mut f1_td_sum = 0.0;
    let mut j_td_sum = 0.0;
    for (_, group) in &truth_sets {
        let mut best: Option<(f64, f64, usize)> = None; // (f1, jaccard, size)
        for (_, members) in &detected_sets {
            let f1 = pairwise_f1(members, group)?;
            let better = match best {
                None => true,
                Some((bf, _, bs)) => f1 > bf || (f1 == bf && members.len() > bs),
            };
            if better {
                best = Some((f1, pairwise_jaccard(members, group)?, members.len()));
            }
        }
        if let Some((f1, jaccard, _)) = best {
            f1_td_sum += f1;
            j_td_sum += jaccard;
        }
    }
    let n_truth = truth_sets.len() as f64;
    let f1_td = f1_td_sum / n_truth;
    let j_td = j_td_sum / n_truth;

    Ok(AveragedScores {
        avg_f1: (f1_dt + f1_td) / 2.0,
        avg_jaccard: (j_dt + j_td) / 2.0,
        per_community,
        matching,
    })
}

/// Percentage of nodes with no significant-community assignment.
pub fn unlabeled_fraction(node_count: usize, assignment: &PartialAssignment) -> f64 {
    assert!(node_count >= 1, "node_count must be >= 1");
    debug_assert!(assignment.keys().all(|&n| n < node_count));
    100.0 * (node_count - assignment.len()) as f64 / node_count as f64
}

/// Result of the lost-information audit.
#[derive(Debug, Clone, Serialize)]
pub struct TokenAudit {
    #[serde(rename = "count")]
    pub discarded_count: usize,
    #[serde(rename = "pct")]
    pub discarded_pct: f64,
    /// Most frequent discarded tokens first.
    pub examples: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AuditOptions {
    /// Restrict the audit to '#'-prefixed tokens.
    pub hashtags_only: bool,
    pub example_limit: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            hashtags_only: false,
            example_limit: 10,
        }
    }
}

/// A token is discarded iff every node carrying it is unassigned. The
/// percentage is relative to the audited vocabulary (all tokens, or hashtag
/// tokens under `hashtags_only`).
pub fn discarded_token_audit(
    attrs: &AttributeTable,
    assignment: &PartialAssignment,
    options: &AuditOptions,
) -> TokenAudit {
    let audited = |token: &str| !options.hashtags_only || token.starts_with('#');

    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    let mut on_assigned: HashMap<&str, bool> = HashMap::new();
    for node in 0..attrs.node_count() {
        let assigned = assignment.contains_key(&node);
        for token in attrs.tokens(node) {
            if !audited(token) {
                continue;
            }
            *occurrences.entry(token).or_insert(0) += 1;
            let flag = on_assigned.entry(token).or_insert(false);
            *flag |= assigned;
        }
    }

    let vocab_size = attrs.vocabulary().iter().filter(|t| audited(t)).count();
    let mut discarded: Vec<(&str, usize)> = on_assigned
        .iter()
        .filter(|(_, &assigned)| !assigned)
        .map(|(&token, _)| (token, occurrences[token]))
        .collect();
    discarded.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));

    let discarded_count = discarded.len();
    let discarded_pct = if vocab_size == 0 {
        0.0
    } else {
        100.0 * discarded_count as f64 / vocab_size as f64
    };
    let examples = discarded
        .into_iter()
        .take(options.example_limit)
        .map(|(token, _)| token.to_string())
        .collect();

    TokenAudit {
        discarded_count,
        discarded_pct,
        examples,
    }
}

/// Agreement of an assigned node's matched label with its ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
}

/// Color each labeled node by agreement between its community's matched truth
/// label and its own label. Unassigned labeled nodes disagree; unlabeled
/// nodes are excluded.
pub fn agreement_coloring(
    assignment: &PartialAssignment,
    truth: &LabelTable,
    matching: &BTreeMap<CommunityId, String>,
) -> BTreeMap<NodeId, Agreement> {
    let mut coloring = BTreeMap::new();
    for (&node, label) in truth.labels() {
        let agreement = match assignment.get(&node) {
            Some(community) if matching.get(community) == Some(label) => Agreement::Agree,
            _ => Agreement::Disagree,
        };
        coloring.insert(node, agreement);
    }
    coloring
}
