//! Two-stage community detection for attributed graphs.
//!
//! Stage one partitions a weighted undirected graph by greedy modularity
//! optimization. Stage two splits the partition at a size threshold, trains a
//! token classifier on the large ("significant") communities, and reassigns
//! every node of the small ones, so no node is left out of the analysis.
//!
//! The companion modules measure what exclusion would have cost
//! ([`eval`]: best-match F1/Jaccard, unlabeled percentage, discarded-token
//! audit) and stress-test detection under degree-correlated group membership
//! ([`skew`], [`sbm`]).

pub mod attributes;
pub mod error;
pub mod eval;
pub mod export;
pub mod fixtures;
pub mod graph;
pub mod labels;
pub mod louvain;
pub mod pipeline;
pub mod sbm;
pub mod skew;

pub use attributes::{attributes_jsonl_string, load_attributes, tokenize, AttributeTable};
pub use error::{Error, Result};
pub use eval::{
    agreement_coloring, averaged_scores, discarded_token_audit, pairwise_f1, pairwise_jaccard,
    significant_assignment, unlabeled_fraction, Agreement, AuditOptions, AveragedScores,
    CommunityMatch, PartialAssignment, TokenAudit,
};
pub use graph::{
    edge_list_string, load_edge_list, parse_edge_list_str, CommunityId, EdgeListOptions, Graph,
    GraphBuilder, NodeId, Partition,
};
pub use labels::{labels_csv_string, load_labels, LabelTable};
pub use louvain::{
    aggregate_graph, local_move_phase, louvain, louvain_with_trace, modularity, LouvainConfig,
    LouvainTrace,
};
pub use pipeline::{
    classify_node, default_threshold, run_clan, split_by_threshold, train_classifier, ClanResult,
    Reassignment, ThresholdSplit, TokenClassifierModel,
};
pub use sbm::{generate_attributed_sbm, SbmSpec};
pub use skew::{
    degree_ratio_curve, subsample_to_slope, BucketOutcome, Bucketing, FeasibilityReport,
    RatioCurve, RatioPoint, SubsampleOutcome,
};
