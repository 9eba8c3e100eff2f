//! Shared plumbing: the communities.json schema, dataset loading, report
//! assembly, and atomic-ish output writing (everything is computed before the
//! first byte hits disk).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use clan_core::eval::{AveragedScores, CommunityMatch, PartialAssignment, TokenAudit};
use clan_core::{
    load_attributes, load_edge_list, AttributeTable, EdgeListOptions, Graph, GraphBuilder,
};

/// Canonical detection output. `final` equals `step1` for plain modularity
/// runs; for the two-step method it records every reassignment.
#[derive(Debug, Serialize, Deserialize)]
pub struct CommunitiesFile {
    pub method: String,
    pub seed: u64,
    pub threshold: usize,
    pub alpha: f64,
    pub unweighted: bool,
    pub node_count: usize,
    pub q_step1: f64,
    pub q_final: f64,
    pub significant: Vec<usize>,
    /// external id -> step-1 community
    pub step1: BTreeMap<String, usize>,
    /// external id -> final community
    #[serde(rename = "final")]
    pub final_assignment: BTreeMap<String, usize>,
    /// external id -> reassignment record
    pub reassigned: BTreeMap<String, ReassignedEntry>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReassignedEntry {
    pub from: usize,
    pub to: usize,
    pub posterior: f64,
}

impl CommunitiesFile {
    pub fn load(dir: &Path) -> Result<CommunitiesFile> {
        let path = dir.join("communities.json");
        let text =
            fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid {}", path.display()))
    }

    /// Nodes of significant communities under the final assignment, keyed by
    /// the node ids of `graph`.
    pub fn significant_final_assignment(&self, graph: &Graph) -> Result<PartialAssignment> {
        let significant: std::collections::BTreeSet<usize> =
            self.significant.iter().copied().collect();
        let mut assignment = PartialAssignment::new();
        for (external, &community) in &self.final_assignment {
            if !significant.contains(&community) {
                continue;
            }
            let node = graph
                .node_id(external)
                .with_context(|| format!("communities.json names unknown node `{external}`"))?;
            assignment.insert(node, community);
        }
        Ok(assignment)
    }
}

/// The node universe of a finished detection run: every external id from
/// communities.json as a node, plus real edges when an edge list is supplied.
pub fn universe_graph(
    communities: &CommunitiesFile,
    edges: Option<&Path>,
    unweighted: bool,
) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    for external in communities.step1.keys() {
        builder.ensure_node(external);
    }
    let skeleton = builder.build();
    let graph = match edges {
        None => skeleton,
        Some(path) => {
            let loaded = load_edge_list(path, &EdgeListOptions { unweighted })?;
            let mut builder = GraphBuilder::new();
            for external in communities.step1.keys() {
                builder.ensure_node(external);
            }
            for &(u, v, w) in loaded.edges() {
                let (u, v) = (loaded.external_id(u), loaded.external_id(v));
                if skeleton.node_id(u).is_none() || skeleton.node_id(v).is_none() {
                    bail!("edge list names node unknown to communities.json: {u} -- {v}");
                }
                builder.add_edge(u, v, w);
            }
            builder.build()
        }
    };
    Ok(graph)
}

/// Load attributes against a fixed node universe; an id outside the universe
/// is an error here (detection already fixed the node set).
pub fn attributes_for_universe(path: &Path, graph: &Graph) -> Result<(Graph, AttributeTable)> {
    let before = graph.node_count();
    let (grown, attrs) = load_attributes(path, graph.clone())?;
    if grown.node_count() != before {
        bail!(
            "{} references nodes unknown to communities.json",
            path.display()
        );
    }
    Ok((grown, attrs))
}

/// Full dataset load for detection-style commands: edges, then attributes
/// (which may add isolated nodes).
pub fn load_dataset(
    edges: &Path,
    attrs: Option<&Path>,
    unweighted: bool,
) -> Result<(Graph, Option<AttributeTable>)> {
    let graph = load_edge_list(edges, &EdgeListOptions { unweighted })?;
    match attrs {
        None => Ok((graph, None)),
        Some(path) => {
            let (graph, table) = load_attributes(path, graph)?;
            Ok((graph, Some(table)))
        }
    }
}

/// The stable metric-report schema shared by `evaluate` and `skew`.
#[derive(Debug, Serialize)]
pub struct MetricReportJson {
    pub avg_f1: f64,
    pub avg_jaccard: f64,
    pub unlabeled_pct: f64,
    pub q_final: f64,
    pub discarded_tokens: Option<TokenAudit>,
    pub per_community: Vec<CommunityMatch>,
}

impl MetricReportJson {
    pub fn new(
        scores: &AveragedScores,
        unlabeled_pct: f64,
        q_final: f64,
        discarded_tokens: Option<TokenAudit>,
    ) -> MetricReportJson {
        MetricReportJson {
            avg_f1: scores.avg_f1,
            avg_jaccard: scores.avg_jaccard,
            unlabeled_pct,
            q_final,
            discarded_tokens,
            per_community: scores.per_community.clone(),
        }
    }
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Write every output file, creating directories as needed. Callers build
/// the full file list first so failures never leave partial results.
pub fn write_outputs(files: &[(PathBuf, String)]) -> Result<()> {
    for (path, _) in files {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    for (path, content) in files {
        fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
