//! Undirected weighted graph over dense node ids, plus partitions of its nodes.
//!
//! Edge lists are ingested from UTF-8 tab-separated files (`src<TAB>dst[<TAB>weight]`,
//! `#`-prefixed comment lines ignored). Parallel edges merge by summing weights, so
//! retweet multiplicities become weights. String ids are mapped to dense node ids in
//! first-seen order; ids that only appear in attribute files become isolated nodes.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Dense node identifier, assigned in first-seen order during ingestion.
pub type NodeId = usize;

/// Community identifier within a [`Partition`].
pub type CommunityId = usize;

/// Options for [`load_edge_list`].
#[derive(Debug, Clone, Default)]
pub struct EdgeListOptions {
    /// Ignore multiplicities: every merged edge ends up with weight 1.0.
    pub unweighted: bool,
}

/// Undirected weighted graph. Immutable after construction.
///
/// Self-loops are accepted and contribute twice to their endpoint's weighted
/// degree (the standard modularity convention).
#[derive(Debug, Clone)]
pub struct Graph {
    /// Per-node list of (neighbor, weight). Symmetric; a self-loop appears once.
    adjacency: Vec<Vec<(NodeId, f64)>>,
    /// Canonical edge list with u <= v, no duplicates.
    edges: Vec<(NodeId, NodeId, f64)>,
    /// Sum of weighted degrees == 2 * sum of edge weights.
    total_weight_2m: f64,
    external_ids: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical merged edges, u <= v, in ascending (u, v) order.
    pub fn edges(&self) -> &[(NodeId, NodeId, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[node]
    }

    /// Weighted degree; a self-loop of weight w contributes 2w.
    pub fn degree(&self, node: NodeId) -> f64 {
        self.adjacency[node]
            .iter()
            .map(|&(v, w)| if v == node { 2.0 * w } else { w })
            .sum()
    }

    /// Number of incident merged edges (self-loop counts once). Used for
    /// degree bucketing, where an integer degree is needed.
    pub fn structural_degree(&self, node: NodeId) -> usize {
        self.adjacency[node].len()
    }

    /// Sum of all weighted degrees; equals 2 * (sum of edge weights).
    pub fn total_weight_2m(&self) -> f64 {
        self.total_weight_2m
    }

    pub fn external_id(&self, node: NodeId) -> &str {
        &self.external_ids[node]
    }

    pub fn external_ids(&self) -> &[String] {
        &self.external_ids
    }

    pub fn node_id(&self, external: &str) -> Option<NodeId> {
        self.index.get(external).copied()
    }

    /// Recompute the degree sum from adjacency; used by consistency checks.
    pub fn recompute_total_weight_2m(&self) -> f64 {
        (0..self.node_count()).map(|u| self.degree(u)).sum()
    }

    /// Induced subgraph on `keep`, preserving external ids. Surviving nodes are
    /// re-densified in ascending old-id order; edges with a removed endpoint drop.
    pub fn induced_subgraph(&self, keep: &BTreeSet<NodeId>) -> Graph {
        let mut builder = GraphBuilder::new();
        for &u in keep {
            builder.ensure_node(self.external_id(u));
        }
        for &(u, v, w) in &self.edges {
            if keep.contains(&u) && keep.contains(&v) {
                builder.add_edge(self.external_id(u), self.external_id(v), w);
            }
        }
        builder.build()
    }
}

/// Incremental graph construction with parallel-edge merging.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    external_ids: Vec<String>,
    index: HashMap<String, NodeId>,
    // Merged weights keyed by canonical (min, max) endpoint pair.
    weights: HashMap<(NodeId, NodeId), f64>,
    insertion_order: Vec<(NodeId, NodeId)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern an external id, creating an isolated node if unseen.
    pub fn ensure_node(&mut self, external: &str) -> NodeId {
        if let Some(&id) = self.index.get(external) {
            return id;
        }
        let id = self.external_ids.len();
        self.external_ids.push(external.to_string());
        self.index.insert(external.to_string(), id);
        id
    }

    /// Add an undirected edge; parallel edges merge by summing weights.
    pub fn add_edge(&mut self, src: &str, dst: &str, weight: f64) {
        let u = self.ensure_node(src);
        let v = self.ensure_node(dst);
        let key = (u.min(v), u.max(v));
        match self.weights.get_mut(&key) {
            Some(w) => *w += weight,
            None => {
                self.weights.insert(key, weight);
                self.insertion_order.push(key);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.external_ids.len()
    }

    pub fn build(self) -> Graph {
        let n = self.external_ids.len();
        let mut edges: Vec<(NodeId, NodeId, f64)> = self
            .insertion_order
            .iter()
            .map(|&(u, v)| (u, v, self.weights[&(u, v)]))
            .collect();
        edges.sort_unstable_by_key(|&(u, v, _)| (u, v));

        let mut adjacency: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); n];
        let mut total = 0.0;
        for &(u, v, w) in &edges {
            adjacency[u].push((v, w));
            if u != v {
                adjacency[v].push((u, w));
            }
            total += 2.0 * w;
        }
        for adj in &mut adjacency {
            adj.sort_unstable_by_key(|&(v, _)| v);
        }

        Graph {
            adjacency,
            edges,
            total_weight_2m: total,
            external_ids: self.external_ids,
            index: self.index,
        }
    }
}

/// Load a tab-separated edge list. Each non-comment line is
/// `src<TAB>dst[<TAB>weight]`; direction is discarded and parallel edges merge.
pub fn load_edge_list(path: &Path, options: &EdgeListOptions) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path, options)
}

/// Parse edge-list text directly (same format as [`load_edge_list`]).
pub fn parse_edge_list_str(text: &str, options: &EdgeListOptions) -> Result<Graph> {
    parse_edge_list(text, Path::new("<edge list>"), options)
}

pub(crate) fn parse_edge_list(text: &str, path: &Path, options: &EdgeListOptions) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    let mut saw_edge = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let (src, dst, weight) = match fields.as_slice() {
            [src, dst] => (*src, *dst, 1.0),
            [src, dst, w] => {
                let weight: f64 = w
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("invalid weight `{w}`")))?;
                if weight <= 0.0 || !weight.is_finite() {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("non-positive weight `{w}`"),
                    ));
                }
                (*src, *dst, weight)
            }
            _ => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!(
                        "expected 2 or 3 tab-separated fields, found {}",
                        fields.len()
                    ),
                ))
            }
        };
        if src.is_empty() || dst.is_empty() {
            return Err(Error::parse(path, lineno, "empty node id"));
        }
        builder.add_edge(src, dst, weight);
        saw_edge = true;
    }
    if !saw_edge {
        return Err(Error::EmptyGraph);
    }
    let mut graph = builder.build();
    if options.unweighted {
        let mut flat = GraphBuilder::new();
        for ext in graph.external_ids() {
            flat.ensure_node(ext);
        }
        for &(u, v, _) in graph.edges() {
            flat.add_edge(graph.external_id(u), graph.external_id(v), 1.0);
        }
        graph = flat.build();
    }
    Ok(graph)
}

/// Serialize a graph back to the tab-separated edge-list form.
pub fn edge_list_string(graph: &Graph) -> String {
    let mut out = String::new();
    for &(u, v, w) in graph.edges() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            graph.external_id(u),
            graph.external_id(v),
            w
        );
    }
    out
}

/// Total assignment of every node to exactly one community.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<CommunityId>,
    /// Member count per community id; index = community id.
    sizes: Vec<usize>,
}

impl Partition {
    /// Build from a raw assignment vector. Community ids need not be
    /// contiguous; empty ids get size 0 until [`Partition::normalized`].
    pub fn from_assignment(assignment: Vec<CommunityId>) -> Self {
        let max = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; max];
        for &c in &assignment {
            sizes[c] += 1;
        }
        Partition { assignment, sizes }
    }

    /// Every node alone in its own community.
    pub fn singletons(node_count: usize) -> Self {
        Partition {
            assignment: (0..node_count).collect(),
            sizes: vec![1; node_count],
        }
    }

    /// All nodes in community 0.
    pub fn one_community(node_count: usize) -> Self {
        Partition {
            assignment: vec![0; node_count],
            sizes: vec![node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_of(&self, node: NodeId) -> CommunityId {
        self.assignment[node]
    }

    pub fn assignment(&self) -> &[CommunityId] {
        &self.assignment
    }

    /// Member counts indexed by community id (may contain zeros before
    /// normalization).
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of non-empty communities.
    pub fn community_count(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 0).count()
    }

    /// Members of every non-empty community, keyed by community id.
    pub fn communities(&self) -> Vec<(CommunityId, Vec<NodeId>)> {
        let mut map: Vec<Vec<NodeId>> = vec![Vec::new(); self.sizes.len()];
        for (node, &c) in self.assignment.iter().enumerate() {
            map[c].push(node);
        }
        map.into_iter()
            .enumerate()
            .filter(|(_, members)| !members.is_empty())
            .collect()
    }

    /// Relabel to contiguous community ids 0..k ordered by decreasing size,
    /// ties broken by smallest member id. Community 0 is always the largest.
    pub fn normalized(&self) -> Partition {
        let mut comms = self.communities();
        comms.sort_by_key(|(_, members)| (usize::MAX - members.len(), members[0]));
        let mut assignment = vec![0usize; self.assignment.len()];
        let mut sizes = Vec::with_capacity(comms.len());
        for (new_id, (_, members)) in comms.iter().enumerate() {
            for &node in members {
                assignment[node] = new_id;
            }
            sizes.push(members.len());
        }
        Partition { assignment, sizes }
    }
}
