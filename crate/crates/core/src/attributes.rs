//! Node attribute tokens (text/hashtag features) and their JSON-lines ingestion.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};

/// Per-node lowercase token lists plus the full vocabulary.
///
/// Every node of the companion graph has an entry (possibly empty).
#[derive(Debug, Clone)]
pub struct AttributeTable {
    tokens: Vec<Vec<String>>,
    vocabulary: BTreeSet<String>,
}

impl AttributeTable {
    /// Build from per-node token lists; tokens are lowercased.
    pub fn from_tokens(tokens: Vec<Vec<String>>) -> Self {
        let tokens: Vec<Vec<String>> = tokens
            .into_iter()
            .map(|list| list.into_iter().map(|t| t.to_lowercase()).collect())
            .collect();
        let vocabulary = tokens.iter().flatten().cloned().collect();
        AttributeTable { tokens, vocabulary }
    }

    /// Empty token list for every node of `graph`.
    pub fn empty(graph: &Graph) -> Self {
        AttributeTable {
            tokens: vec![Vec::new(); graph.node_count()],
            vocabulary: BTreeSet::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn tokens(&self, node: NodeId) -> &[String] {
        &self.tokens[node]
    }

    pub fn vocabulary(&self) -> &BTreeSet<String> {
        &self.vocabulary
    }

    /// Restrict to the nodes of `new_graph`, matching by external id.
    /// Nodes unknown to `old_graph` get empty lists.
    pub fn restricted(&self, old_graph: &Graph, new_graph: &Graph) -> AttributeTable {
        let tokens = (0..new_graph.node_count())
            .map(|u| {
                old_graph
                    .node_id(new_graph.external_id(u))
                    .map(|old| self.tokens[old].clone())
                    .unwrap_or_default()
            })
            .collect();
        AttributeTable::from_tokens(tokens)
    }
}

#[derive(Deserialize)]
struct AttributeLine {
    id: String,
    #[serde(default)]
    tokens: Option<Vec<String>>,
    #[serde(default)]
    text: Option<String>,
}

/// Tokenize raw text: lowercase, split on whitespace, strip leading/trailing
/// characters that are not alphanumeric, `#`, or `@`. Tokens that strip to
/// nothing are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split_whitespace()
        .filter_map(|raw| {
            let keep = |c: char| c.is_alphanumeric() || c == '#' || c == '@';
            let trimmed = raw.trim_matches(|c| !keep(c));
            if trimmed.is_empty() {
                None
            } else {
                Some(trimmed.to_string())
            }
        })
        .collect()
}

/// Load JSON-lines attributes. Each line is `{"id": ..., "tokens": [...]}` or
/// `{"id": ..., "text": "..."}`. Ids absent from the graph become new isolated
/// nodes, so `graph` is rebuilt when needed and returned alongside the table.
pub fn load_attributes(path: &Path, graph: Graph) -> Result<(Graph, AttributeTable)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_attributes(&text, path, graph)
}

pub(crate) fn parse_attributes(
    text: &str,
    path: &Path,
    graph: Graph,
) -> Result<(Graph, AttributeTable)> {
    let mut parsed: Vec<(String, Vec<String>)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let record: AttributeLine = serde_json::from_str(line)
            .map_err(|e| Error::parse(path, lineno, format!("invalid JSON: {e}")))?;
        let tokens = match (record.tokens, record.text) {
            (Some(tokens), _) => tokens.into_iter().map(|t| t.to_lowercase()).collect(),
            (None, Some(text)) => tokenize(&text),
            (None, None) => {
                return Err(Error::parse(
                    path,
                    lineno,
                    "record has neither `tokens` nor `text`",
                ))
            }
        };
        parsed.push((record.id, tokens));
    }

    // Ids unseen in the edge list become isolated nodes.
    let needs_growth = parsed.iter().any(|(id, _)| graph.node_id(id).is_none());
    let graph = if needs_growth {
        let mut builder = GraphBuilder::new();
        for ext in graph.external_ids() {
            builder.ensure_node(ext);
        }
        for &(u, v, w) in graph.edges() {
            builder.add_edge(graph.external_id(u), graph.external_id(v), w);
        }
        for (id, _) in &parsed {
            builder.ensure_node(id);
        }
        builder.build()
    } else {
        graph
    };

    let mut tokens: Vec<Vec<String>> = vec![Vec::new(); graph.node_count()];
    for (id, list) in parsed {
        let node = graph.node_id(&id).expect("id interned above");
        tokens[node] = list;
    }
    let vocabulary = tokens.iter().flatten().cloned().collect();
    Ok((graph, AttributeTable { tokens, vocabulary }))
}

/// Serialize to the JSON-lines form, one record per node in id order.
pub fn attributes_jsonl_string(graph: &Graph, attrs: &AttributeTable) -> String {
    let mut out = String::new();
    for node in 0..graph.node_count() {
        let record = serde_json::json!({
            "id": graph.external_id(node),
            "tokens": attrs.tokens(node),
        });
        let _ = writeln!(out, "{record}");
    }
    out
}
