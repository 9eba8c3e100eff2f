//! Ground-truth group labels (partial map over graph nodes), CSV ingestion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Partial node → label map; labels only reference nodes present in the graph.
#[derive(Debug, Clone, Default)]
pub struct LabelTable {
    labels: BTreeMap<NodeId, String>,
    label_set: BTreeSet<String>,
}

impl LabelTable {
    pub fn from_map(labels: BTreeMap<NodeId, String>) -> Self {
        let label_set = labels.values().cloned().collect();
        LabelTable { labels, label_set }
    }

    pub fn label(&self, node: NodeId) -> Option<&str> {
        self.labels.get(&node).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<NodeId, String> {
        &self.labels
    }

    pub fn label_set(&self) -> &BTreeSet<String> {
        &self.label_set
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.len()
    }

    /// Nodes carrying `label`, in ascending id order.
    pub fn group(&self, label: &str) -> Vec<NodeId> {
        self.labels
            .iter()
            .filter(|(_, l)| l.as_str() == label)
            .map(|(&n, _)| n)
            .collect()
    }

    /// Restrict to the nodes of `new_graph`, matching by external id.
    pub fn restricted(&self, old_graph: &Graph, new_graph: &Graph) -> LabelTable {
        let mut labels = BTreeMap::new();
        for (&node, label) in &self.labels {
            if let Some(new) = new_graph.node_id(old_graph.external_id(node)) {
                labels.insert(new, label.clone());
            }
        }
        LabelTable::from_map(labels)
    }
}

/// Load headerless CSV lines `id,label`. Ids must reference known graph nodes;
/// a repeated id is only an error when the labels conflict.
pub fn load_labels(path: &Path, graph: &Graph) -> Result<LabelTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, path, graph)
}

pub(crate) fn parse_labels(text: &str, path: &Path, graph: &Graph) -> Result<LabelTable> {
    let mut labels: BTreeMap<NodeId, String> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (id, label) = line
            .split_once(',')
            .ok_or_else(|| Error::parse(path, lineno, "expected `id,label`"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::parse(path, lineno, "empty label"));
        }
        let node = graph.node_id(id).ok_or_else(|| Error::UnknownNodeId {
            id: id.to_string(),
            path: path.to_path_buf(),
        })?;
        if let Some(existing) = labels.get(&node) {
            if existing != label {
                return Err(Error::ConflictingLabel {
                    id: id.to_string(),
                    first: existing.clone(),
                    second: label.to_string(),
                });
            }
        } else {
            labels.insert(node, label.to_string());
        }
    }
    Ok(LabelTable::from_map(labels))
}

/// Serialize to headerless CSV, one `id,label` line per labeled node.
pub fn labels_csv_string(graph: &Graph, labels: &LabelTable) -> String {
    let mut out = String::new();
    for (&node, label) in labels.labels() {
        let _ = writeln!(out, "{},{}", graph.external_id(node), label);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_edge_list, EdgeListOptions};
    use std::path::PathBuf;

    fn graph_ab() -> Graph {
        parse_edge_list("a\tb\n", &PathBuf::from("t"), &EdgeListOptions::default()).unwrap()
    }

    fn parse(text: &str, graph: &Graph) -> Result<LabelTable> {
        parse_labels(text, &PathBuf::from("labels.csv"), graph)
    }

    #[test]
    fn basic_load() {
        let g = graph_ab();
        let t = parse("a,Supporter\n", &g).unwrap();
        assert_eq!(t.label(0), Some("Supporter"));
        assert_eq!(t.label(1), None);
        assert_eq!(t.label_set().len(), 1);
    }

    #[test]
    fn conflicting_duplicate_errors() {
        let g = graph_ab();
        let err = parse("a,X\na,Y\n", &g).unwrap_err();
        assert!(matches!(err, Error::ConflictingLabel { .. }));
    }

    #[test]
    fn repeated_identical_label_is_fine() {
        let g = graph_ab();
        let t = parse("a,X\na,X\n", &g).unwrap();
        assert_eq!(t.labeled_count(), 1);
    }

    #[test]
    fn unknown_id_errors() {
        let g = graph_ab();
        let err = parse("z,X\n", &g).unwrap_err();
        assert!(matches!(err, Error::UnknownNodeId { .. }));
    }

    #[test]
    fn group_lists_members_in_order() {
        let g = parse_edge_list(
            "a\tb\nb\tc\n",
            &PathBuf::from("t"),
            &EdgeListOptions::default(),
        )
        .unwrap();
        let t = parse("c,X\na,X\nb,Y\n", &g).unwrap();
        assert_eq!(t.group("X"), vec![0, 2]);
    }
}
