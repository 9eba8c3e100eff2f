//! DOT and GEXF graph exports with per-node attributes: community ids from a
//! detection run, or agreement coloring against ground truth.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::eval::Agreement;
use crate::graph::{Graph, NodeId, Partition};

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Undirected DOT graph with a `community` attribute per node.
pub fn community_dot(graph: &Graph, partition: &Partition) -> String {
    let mut out = String::from("graph communities {\n");
    for node in 0..graph.node_count() {
        let _ = writeln!(
            out,
            "    {} [community={}];",
            dot_quote(graph.external_id(node)),
            partition.community_of(node)
        );
    }
    for &(u, v, w) in graph.edges() {
        let _ = writeln!(
            out,
            "    {} -- {} [weight={}];",
            dot_quote(graph.external_id(u)),
            dot_quote(graph.external_id(v)),
            w
        );
    }
    out.push_str("}\n");
    out
}

/// Undirected DOT graph colored by agreement: green agree, red disagree.
/// Nodes missing from the coloring (no ground truth) stay gray.
pub fn agreement_dot(graph: &Graph, coloring: &BTreeMap<NodeId, Agreement>) -> String {
    let mut out = String::from("graph agreement {\n");
    out.push_str("    node [style=filled];\n");
    for node in 0..graph.node_count() {
        let quoted = dot_quote(graph.external_id(node));
        match coloring.get(&node) {
            Some(Agreement::Agree) => {
                let _ = writeln!(out, "    {quoted} [agreement=agree, fillcolor=green];");
            }
            Some(Agreement::Disagree) => {
                let _ = writeln!(out, "    {quoted} [agreement=disagree, fillcolor=red];");
            }
            None => {
                let _ = writeln!(out, "    {quoted} [fillcolor=gray];");
            }
        }
    }
    for &(u, v, w) in graph.edges() {
        let _ = writeln!(
            out,
            "    {} -- {} [weight={}];",
            dot_quote(graph.external_id(u)),
            dot_quote(graph.external_id(v)),
            w
        );
    }
    out.push_str("}\n");
    out
}

fn gexf(graph: &Graph, attr_title: &str, node_value: impl Fn(NodeId) -> Option<String>) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n");
    out.push_str("  <graph defaultedgetype=\"undirected\">\n");
    let _ = writeln!(
        out,
        "    <attributes class=\"node\">\n      <attribute id=\"0\" title=\"{}\" type=\"string\"/>\n    </attributes>",
        xml_escape(attr_title)
    );
    out.push_str("    <nodes>\n");
    for node in 0..graph.node_count() {
        let id = xml_escape(graph.external_id(node));
        match node_value(node) {
            Some(value) => {
                let _ = writeln!(
                    out,
                    "      <node id=\"{id}\" label=\"{id}\"><attvalues><attvalue for=\"0\" value=\"{}\"/></attvalues></node>",
                    xml_escape(&value)
                );
            }
            None => {
                let _ = writeln!(out, "      <node id=\"{id}\" label=\"{id}\"/>");
            }
        }
    }
    out.push_str("    </nodes>\n    <edges>\n");
    for (idx, &(u, v, w)) in graph.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "      <edge id=\"{idx}\" source=\"{}\" target=\"{}\" weight=\"{w}\"/>",
            xml_escape(graph.external_id(u)),
            xml_escape(graph.external_id(v))
        );
    }
    out.push_str("    </edges>\n  </graph>\n</gexf>\n");
    out
}

/// GEXF document with a `community` node attribute.
pub fn community_gexf(graph: &Graph, partition: &Partition) -> String {
    gexf(graph, "community", |node| {
        Some(partition.community_of(node).to_string())
    })
}

/// GEXF document with an `agreement` node attribute (uncolored nodes have no
/// ground truth).
pub fn agreement_gexf(graph: &Graph, coloring: &BTreeMap<NodeId, Agreement>) -> String {
    gexf(graph, "agreement", |node| {
        coloring.get(&node).map(|a| {
            match a {
                Agreement::Agree => "agree",
                Agreement::Disagree => "disagree",
            }
            .to_string()
        })
    })
}
