//! Snapshot documents: the JSON graph form and GraphML.
//!
//! Both list nodes in ascending id order and edges by `(source, target)` with
//! `source < target`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::canon::to_canonical_string;
use crate::ids::NodeId;
use crate::netbuild::{Network, NetworkKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: NodeId,
    pub kind: NetworkKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub kind: NetworkKind,
    pub turn: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

impl GraphDoc {
    pub fn of(net: &Network, turn: usize) -> Self {
        GraphDoc {
            kind: net.kind(),
            turn,
            nodes: net
                .nodes()
                .iter()
                .map(|n| GraphNode {
                    id: n.clone(),
                    kind: net.kind(),
                    label: n.to_string(),
                })
                .collect(),
            edges: net
                .edges()
                .iter()
                .map(|((a, b), w)| GraphEdge {
                    source: a.clone(),
                    target: b.clone(),
                    weight: *w,
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> Network {
        Network::from_edges(
            self.kind,
            self.nodes.iter().map(|n| n.id.clone()),
            self.edges
                .iter()
                .map(|e| (e.source.clone(), e.target.clone(), e.weight)),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotFormat {
    #[default]
    Json,
    Graphml,
}

impl std::str::FromStr for SnapshotFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(SnapshotFormat::Json),
            "graphml" => Ok(SnapshotFormat::Graphml),
            other => Err(format!(
                "unknown format `{other}` (expected json or graphml)"
            )),
        }
    }
}

pub fn graph_json(net: &Network, turn: usize) -> String {
    to_canonical_string(&GraphDoc::of(net, turn))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn graphml(net: &Network, turn: usize) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    s.push_str("  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n");
    let _ = writeln!(
        s,
        "  <graph id=\"{}-turn-{turn}\" edgedefault=\"undirected\">",
        net.kind()
    );
    for n in net.nodes() {
        let id = escape(n.as_str());
        let _ = writeln!(
            s,
            "    <node id=\"{id}\"><data key=\"kind\">{}</data><data key=\"label\">{id}</data></node>",
            net.kind()
        );
    }
    for ((a, b), w) in net.edges() {
        let _ = writeln!(
            s,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{w}</data></edge>",
            escape(a.as_str()),
            escape(b.as_str())
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

pub fn render(net: &Network, turn: usize, format: SnapshotFormat) -> String {
    match format {
        SnapshotFormat::Json => graph_json(net, turn),
        SnapshotFormat::Graphml => graphml(net, turn),
    }
}
