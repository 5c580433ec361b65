//! Deterministic DOT, GraphML and JSON renderings of flip graphs, links and
//! Hasse diagrams. Node order is the structure's own sorted order, so the
//! same input always yields byte-identical output.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::flipgraph::{key_digest, FlipGraph, Link};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dot,
    Graphml,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Format::Dot),
            "graphml" => Ok(Format::Graphml),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}; expected dot, graphml or json")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportNode {
    pub id: usize,
    pub label: String,
    /// Extra attributes, in a fixed order.
    pub attrs: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportEdge {
    pub source: usize,
    pub target: usize,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<usize>,
}

/// A graph flattened for export. Undirected unless `directed`.
#[derive(Clone, Debug, Serialize)]
pub struct ExportGraph {
    pub name: String,
    pub directed: bool,
    pub nodes: Vec<ExportNode>,
    pub edges: Vec<ExportEdge>,
}

impl ExportGraph {
    pub fn from_flip_graph(g: &FlipGraph) -> Self {
        let nodes = (0..g.len())
            .map(|i| {
                let t = g.node(i);
                ExportNode {
                    id: i,
                    label: key_digest(g.key(i)),
                    attrs: vec![
                        ("vertices".into(), t.vertices().len().to_string()),
                        ("edges".into(), t.edges().len().to_string()),
                    ],
                }
            })
            .collect();
        let edges = g
            .edges()
            .into_iter()
            .map(|(a, b, x)| ExportEdge {
                source: a,
                target: b,
                label: x.to_string(),
                weight: None,
            })
            .collect();
        ExportGraph {
            name: format!("{}_flip_graph", g.kind()),
            directed: false,
            nodes,
            edges,
        }
    }

    pub fn from_link(l: &Link) -> Self {
        let nodes = l
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, x)| ExportNode {
                id: i,
                label: x.to_string(),
                attrs: Vec::new(),
            })
            .collect();
        let edges = l
            .edges()
            .iter()
            .map(|e| ExportEdge {
                source: e.a,
                target: e.b,
                label: serde_json::to_value(e.class)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .expect("classes serialize as strings"),
                weight: Some(e.weight),
            })
            .collect();
        ExportGraph {
            name: "link".into(),
            directed: false,
            nodes,
            edges,
        }
    }

    /// Hasse diagram with edges pointing from a subdivision to its direct
    /// coarsenings.
    pub fn from_poset(p: &Poset) -> Self {
        let nodes = (0..p.len())
            .map(|i| {
                let s = p.node(i);
                ExportNode {
                    id: i,
                    label: key_digest(&s.canonical_key()),
                    attrs: vec![
                        ("slack".into(), s.slack().to_string()),
                        ("height".into(), p.height(i).to_string()),
                    ],
                }
            })
            .collect();
        let edges = (0..p.len())
            .flat_map(|i| {
                p.up(i).iter().map(move |(j, step)| ExportEdge {
                    source: i,
                    target: *j,
                    label: step.to_string(),
                    weight: None,
                })
            })
            .collect();
        ExportGraph {
            name: "hasse".into(),
            directed: true,
            nodes,
            edges,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Dot => self.to_dot(),
            Format::Graphml => self.to_graphml(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_dot(&self) -> String {
        let (kw, arrow) = if self.directed { ("digraph", "->") } else { ("graph", "--") };
        let mut out = format!("{kw} {} {{\n", self.name);
        for n in &self.nodes {
            let mut attrs = format!("label=\"{}\"", n.label);
            for (k, v) in &n.attrs {
                let _ = write!(attrs, ", {k}=\"{v}\"");
            }
            let _ = writeln!(out, "  n{} [{attrs}];", n.id);
        }
        for e in &self.edges {
            let mut attrs = format!("label=\"{}\"", e.label);
            if let Some(w) = e.weight {
                let _ = write!(attrs, ", weight={w}");
            }
            let _ = writeln!(out, "  n{} {arrow} n{} [{attrs}];", e.source, e.target);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_graphml(&self) -> String {
        let mut node_keys: Vec<&str> = vec!["label"];
        for n in &self.nodes {
            for (k, _) in &n.attrs {
                if !node_keys.contains(&k.as_str()) {
                    node_keys.push(k);
                }
            }
        }
        let mut out = String::from(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
        );
        for k in &node_keys {
            let _ = writeln!(out, "  <key id=\"n_{k}\" for=\"node\" attr.name=\"{k}\" attr.type=\"string\"/>");
        }
        out.push_str("  <key id=\"e_label\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n");
        out.push_str("  <key id=\"e_weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n");
        let dir = if self.directed { "directed" } else { "undirected" };
        let _ = writeln!(out, "  <graph id=\"{}\" edgedefault=\"{dir}\">", self.name);
        for n in &self.nodes {
            let _ = writeln!(out, "    <node id=\"n{}\">", n.id);
            let _ = writeln!(out, "      <data key=\"n_label\">{}</data>", xml_escape(&n.label));
            for (k, v) in &n.attrs {
                let _ = writeln!(out, "      <data key=\"n_{k}\">{}</data>", xml_escape(v));
            }
            out.push_str("    </node>\n");
        }
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\">", e.source, e.target);
            let _ = writeln!(out, "      <data key=\"e_label\">{}</data>", xml_escape(&e.label));
            if let Some(w) = e.weight {
                let _ = writeln!(out, "      <data key=\"e_weight\">{w}</data>");
            }
            out.push_str("    </edge>\n");
        }
        out.push_str("  </graph>\n</graphml>\n");
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("export graph serializes");
        s.push('\n');
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flipgraph::{link_of, FlipKind};
    use crate::generators::convex_gon;
    use crate::{Kind, Triangulation};
    use std::sync::Arc;

    #[test]
    fn pentagon_dot_has_five_nodes_and_edges() {
        let g = FlipGraph::build(Arc::new(convex_gon(5)), FlipKind::Edge, None).unwrap();
        let dot = ExportGraph::from_flip_graph(&g).to_dot();
        assert_eq!(dot.matches(" [label=").count(), 10);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert_eq!(dot, ExportGraph::from_flip_graph(&g).to_dot());
    }

    #[test]
    fn link_weights_are_exported() {
        let t = Triangulation::seed_full(Arc::new(convex_gon(6)));
        let x = ExportGraph::from_link(&link_of(&t, Kind::Full));
        let dot = x.to_dot();
        assert!(dot.contains("weight=2") && dot.contains("weight=3"));
        assert!(x.to_graphml().contains("<data key=\"e_weight\">3</data>"));
    }

    #[test]
    fn format_parses() {
        assert_eq!("graphml".parse::<Format>(), Ok(Format::Graphml));
        assert!("svg".parse::<Format>().is_err());
    }
}
