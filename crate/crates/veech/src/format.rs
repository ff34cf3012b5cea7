//! File formats. Every CSV file opens with a `# veech-csv/1 <kind>` comment
//! and every JSON document carries a top-level `"schema"` string, so a
//! change of layout shows up as a version change in downstream diffs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use veech_core::graph::SimpleGraph;
use veech_core::quadfield::format_rational;
use veech_core::schreier::OrbitGraph;

pub const GRAPH_SCHEMA: &str = "veech-graph/1";
pub const CSV_VERSION: &str = "veech-csv/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {found:?}, expected {expected:?}")]
    Schema { found: String, expected: &'static str },
    #[error("edge {0} -> {1} refers to a missing vertex")]
    Dangling(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub id: usize,
    /// `x_r,x_i,y_r,y_i` as reduced fractions.
    pub point: String,
    pub depth: usize,
    pub s: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema: String,
    pub surface: String,
    pub root: usize,
    pub radius: usize,
    pub generators: Vec<String>,
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
}

impl GraphDocument {
    pub fn from_orbit_graph(g: &OrbitGraph) -> Self {
        let surface = g.vertices().first().map(|p| p.surface().name()).unwrap_or_default();
        GraphDocument {
            schema: GRAPH_SCHEMA.into(),
            surface,
            root: g.root(),
            radius: g.radius(),
            generators: g.generators().iter().map(|l| l.to_string()).collect(),
            vertices: g
                .vertices()
                .iter()
                .enumerate()
                .map(|(id, p)| GraphVertex {
                    id,
                    point: p.key().to_string(),
                    depth: g.depth(id),
                    s: format_rational(&p.s_value()),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| GraphEdge { from: e.from, to: e.to, label: e.label.to_string() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph document serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        if doc.schema != GRAPH_SCHEMA {
            return Err(FormatError::Schema { found: doc.schema, expected: GRAPH_SCHEMA });
        }
        Ok(doc)
    }

    /// Undirected view; self-edges become loop markers.
    pub fn simple_graph(&self) -> Result<SimpleGraph, FormatError> {
        let n = self.vertices.len();
        let mut g = SimpleGraph::new(n);
        for e in &self.edges {
            if e.from >= n || e.to >= n {
                return Err(FormatError::Dangling(e.from, e.to));
            }
            g.add_edge(e.from, e.to);
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph orbit {{").unwrap();
        writeln!(out, "  // {GRAPH_SCHEMA} surface={} radius={}", self.surface, self.radius).unwrap();
        for v in &self.vertices {
            let shape = if v.id == self.root { ", shape=doublecircle" } else { "" };
            writeln!(out, "  v{} [label=\"{}\\ns={}\"{shape}];", v.id, v.point, v.s).unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  v{} -> v{} [label=\"{}\"];", e.from, e.to, e.label).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// CSV text with the version comment, a header row and the given rows.
pub fn csv(kind: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("# {CSV_VERSION} {kind}\n{}\n", header.join(","));
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Wraps a serializable report with its schema tag.
pub fn json_report<T: Serialize>(schema: &str, body: &T) -> String {
    #[derive(Serialize)]
    struct Tagged<'a, T> {
        schema: &'a str,
        #[serde(flatten)]
        body: &'a T,
    }
    serde_json::to_string_pretty(&Tagged { schema, body }).expect("report serializes") + "\n"
}
