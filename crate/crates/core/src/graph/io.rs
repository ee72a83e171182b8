use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{DirectedGraph, TreePartition};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Wire form: `{"vertices":[...],"edges":[{"id":..,"src":..,"dst":..}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

impl From<&DirectedGraph> for GraphJson {
    fn from(g: &DirectedGraph) -> Self {
        GraphJson {
            vertices: g.vertex_names().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    src: g.vertex_name(e.src).to_string(),
                    dst: g.vertex_name(e.dst).to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<GraphJson> for DirectedGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        DirectedGraph::new(j.vertices, j.edges.into_iter().map(|e| (e.id, e.src, e.dst)))
    }
}

pub fn to_json(g: &DirectedGraph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serialises")
}

pub fn from_json(text: &str) -> Result<DirectedGraph> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut missing = Vec::new();
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("top level must be an object".into()))?;
    for key in ["vertices", "edges"] {
        if !obj.contains_key(key) {
            missing.push(key.to_string());
        }
    }
    if let Some(Value::Array(edges)) = obj.get("edges") {
        for (i, e) in edges.iter().enumerate() {
            for key in ["id", "src", "dst"] {
                if e.get(key).is_none() {
                    missing.push(format!("edges[{i}].{key}"));
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Schema(format!("missing fields: {}", missing.join(", "))));
    }
    let j: GraphJson =
        serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    DirectedGraph::try_from(j)
}

pub fn load_json(path: &Path) -> Result<DirectedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    from_json(&text)
}

pub fn save_json(g: &DirectedGraph, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(g)).map_err(|e| Error::Io(e.to_string()))
}

/// Graphviz export, one line per edge. Tree edges are drawn `solid` and the
/// remaining edges `bold` when a partition is supplied.
pub fn to_dot(g: &DirectedGraph, partition: Option<&TreePartition>) -> String {
    let mut out = String::from("digraph G {\n");
    for v in g.vertex_names() {
        let _ = writeln!(out, "  \"{v}\";");
    }
    for (i, e) in g.edges().iter().enumerate() {
        let style = match partition {
            Some(p) if p.is_tree_edge(super::EdgeId(i)) => " style=solid",
            Some(_) => " style=bold",
            None => "",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"{}];",
            g.vertex_name(e.src),
            g.vertex_name(e.dst),
            e.id,
            style
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::compute_tree_partition;

    #[test]
    fn malformed_json_reports_location() {
        match from_json("{\"vertices\": [\"a\",}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_vertex_is_schema_error() {
        let text = r#"{"vertices":["a"],"edges":[{"id":"e","src":"a","dst":"b"}]}"#;
        assert!(matches!(from_json(text), Err(Error::Schema(_))));
    }

    #[test]
    fn missing_fields_are_listed() {
        let text = r#"{"edges":[{"id":"e","src":"a"}]}"#;
        match from_json(text) {
            Err(Error::Schema(msg)) => {
                assert!(msg.contains("vertices"));
                assert!(msg.contains("edges[0].dst"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dot_marks_tree_edges() {
        let g = DirectedGraph::new(
            vec!["r", "x"],
            vec![("f", "r", "x"), ("e1", "x", "r"), ("e2", "x", "r")],
        )
        .unwrap();
        let p = compute_tree_partition(&g).unwrap();
        let dot = to_dot(&g, Some(&p));
        assert!(dot.contains("label=\"f\" style=solid"));
        assert!(dot.contains("label=\"e1\" style=bold"));
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 3);
    }
}
