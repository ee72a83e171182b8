//! Finite directed multigraphs with named vertices and edges.
//!
//! Names are opaque strings. Vertices and edges are stored sorted by name and
//! addressed by dense indices ([`VertexId`], [`EdgeId`]) so that every
//! algorithm in the crate iterates in a deterministic order.

mod contract;
mod io;
mod iso;
mod partition;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use contract::{contract, ContractedGraph};
pub use io::{from_json, load_json, save_json, to_dot, to_json, GraphJson};
pub use iso::{are_isomorphic, are_isomorphic_with_limit, DEFAULT_ISO_VERTEX_LIMIT};
pub use partition::{check_connectivity, compute_tree_partition, Connectivity, TreePartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub src: VertexId,
    pub dst: VertexId,
}

/// A finite directed multigraph. Loops and parallel edges are allowed.
#[derive(Clone)]
pub struct DirectedGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl DirectedGraph {
    /// Builds a graph from vertex names and `(edge id, source, target)` triples.
    ///
    /// Fails with [`Error::Schema`] on duplicate names or dangling endpoints.
    pub fn new<V, E, S>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = vertices.into_iter().map(Into::into).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Schema(format!("duplicate vertex `{}`", w[0])));
        }
        let vertex_index: HashMap<String, VertexId> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i)))
            .collect();

        let mut raw: Vec<(String, String, String)> = edges
            .into_iter()
            .map(|(id, s, t)| (id.into(), s.into(), t.into()))
            .collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = raw.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Schema(format!("duplicate edge id `{}`", w[0].0)));
        }
        let mut edges = Vec::with_capacity(raw.len());
        for (id, s, t) in raw {
            let lookup = |v: &str| {
                vertex_index.get(v).copied().ok_or_else(|| {
                    Error::Schema(format!("edge `{id}` references unknown vertex `{v}`"))
                })
            };
            let src = lookup(&s)?;
            let dst = lookup(&t)?;
            edges.push(Edge { id, src, dst });
        }
        Ok(Self::from_parts(names, edges, vertex_index))
    }

    fn from_parts(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        vertex_index: HashMap<String, VertexId>,
    ) -> Self {
        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), EdgeId(i)))
            .collect();
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.src.0].push(EdgeId(i));
            in_edges[e.dst.0].push(EdgeId(i));
        }
        DirectedGraph {
            vertices,
            edges,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].id
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].src
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].dst
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_edges[v.0].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_edges[v.0].len()
    }

    /// Number of edges from `u` to `v`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.out_edges[u.0]
            .iter()
            .filter(|&&e| self.dst(e) == v)
            .count()
    }

    /// Dense adjacency matrix, `a[u][v]` = number of edges `u -> v`.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.src.0][e.dst.0] += 1;
        }
        a
    }

    /// Returns a copy with every vertex and edge renamed through the given maps.
    /// Names missing from a map are kept.
    pub fn relabeled(
        &self,
        vertex_map: &HashMap<String, String>,
        edge_map: &HashMap<String, String>,
    ) -> Result<Self> {
        let rename = |m: &HashMap<String, String>, n: &str| m.get(n).cloned().unwrap_or_else(|| n.to_string());
        let vs: Vec<String> = self.vertices.iter().map(|v| rename(vertex_map, v)).collect();
        let es: Vec<(String, String, String)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    rename(edge_map, &e.id),
                    rename(vertex_map, self.vertex_name(e.src)),
                    rename(vertex_map, self.vertex_name(e.dst)),
                )
            })
            .collect();
        DirectedGraph::new(vs, es)
    }
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for DirectedGraph {}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}:{}->{}",
                    e.id,
                    self.vertex_name(e.src),
                    self.vertex_name(e.dst)
                )
            })
            .collect();
        f.debug_struct("DirectedGraph")
            .field("vertices", &self.vertices)
            .field("edges", &edges)
            .finish()
    }
}

/// Incremental builder used by the family constructors.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: BTreeSet<String>,
    edges: Vec<(String, String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> &mut Self {
        self.vertices.insert(name.into());
        self
    }

    pub fn edge(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        dst: impl Into<String>,
    ) -> &mut Self {
        let (s, t) = (src.into(), dst.into());
        self.vertices.insert(s.clone());
        self.vertices.insert(t.clone());
        self.edges.push((id.into(), s, t));
        self
    }

    pub fn build(&self) -> Result<DirectedGraph> {
        DirectedGraph::new(self.vertices.iter().cloned(), self.edges.iter().cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_dangling_edge() {
        let err = DirectedGraph::new(vec!["a"], vec![("e", "a", "b")]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn rejects_duplicate_edge_id() {
        let err = DirectedGraph::new(vec!["a"], vec![("e", "a", "a"), ("e", "a", "a")]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn sorted_storage_and_degrees() {
        let g = DirectedGraph::new(
            vec!["v", "u"],
            vec![("b", "u", "v"), ("a", "v", "u"), ("c", "v", "v")],
        )
        .unwrap();
        assert_eq!(g.vertex_names(), &["u".to_string(), "v".to_string()]);
        assert_eq!(g.edge_name(EdgeId(0)), "a");
        let v = g.vertex_by_name("v").unwrap();
        assert_eq!(g.out_degree(v), 2);
        assert_eq!(g.in_degree(v), 2);
        assert_eq!(g.multiplicity(v, v), 1);
    }
}
