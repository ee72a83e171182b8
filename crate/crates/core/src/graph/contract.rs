use std::collections::HashMap;

use super::{DirectedGraph, EdgeId, TreePartition, VertexId};

/// The graph obtained by collapsing every subtree onto its root.
///
/// Vertices keep the names of the roots and each non-tree edge keeps its id,
/// so a multiplier cycle reads directly in terms of the original edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedGraph {
    graph: DirectedGraph,
    hat_edge: Vec<Option<EdgeId>>,
    hat_vertex: Vec<VertexId>,
}

impl ContractedGraph {
    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    /// Image of a non-tree edge; `None` for tree edges.
    pub fn hat_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.hat_edge[e.0]
    }

    /// The contracted vertex containing `v`.
    pub fn hat_vertex(&self, v: VertexId) -> VertexId {
        self.hat_vertex[v.0]
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Number of contracted edges, `card(Ê)`.
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_single_vertex(&self) -> bool {
        self.graph.vertex_count() == 1
    }
}

/// Contracts each subtree of `p` to its root.
pub fn contract(g: &DirectedGraph, p: &TreePartition) -> ContractedGraph {
    let vertices: Vec<String> = p
        .roots()
        .iter()
        .map(|&r| g.vertex_name(r).to_string())
        .collect();
    let edges: Vec<(String, String, String)> = p
        .non_tree_edges()
        .map(|e| {
            (
                g.edge_name(e).to_string(),
                g.vertex_name(p.root_of(g.src(e))).to_string(),
                g.vertex_name(p.root_of(g.dst(e))).to_string(),
            )
        })
        .collect();
    let graph = DirectedGraph::new(vertices, edges)
        .expect("contraction of a valid graph is a valid graph");

    let hat_edge = g
        .edge_ids()
        .map(|e| {
            if p.is_tree_edge(e) {
                None
            } else {
                graph.edge_by_name(g.edge_name(e))
            }
        })
        .collect();
    let root_ids: HashMap<VertexId, VertexId> = p
        .roots()
        .iter()
        .map(|&r| (r, graph.vertex_by_name(g.vertex_name(r)).unwrap()))
        .collect();
    let hat_vertex = g.vertex_ids().map(|v| root_ids[&p.root_of(v)]).collect();
    ContractedGraph {
        graph,
        hat_edge,
        hat_vertex,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::compute_tree_partition;

    #[test]
    fn bouquet_contracts_to_itself() {
        let g = DirectedGraph::new(
            vec!["v"],
            vec![("a", "v", "v"), ("b", "v", "v"), ("c", "v", "v")],
        )
        .unwrap();
        let p = compute_tree_partition(&g).unwrap();
        let c = contract(&g, &p);
        assert_eq!(c.graph(), &g);
    }

    #[test]
    fn leaf_returns_become_loops() {
        // r -> x (tree), x -> r twice
        let g = DirectedGraph::new(
            vec!["r", "x"],
            vec![("f", "r", "x"), ("e1", "x", "r"), ("e2", "x", "r")],
        )
        .unwrap();
        let p = compute_tree_partition(&g).unwrap();
        let c = contract(&g, &p);
        assert!(c.is_single_vertex());
        assert_eq!(c.edge_count(), 2);
        assert_eq!(c.hat_edge(g.edge_by_name("f").unwrap()), None);
        let e1 = c.hat_edge(g.edge_by_name("e1").unwrap()).unwrap();
        assert_eq!(c.graph().src(e1), c.graph().dst(e1));
    }
}
