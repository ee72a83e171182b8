use std::collections::VecDeque;

use super::{DirectedGraph, EdgeId, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Connectivity {
    pub strongly_connected: bool,
    pub is_cycle: bool,
}

fn reaches_all(g: &DirectedGraph, start: VertexId, forward: bool) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([start]);
    seen[start.0] = true;
    while let Some(v) = queue.pop_front() {
        let next = if forward { g.out_edges(v) } else { g.in_edges(v) };
        for &e in next {
            let w = if forward { g.dst(e) } else { g.src(e) };
            if !seen[w.0] {
                seen[w.0] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn check_connectivity(g: &DirectedGraph) -> Connectivity {
    if g.vertex_count() == 0 || g.edge_count() == 0 {
        return Connectivity {
            strongly_connected: false,
            is_cycle: false,
        };
    }
    let strongly_connected =
        reaches_all(g, VertexId(0), true) && reaches_all(g, VertexId(0), false);
    let is_cycle = strongly_connected
        && g
            .vertex_ids()
            .all(|v| g.out_degree(v) == 1 && g.in_degree(v) == 1);
    Connectivity {
        strongly_connected,
        is_cycle,
    }
}

/// Decomposition of a graph into the forest of edges that are the sole
/// incoming edge of their target, rooted at the vertices of in-degree at
/// least two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePartition {
    is_tree_edge: Vec<bool>,
    roots: Vec<VertexId>,
    root_of: Vec<VertexId>,
    level: Vec<usize>,
    tree_path: Vec<Vec<EdgeId>>,
}

impl TreePartition {
    pub fn is_tree_edge(&self, e: EdgeId) -> bool {
        self.is_tree_edge[e.0]
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.is_tree_edge
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(i, _)| EdgeId(i))
    }

    pub fn non_tree_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.is_tree_edge
            .iter()
            .enumerate()
            .filter(|(_, &t)| !t)
            .map(|(i, _)| EdgeId(i))
    }

    pub fn tree_edge_count(&self) -> usize {
        self.is_tree_edge.iter().filter(|&&t| t).count()
    }

    /// Roots in vertex order.
    pub fn roots(&self) -> &[VertexId] {
        &self.roots
    }

    pub fn is_root(&self, v: VertexId) -> bool {
        self.root_of[v.0] == v
    }

    pub fn root_of(&self, v: VertexId) -> VertexId {
        self.root_of[v.0]
    }

    /// Depth of `v` in its subtree; roots have level 0.
    pub fn level(&self, v: VertexId) -> usize {
        self.level[v.0]
    }

    /// Tree edges leading from the root of `v`'s subtree down to `v`.
    pub fn tree_path(&self, v: VertexId) -> &[EdgeId] {
        &self.tree_path[v.0]
    }

    pub fn is_single_tree(&self) -> bool {
        self.roots.len() == 1
    }
}

/// Computes the subtree decomposition of a strongly connected graph that is
/// not a cycle.
pub fn compute_tree_partition(g: &DirectedGraph) -> Result<TreePartition> {
    let conn = check_connectivity(g);
    if !conn.strongly_connected {
        return Err(Error::NotStronglyConnected);
    }
    if conn.is_cycle {
        return Err(Error::IsACycle);
    }
    partition_unchecked(g)
}

pub(crate) fn partition_unchecked(g: &DirectedGraph) -> Result<TreePartition> {
    let n = g.vertex_count();
    let mut is_tree_edge = vec![false; g.edge_count()];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    for v in g.vertex_ids() {
        if let [e] = g.in_edges(v) {
            is_tree_edge[e.0] = true;
            parent[v.0] = Some(*e);
        }
    }
    let roots: Vec<VertexId> = g.vertex_ids().filter(|v| parent[v.0].is_none()).collect();

    let mut root_of = vec![VertexId(usize::MAX); n];
    let mut tree_path: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    let mut level = vec![0usize; n];
    for v in g.vertex_ids() {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(e) = parent[cur.0] {
            path.push(e);
            cur = g.src(e);
            if path.len() > n {
                return Err(Error::FEdgesCyclic(g.vertex_name(v).to_string()));
            }
        }
        path.reverse();
        root_of[v.0] = cur;
        level[v.0] = path.len();
        tree_path[v.0] = path;
    }
    Ok(TreePartition {
        is_tree_edge,
        roots,
        root_of,
        level,
        tree_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> DirectedGraph {
        DirectedGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    #[test]
    fn connectivity_flags() {
        let cycle = graph(
            &["a", "b", "c"],
            &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")],
        );
        assert_eq!(
            check_connectivity(&cycle),
            Connectivity {
                strongly_connected: true,
                is_cycle: true
            }
        );
        let loops = graph(&["a", "b"], &[("x", "a", "a"), ("y", "b", "b")]);
        assert_eq!(
            check_connectivity(&loops),
            Connectivity {
                strongly_connected: false,
                is_cycle: false
            }
        );
    }

    #[test]
    fn bouquet_has_no_tree_edges() {
        let g = graph(&["v"], &[("a", "v", "v"), ("b", "v", "v")]);
        let p = compute_tree_partition(&g).unwrap();
        assert_eq!(p.tree_edge_count(), 0);
        assert_eq!(p.roots(), &[VertexId(0)]);
        assert_eq!(p.level(VertexId(0)), 0);
    }

    #[test]
    fn rejects_cycle_and_disconnected() {
        let cycle = graph(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]);
        assert_eq!(compute_tree_partition(&cycle), Err(Error::IsACycle));
        let loops = graph(&["a", "b"], &[("x", "a", "a"), ("y", "b", "b")]);
        assert_eq!(
            compute_tree_partition(&loops),
            Err(Error::NotStronglyConnected)
        );
    }

    #[test]
    fn unchecked_partition_detects_tree_cycle() {
        let cycle = graph(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]);
        assert!(matches!(
            partition_unchecked(&cycle),
            Err(Error::FEdgesCyclic(_))
        ));
    }
}
