use std::collections::{BTreeMap, HashMap};

use super::partition::partition_unchecked;
use super::{DirectedGraph, VertexId};
use crate::error::{Error, Result};

pub const DEFAULT_ISO_VERTEX_LIMIT: usize = 64;

/// Searches for a vertex bijection `g1 -> g2` that preserves every edge
/// multiplicity. Returns `map` with `map[v.0]` the image of `v`.
pub fn are_isomorphic(g1: &DirectedGraph, g2: &DirectedGraph) -> Result<Option<Vec<VertexId>>> {
    are_isomorphic_with_limit(g1, g2, DEFAULT_ISO_VERTEX_LIMIT)
}

pub fn are_isomorphic_with_limit(
    g1: &DirectedGraph,
    g2: &DirectedGraph,
    limit: usize,
) -> Result<Option<Vec<VertexId>>> {
    let n = g1.vertex_count();
    if n.max(g2.vertex_count()) > limit {
        return Err(Error::SizeLimitExceeded {
            limit,
            got: n.max(g2.vertex_count()),
        });
    }
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let levels = match (partition_unchecked(g1), partition_unchecked(g2)) {
        (Ok(p1), Ok(p2)) => Some((
            g1.vertex_ids().map(|v| p1.level(v)).collect::<Vec<_>>(),
            g2.vertex_ids().map(|v| p2.level(v)).collect::<Vec<_>>(),
        )),
        _ => None,
    };
    let (c1, c2) = refine_colors(g1, g2, levels);
    let mut hist1 = c1.clone();
    let mut hist2 = c2.clone();
    hist1.sort_unstable();
    hist2.sort_unstable();
    if hist1 != hist2 {
        return Ok(None);
    }

    let a1 = g1.adjacency();
    let a2 = g2.adjacency();
    // Most constrained first: rarest colour classes, ties by index.
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &c1 {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&c1[v]], v));

    let mut state = Search {
        a1: &a1,
        a2: &a2,
        c1: &c1,
        c2: &c2,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if state.extend(0) {
        Ok(Some(state.map.into_iter().map(VertexId).collect()))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    a1: &'a [Vec<u64>],
    a2: &'a [Vec<u64>],
    c1: &'a [usize],
    c2: &'a [usize],
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.map.len() {
            if self.used[w] || self.c1[v] != self.c2[w] || !self.consistent(depth, v, w) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[v] = usize::MAX;
            self.used[w] = false;
        }
        false
    }

    fn consistent(&self, depth: usize, v: usize, w: usize) -> bool {
        if self.a1[v][v] != self.a2[w][w] {
            return false;
        }
        self.order[..depth].iter().all(|&u| {
            let x = self.map[u];
            self.a1[v][u] == self.a2[w][x] && self.a1[u][v] == self.a2[x][w]
        })
    }
}

/// Joint colour refinement of both graphs so that colour ids are comparable.
fn refine_colors(
    g1: &DirectedGraph,
    g2: &DirectedGraph,
    levels: Option<(Vec<usize>, Vec<usize>)>,
) -> (Vec<usize>, Vec<usize>) {
    let initial = |g: &DirectedGraph, lv: Option<&Vec<usize>>| -> Vec<Vec<usize>> {
        g.vertex_ids()
            .map(|v| {
                vec![
                    g.in_degree(v),
                    g.out_degree(v),
                    g.multiplicity(v, v),
                    lv.map_or(0, |l| l[v.0]),
                ]
            })
            .collect()
    };
    let (l1, l2) = match &levels {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let (mut c1, mut c2) = intern(initial(g1, l1), initial(g2, l2));
    let a1 = g1.adjacency();
    let a2 = g2.adjacency();
    loop {
        let sig = |a: &[Vec<u64>], c: &[usize]| -> Vec<Vec<usize>> {
            (0..c.len())
                .map(|v| {
                    let mut out: BTreeMap<(usize, u64), usize> = BTreeMap::new();
                    let mut inc: BTreeMap<(usize, u64), usize> = BTreeMap::new();
                    for u in 0..c.len() {
                        if a[v][u] > 0 {
                            *out.entry((c[u], a[v][u])).or_default() += 1;
                        }
                        if a[u][v] > 0 {
                            *inc.entry((c[u], a[u][v])).or_default() += 1;
                        }
                    }
                    let mut s = vec![c[v], usize::MAX];
                    for ((col, m), k) in out {
                        s.extend([col, m as usize, k]);
                    }
                    s.push(usize::MAX);
                    for ((col, m), k) in inc {
                        s.extend([col, m as usize, k]);
                    }
                    s
                })
                .collect()
        };
        let (n1, n2) = intern(sig(&a1, &c1), sig(&a2, &c2));
        let classes = |c: &[usize]| {
            let mut s = c.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        let stable = classes(&n1) == classes(&c1) && classes(&n2) == classes(&c2);
        c1 = n1;
        c2 = n2;
        if stable {
            return (c1, c2);
        }
    }
}

fn intern(s1: Vec<Vec<usize>>, s2: Vec<Vec<usize>>) -> (Vec<usize>, Vec<usize>) {
    let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for s in s1.iter().chain(s2.iter()) {
        let next = ids.len();
        ids.entry(s.clone()).or_insert(next);
    }
    // Renumber in sorted signature order so ids do not depend on vertex order.
    let ranks: BTreeMap<Vec<usize>, usize> = ids
        .keys()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    (
        s1.iter().map(|s| ranks[s]).collect(),
        s2.iter().map(|s| ranks[s]).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str, &str)]) -> DirectedGraph {
        DirectedGraph::new(vs.iter().copied(), es.iter().copied()).unwrap()
    }

    #[test]
    fn relabelled_graphs_are_isomorphic() {
        let a = g(
            &["r", "x", "y"],
            &[("f", "r", "x"), ("g", "x", "y"), ("e", "y", "r"), ("d", "y", "r"), ("l", "r", "r")],
        );
        let b = g(
            &["A", "B", "C"],
            &[("1", "C", "B"), ("2", "B", "A"), ("3", "A", "C"), ("4", "A", "C"), ("5", "C", "C")],
        );
        let m = are_isomorphic(&a, &b).unwrap().expect("isomorphic");
        for e in a.edges() {
            assert!(b.multiplicity(m[e.src.0], m[e.dst.0]) > 0);
        }
    }

    #[test]
    fn multiplicity_distinguishes() {
        let a = g(&["u", "v"], &[("1", "u", "v"), ("2", "v", "u"), ("3", "v", "u")]);
        let b = g(&["u", "v"], &[("1", "u", "v"), ("2", "u", "v"), ("3", "v", "u")]);
        // swapping u and v maps b onto a
        assert!(are_isomorphic(&a, &b).unwrap().is_some());
        let c = g(&["u", "v"], &[("1", "u", "v"), ("2", "v", "u"), ("3", "v", "v")]);
        assert!(are_isomorphic(&a, &c).unwrap().is_none());
    }

    #[test]
    fn size_limit() {
        let a = g(&["u"], &[("1", "u", "u")]);
        assert!(matches!(
            are_isomorphic_with_limit(&a, &a, 0),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}
