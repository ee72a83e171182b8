#![allow(dead_code)]

use dyckshift::families::{
    build_family_iv, build_family_v, build_sh2, build_three_vertex, Branch, FamilyIVParams, FamilyVParams,
    SphericalParams, ThreeVertexParams,
};
use dyckshift::graph::DirectedGraph;
use dyckshift::semigroup::Symbol;
use dyckshift::shift::ShiftContext;
use proptest::prelude::*;

fn graph(edges: &[(&str, &str)]) -> DirectedGraph {
    let mut vs: Vec<&str> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vs.sort();
    vs.dedup();
    let es = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (format!("x{i}"), a.to_string(), b.to_string()));
    DirectedGraph::new(vs.iter().map(|v| v.to_string()), es).unwrap()
}

/// Hand-picked and family graphs shared by the integration tests.
pub fn corpus() -> Vec<(String, DirectedGraph)> {
    let mut out = vec![
        ("D2".to_string(), graph(&[("a", "a"), ("a", "a")])),
        ("D3".to_string(), graph(&[("a", "a"), ("a", "a"), ("a", "a")])),
        ("loop-and-return".to_string(), graph(&[("a", "a"), ("a", "b"), ("b", "a")])),
        ("double-return".to_string(), graph(&[("a", "b"), ("b", "a"), ("b", "a")])),
        ("two-roots".to_string(), graph(&[("a", "b"), ("a", "b"), ("b", "a"), ("b", "a")])),
        ("triangle-chord".to_string(), graph(&[("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")])),
        (
            "triangle-loops".to_string(),
            graph(&[("a", "b"), ("b", "c"), ("c", "a"), ("a", "a"), ("b", "b"), ("c", "c")]),
        ),
    ];
    for (k, l, m) in [(2, 1, 1), (1, 2, 1), (1, 1, 2), (2, 2, 1)] {
        let g = build_sh2(&SphericalParams::new(k, l, m)).unwrap();
        out.push((format!("sh2({k},{l},{m})"), g));
    }
    for (big_h, h, h0, h1) in [(2, 1, 1, 1), (4, 2, 2, 2)] {
        let g = build_family_iv(&FamilyIVParams::new(big_h, h, h0, h1), false).unwrap();
        out.push((format!("f4({big_h},{h},{h0},{h1})"), g));
    }
    let f5 = [
        FamilyVParams {
            ell: 1,
            branches: vec![Branch::new(1, &[(0, 2)])],
        },
        FamilyVParams {
            ell: 2,
            branches: vec![Branch::new(0, &[(1, 1)]), Branch::new(1, &[(0, 1)])],
        },
    ];
    for p in f5 {
        out.push((format!("f5({p:?})"), build_family_v(&p).unwrap()));
    }
    for t in [(1, 0, 2, 2, 1, 0), (0, 0, 2, 2, 0, 0), (2, 1, 1, 1, 0, 1)] {
        let p = ThreeVertexParams::new(t.0, t.1, t.2, t.3, t.4, t.5);
        out.push((format!("tv{t:?}"), build_three_vertex(&p).unwrap()));
    }
    out
}

/// Strongly connected graphs on up to `max_v` vertices with at most
/// `max_e` edges that are not a single cycle.
pub fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_v)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec((0..n, 0..n), n..=max_e)))
        .prop_filter_map("not a valid shift graph", |(n, pairs)| {
            let vs = (0..n).map(|i| format!("v{i}"));
            let es = pairs
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| (format!("x{i}"), format!("v{a}"), format!("v{b}")));
            let g = DirectedGraph::new(vs, es).ok()?;
            ShiftContext::new(&g).ok().map(|_| g)
        })
}

/// The letters `e-` and `e+` of the shift alphabet.
pub fn alphabet(g: &DirectedGraph) -> Vec<Symbol> {
    g.edge_ids()
        .flat_map(|e| [Symbol::Minus(e), Symbol::Plus(e)])
        .collect()
}

/// Every word of length `n` over `letters`, in lexicographic order of indices.
pub fn words(letters: &[Symbol], n: usize) -> impl Iterator<Item = Vec<Symbol>> + '_ {
    let total = letters.len().pow(n as u32);
    (0..total).map(move |mut i| {
        let mut w = Vec::with_capacity(n);
        for _ in 0..n {
            w.push(letters[i % letters.len()]);
            i /= letters.len();
        }
        w
    })
}

/// A word over the graph's alphabet given as indices into [`alphabet`].
pub fn word_of(g: &DirectedGraph, idx: &[usize]) -> Vec<Symbol> {
    let a = alphabet(g);
    idx.iter().map(|&i| a[i % a.len()]).collect()
}
