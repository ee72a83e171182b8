mod common;

use std::collections::HashMap;

use common::{arb_graph, corpus, word_of};
use dyckshift::families::{build_family_v, build_sh2, Branch, FamilyVParams, SphericalParams};
use dyckshift::graph::{are_isomorphic, check_connectivity, compute_tree_partition, contract, DirectedGraph};
use dyckshift::invariants::{compute_invariants, tabulate, InvariantTable};
use dyckshift::reconstruct::classify_family;
use dyckshift::semigroup::{expand, multiply, reduce, NormalForm, Symbol};
use dyckshift::shift::{code_counts, enumerate_orbits, is_periodic_word, power_oracle, ShiftContext};
use dyckshift::SearchConfig;
use proptest::prelude::*;

fn reduce_nonempty(g: &DirectedGraph, w: &[Symbol]) -> NormalForm {
    reduce(g, w).unwrap()
}

/// Invariants with multiplier names dropped, for comparing relabelled graphs.
fn unnamed(t: &InvariantTable) -> (Vec<u64>, Vec<u64>, Vec<u64>, Vec<(Option<usize>, Option<i64>, Vec<u64>)>) {
    let ks = 1..=t.max_period;
    let mut ms: Vec<_> = t
        .multipliers
        .iter()
        .map(|m| (m.lambda, m.delta, ks.clone().map(|k| m.count(k)).collect()))
        .collect();
    ms.sort();
    (
        ks.clone().map(|k| t.i0(k)).collect(),
        ks.clone().map(|k| t.ineg(k)).collect(),
        ks.map(|k| t.ipos(k)).collect(),
        ms,
    )
}

fn relabel(g: &DirectedGraph, seed: u64) -> DirectedGraph {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut vs: Vec<String> = (0..g.vertex_count()).map(|i| format!("q{i}")).collect();
    let mut es: Vec<String> = (0..g.edge_count()).map(|i| format!("z{i}")).collect();
    vs.shuffle(&mut rng);
    es.shuffle(&mut rng);
    let vmap: HashMap<String, String> = g.vertex_names().iter().cloned().zip(vs).collect();
    let emap: HashMap<String, String> = g.edges().iter().map(|e| e.id.clone()).zip(es).collect();
    g.relabeled(&vmap, &emap).unwrap()
}

fn matrix_power_row_sums(g: &DirectedGraph, eta: usize) -> Vec<u128> {
    let a = g.adjacency();
    let n = a.len();
    let mut p: Vec<Vec<u128>> = (0..n).map(|i| (0..n).map(|j| u128::from(i == j)).collect()).collect();
    for _ in 0..eta {
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| p[i][k] * a[k][j] as u128).sum())
                    .collect()
            })
            .collect();
    }
    p.iter().map(|row| row.iter().sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homomorphism_law(
        g in arb_graph(3, 6),
        a in prop::collection::vec(any::<usize>(), 1..=4),
        b in prop::collection::vec(any::<usize>(), 1..=4),
    ) {
        let (w1, w2) = (word_of(&g, &a), word_of(&g, &b));
        let joined: Vec<Symbol> = w1.iter().chain(&w2).copied().collect();
        prop_assert_eq!(
            reduce_nonempty(&g, &joined),
            multiply(&g, &reduce_nonempty(&g, &w1), &reduce_nonempty(&g, &w2))
        );
    }

    #[test]
    fn normal_forms_agree_under_right_multiplication(
        g in arb_graph(3, 6),
        a in prop::collection::vec(any::<usize>(), 1..=6),
    ) {
        let w = word_of(&g, &a);
        let nf = reduce_nonempty(&g, &w);
        if let NormalForm::Elem(x) = &nf {
            let twin = expand(&g, x);
            for s in common::alphabet(&g) {
                let mut l = w.clone();
                l.push(s);
                let mut r = twin.clone();
                r.push(s);
                prop_assert_eq!(reduce_nonempty(&g, &l), reduce_nonempty(&g, &r));
            }
        }
    }

    #[test]
    fn rotation_criterion_matches_power_oracle(
        g in arb_graph(4, 7),
        a in prop::collection::vec(any::<usize>(), 1..=8),
    ) {
        let w = word_of(&g, &a);
        prop_assert_eq!(is_periodic_word(&g, &w), power_oracle(&g, &w));
    }

    #[test]
    fn return_paths_are_adjacency_power_row_sums(g in arb_graph(4, 7)) {
        for v in g.vertex_ids() {
            let counts = code_counts(&g, v, 6).unwrap();
            for eta in 0..=6 {
                prop_assert_eq!(counts.d[eta], matrix_power_row_sums(&g, eta)[v.0], "eta {}", eta);
            }
        }
    }

    #[test]
    fn every_orbit_has_one_class_at_every_rotation(g in arb_graph(3, 5), k in 1usize..=5) {
        let ctx = ShiftContext::new(&g).unwrap();
        for (orbit, class) in enumerate_orbits(&g, k).unwrap() {
            prop_assert_eq!(orbit.period, k);
            for r in 0..k {
                let mut w = orbit.word.clone();
                w.rotate_left(r);
                prop_assert_eq!(&ctx.classify(&w).unwrap(), &class);
            }
        }
    }

    #[test]
    fn neutral_period_two_counts_edges(g in arb_graph(4, 7)) {
        let ctx = ShiftContext::new(&g).unwrap();
        let t = tabulate(&ctx, 2, &SearchConfig::default()).unwrap();
        prop_assert_eq!(t.i0(2), g.edge_count() as u64);
        prop_assert_eq!(t.nu + t.tau, g.edge_count());
    }

    #[test]
    fn negative_and_positive_counts_agree(g in arb_graph(3, 6)) {
        let ctx = ShiftContext::new(&g).unwrap();
        let t = tabulate(&ctx, 6, &SearchConfig::default()).unwrap();
        for k in 1..=6 {
            prop_assert_eq!(t.ineg(k), t.ipos(k), "period {}", k);
        }
    }

    #[test]
    fn invariants_survive_relabelling(g in arb_graph(3, 6), seed in any::<u64>()) {
        let h = relabel(&g, seed);
        prop_assert!(are_isomorphic(&g, &h).unwrap().is_some());
        prop_assert!(are_isomorphic(&h, &g).unwrap().is_some());
        let cfg = SearchConfig::default();
        let tg = tabulate(&ShiftContext::new(&g).unwrap(), 6, &cfg).unwrap();
        let th = tabulate(&ShiftContext::new(&h).unwrap(), 6, &cfg).unwrap();
        prop_assert_eq!(unnamed(&tg), unnamed(&th));
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(a in arb_graph(3, 5), b in arb_graph(3, 5)) {
        prop_assert!(are_isomorphic(&a, &a).unwrap().is_some());
        prop_assert_eq!(
            are_isomorphic(&a, &b).unwrap().is_some(),
            are_isomorphic(&b, &a).unwrap().is_some()
        );
    }

    #[test]
    fn forest_and_contraction(g in arb_graph(5, 8)) {
        let p = compute_tree_partition(&g).unwrap();
        prop_assert_eq!(p.tree_edge_count(), g.vertex_count() - p.roots().len());
        let c = contract(&g, &p);
        let again = compute_tree_partition(c.graph()).unwrap();
        prop_assert_eq!(again.tree_edge_count(), 0);
        let cc = contract(c.graph(), &again);
        prop_assert_eq!(cc.graph(), c.graph());
    }

    #[test]
    fn family_v_delta_accumulates_branch_sizes(
        ell in 1usize..=2,
        first in 1usize..=2,
        second in prop::option::of(1usize..=2),
    ) {
        let mut branches = vec![Branch::new(0, &[(0, first)])];
        if let Some(m) = second {
            branches.push(Branch::new(1, &[(0, m)]));
        }
        let p = FamilyVParams { ell, branches };
        let g = build_family_v(&p).unwrap();
        let t = compute_invariants(&g, ell + 4).unwrap();
        let mut running = 0;
        for (k, br) in p.branches.iter().enumerate() {
            running += br.total() as i64;
            let prefix = format!("e{}_", k + 1);
            for m in t.loop_multipliers().filter(|m| m.multiplier.cycle[0].starts_with(&prefix)) {
                prop_assert_eq!(m.delta, Some(running), "{}", m.multiplier);
            }
        }
        let top = t.loop_multipliers().find(|m| m.multiplier.cycle[0] == "etop").unwrap();
        prop_assert_eq!(top.delta, Some(running));
    }
}

#[test]
fn corpus_graphs_are_valid_shift_graphs() {
    for (name, g) in corpus() {
        let c = check_connectivity(&g);
        assert!(c.strongly_connected && !c.is_cycle, "{name}");
        let p = compute_tree_partition(&g).unwrap();
        assert_eq!(p.tree_edge_count(), g.vertex_count() - p.roots().len(), "{name}");
    }
}

#[test]
fn classification_is_isomorphism_invariant() {
    for (name, g) in corpus() {
        let t = compute_invariants(&g, 10);
        let Ok(t) = t else { continue };
        let h = relabel(&g, 7);
        let th = compute_invariants(&h, 10).unwrap();
        assert_eq!(classify_family(&t).unwrap(), classify_family(&th).unwrap(), "{name}");
    }
}

#[test]
fn sh2_invariants_do_not_depend_on_threads() {
    let g = build_sh2(&SphericalParams::new(2, 2, 1)).unwrap();
    let ctx = ShiftContext::new(&g).unwrap();
    let one = tabulate(&ctx, 8, &SearchConfig::default().with_threads(1)).unwrap();
    let four = tabulate(&ctx, 8, &SearchConfig::default().with_threads(4)).unwrap();
    assert_eq!(one.to_json(), four.to_json());
}
