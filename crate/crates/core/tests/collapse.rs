mod common;

use common::{flag, graph, graph_from};
use flaglab::collapse::{
    almost_d_collapse, count_crosspolytopes, detect_crosspolytopes, greedy_d_collapse, is_d_collapsible_exact, parse_trace, replay,
    CollapseStatus, Exactness, OrderPolicy, DEFAULT_BUDGET,
};
use flaglab::homology::{betti_all, Coefficients};
use flaglab::{Graph, SimplicialComplex};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn trimmed_betti(x: &SimplicialComplex, coeff: Coefficients) -> Vec<usize> {
    let mut b = betti_all(x, coeff).unwrap();
    while b.len() > 1 && b.last() == Some(&0) {
        b.pop();
    }
    b
}

/// Copies of ◇_d found by trying every pairing of every vertex subset of size 2d+2.
fn brute_force_census(g: &Graph, d: usize) -> (usize, usize) {
    fn pairings(rest: &[u32], acc: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for i in 1..rest.len() {
            acc.push((rest[0], rest[i]));
            let next: Vec<u32> = rest[1..].iter().enumerate().filter(|&(j, _)| j + 1 != i).map(|(_, &v)| v).collect();
            pairings(&next, acc, out);
            acc.pop();
        }
    }
    let n = g.vertex_count() as u32;
    let k = 2 * d + 2;
    let (mut all, mut induced) = (0, 0);
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let verts: Vec<u32> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let mut ps = Vec::new();
        pairings(&verts, &mut Vec::new(), &mut ps);
        for p in ps {
            let antipodal = |a: u32, b: u32| p.iter().any(|&(x, y)| (x, y) == (a.min(b), a.max(b)));
            let complete = verts.iter().all(|&a| verts.iter().all(|&b| a >= b || antipodal(a, b) || g.has_edge(a, b)));
            if complete {
                all += 1;
                if p.iter().all(|&(a, b)| !g.has_edge(a, b)) {
                    induced += 1;
                }
            }
        }
    }
    (all, induced)
}

#[test]
fn cross_polytopes_are_not_collapsible() {
    for d in 1..=3 {
        let x = flag(&Graph::cross_polytope(d));
        assert_eq!(is_d_collapsible_exact(&x, d, DEFAULT_BUDGET), Exactness::No, "d = {d}");
    }
}

#[test]
fn cone_over_the_octahedron_collapses() {
    let mut edges = common::cross_polytope_edges(2, 0);
    edges.extend((0..6).map(|v| (v, 6)));
    let x = flag(&graph_from(7, &edges));
    assert!(is_d_collapsible_exact(&x, 2, DEFAULT_BUDGET).is_yes());
    let out = almost_d_collapse(&x, 2, 0);
    assert_eq!(out.status, CollapseStatus::CollapsedBelowD);
}

#[test]
fn two_octahedra_survive_the_pipeline() {
    let mut edges = common::cross_polytope_edges(2, 0);
    edges.extend(common::cross_polytope_edges(2, 6));
    edges.push((5, 6));
    let x = flag(&graph_from(12, &edges));
    let out = almost_d_collapse(&x, 2, 3);
    assert_eq!(out.status, CollapseStatus::AlmostCollapsed);
    assert_eq!(out.surviving_crosspolytopes.len(), 2);
    assert_eq!(trimmed_betti(&out.residual, Coefficients::Rational)[2], 2);
}

#[test]
fn trace_round_trips_through_text() {
    let x = flag(&Graph::complete(5));
    let out = greedy_d_collapse(&x, 2, OrderPolicy::Lex, 0);
    let steps = parse_trace(&out.trace()).unwrap();
    assert_eq!(steps, out.steps);
    assert_eq!(replay(&x, &steps).unwrap().face_count(2), 0);
}

#[test]
fn replay_rejects_an_illegal_step() {
    let x = flag(&Graph::cross_polytope(2));
    let steps = parse_trace("0 2 -> 0 2 4\n").unwrap();
    assert!(replay(&x, &steps).unwrap_err().is_invariant());
}

#[test]
fn census_of_known_graphs() {
    assert_eq!(count_crosspolytopes(&Graph::cross_polytope(2), 2), (1, 1));
    assert_eq!(count_crosspolytopes(&Graph::complete(6), 2), (15, 0));
    assert_eq!(count_crosspolytopes(&Graph::complete(5), 2), (0, 0));
    assert_eq!(count_crosspolytopes(&Graph::cross_polytope(3), 2), (28, 4));
    assert_eq!(count_crosspolytopes(&Graph::cross_polytope(3), 3), (1, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn greedy_steps_replay_to_the_residual(g in graph(3, 11, 0.55), d in 1usize..4, seed in any::<u64>()) {
        let x = flag(&g);
        let out = greedy_d_collapse(&x, d, OrderPolicy::Random { retries: 2 }, seed);
        let replayed = replay(&x, &out.steps).unwrap();
        let a: BTreeSet<_> = replayed.all_faces().cloned().collect();
        let b: BTreeSet<_> = out.residual.all_faces().cloned().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn collapses_preserve_homology(g in graph(3, 11, 0.55), seed in any::<u64>()) {
        let x = flag(&g);
        let out = almost_d_collapse(&x, 2, seed);
        let replayed = replay(&x, &out.steps).unwrap();
        for coeff in [Coefficients::GF2, Coefficients::Gf(3), Coefficients::Rational] {
            let before = trimmed_betti(&x, coeff);
            prop_assert_eq!(&before, &trimmed_betti(&replayed, coeff));
            prop_assert_eq!(&before, &trimmed_betti(&out.residual, coeff));
        }
    }

    #[test]
    fn almost_collapsed_residuals_are_disjoint_octahedra(g in graph(6, 12, 0.6), seed in any::<u64>()) {
        let x = flag(&g);
        let out = almost_d_collapse(&x, 2, seed);
        if out.status == CollapseStatus::AlmostCollapsed {
            let mut from_copies: Vec<_> = out.surviving_crosspolytopes.iter().flat_map(|h| h.facets()).collect();
            from_copies.sort();
            prop_assert_eq!(&from_copies[..], out.residual.faces(2));
            prop_assert_eq!(out.residual.face_count(3), 0);
            let beta2 = trimmed_betti(&out.residual, Coefficients::Rational).get(2).copied().unwrap_or(0);
            prop_assert_eq!(beta2, out.surviving_crosspolytopes.len());
        }
        if out.status == CollapseStatus::CollapsedBelowD {
            prop_assert_eq!(out.residual.face_count(2), 0);
        }
    }

    #[test]
    fn census_matches_brute_force(g in graph(6, 9, 0.7), d in 1usize..3) {
        prop_assert_eq!(count_crosspolytopes(&g, d), brute_force_census(&g, d));
        let hits = detect_crosspolytopes(&g, d, true);
        prop_assert!(hits.iter().all(|h| h.induced && h.pairs.iter().all(|&(a, b)| !g.has_edge(a, b))));
    }

    #[test]
    fn exact_answers_are_sound(g in graph(3, 8, 0.6)) {
        let x = flag(&g);
        match is_d_collapsible_exact(&x, 2, DEFAULT_BUDGET) {
            Exactness::Yes(steps) => {
                let r = replay(&x, &steps).unwrap();
                prop_assert_eq!(r.face_count(2), 0);
            }
            Exactness::No => {
                let greedy = greedy_d_collapse(&x, 2, OrderPolicy::Random { retries: 4 }, 1);
                prop_assert_ne!(greedy.status, CollapseStatus::CollapsedBelowD);
            }
            Exactness::BudgetExhausted => {}
        }
    }
}

/// Connected 2d-regular graph on `n` vertices from the pairing model, by rejection.
fn random_regular(n: usize, degree: usize, rng: &mut impl rand::Rng) -> Option<Graph> {
    use rand::seq::SliceRandom;
    for _ in 0..10_000 {
        let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
        stubs.shuffle(rng);
        let mut edges: Vec<(u32, u32)> = stubs.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        let len = edges.len();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != len || edges.iter().any(|&(a, b)| a == b) {
            continue;
        }
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            return Some(g);
        }
    }
    None
}

fn is_cross_polytope_graph(g: &Graph, d: usize) -> bool {
    g.vertex_count() == 2 * d + 2 && g.edge_count() == 2 * d * (d + 1) && count_crosspolytopes(g, d).1 == 1
}

#[test]
fn exhaustive_small_graphs_at_d1() {
    for n in 1..=4 {
        for g in common::all_graphs(n) {
            let no = is_d_collapsible_exact(&flag(&g), 1, DEFAULT_BUDGET) == Exactness::No;
            assert_eq!(no, is_cross_polytope_graph(&g, 1), "{:?}", g.edges().collect::<Vec<_>>());
        }
    }
}

#[test]
fn four_regular_graphs_are_collapsible_unless_octahedral() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for round in 0..300 {
        let n = 5 + round % 10;
        let Some(g) = random_regular(n, 4, &mut rng) else { continue };
        let verdict = is_d_collapsible_exact(&flag(&g), 2, DEFAULT_BUDGET);
        assert_ne!(verdict, Exactness::BudgetExhausted);
        if verdict == Exactness::No {
            assert!(is_cross_polytope_graph(&g, 2), "non-collapsible: {:?}", g.edges().collect::<Vec<_>>());
        }
        checked += 1;
    }
    assert!(checked > 250);
}
