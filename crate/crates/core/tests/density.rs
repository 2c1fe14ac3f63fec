mod common;

use common::{brute_force_density, flag, graph, graph_from};
use flaglab::density::{
    c_bounded_check, density_bound_audit, density_threshold, essential_density, is_strictly_balanced, max_face_degree, parse_rational,
    within_face_degree_bound,
};
use flaglab::Graph;
use num_rational::Rational64;
use proptest::prelude::*;

fn star(k: usize) -> Graph {
    graph_from(k + 1, &(1..=k as u32).map(|v| (0, v)).collect::<Vec<_>>())
}

#[test]
fn densities_of_named_graphs() {
    let rho = |g: &Graph| essential_density(g).unwrap().rho;
    assert_eq!(rho(&Graph::cross_polytope(2)), Rational64::from_integer(2));
    assert_eq!(rho(&Graph::complete(6)), Rational64::new(5, 2));
    assert_eq!(rho(&Graph::complete(5)), Rational64::from_integer(2));
    assert_eq!(rho(&star(7)), Rational64::new(7, 8));
    assert_eq!(rho(&Graph::empty(3)), Rational64::from_integer(0));
    assert!(essential_density(&Graph::empty(0)).is_err());
}

#[test]
fn threshold_values() {
    assert_eq!(density_threshold(1), Rational64::new(9, 8));
    assert_eq!(density_threshold(2), Rational64::new(25, 12));
    assert!(density_bound_audit(&Graph::cross_polytope(2), 2));
    assert!(!density_bound_audit(&Graph::complete(6), 2));
}

#[test]
fn strict_balance_examples() {
    assert!(is_strictly_balanced(&Graph::cross_polytope(2)));
    assert!(is_strictly_balanced(&Graph::complete(4)));
    // a triangle with a pendant edge is beaten by the triangle
    assert!(!is_strictly_balanced(&graph_from(4, &[(0, 1), (1, 2), (0, 2), (2, 3)])));
}

#[test]
fn c_bounded_examples() {
    let two = parse_rational("2").unwrap();
    let oct = c_bounded_check(&flag(&Graph::cross_polytope(2)), 2, &two);
    assert!(oct.pass);
    assert_eq!(oct.maxima[0].1, 4);
    // 9 > 2·√10
    assert!(!c_bounded_check(&flag(&star(9)), 2, &two).pass);
    // 4 ≤ 2·√5 but 5 > 2·√6
    assert!(c_bounded_check(&flag(&star(4)), 2, &two).pass);
    assert!(!c_bounded_check(&flag(&star(5)), 2, &two).pass);
    let k6 = flag(&Graph::complete(6));
    assert_eq!(max_face_degree(&k6, 1), 5);
    assert_eq!(max_face_degree(&k6, 2), 4);
    // boundary cases decided exactly: 4 ≤ 2·√4 but 5 > 2·√4
    assert!(within_face_degree_bound(4, 1, 2, 4, &two));
    assert!(!within_face_degree_bound(5, 1, 2, 4, &two));
    assert_eq!(parse_rational("3/2").unwrap(), parse_rational("1.5").unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flow_density_matches_brute_force(g in graph(1, 11, 0.45)) {
        let report = essential_density(&g).unwrap();
        let (e, v) = brute_force_density(&g);
        prop_assert_eq!(report.rho, Rational64::new(e as i64, v as i64));
        let w = &report.witness;
        let inside = g.edges().filter(|(a, b)| w.contains(a) && w.contains(b)).count();
        prop_assert_eq!(Rational64::new(inside as i64, w.len() as i64), report.rho);
    }

    #[test]
    fn adding_an_edge_never_lowers_density(g in graph(2, 10, 0.4), a in any::<u32>(), b in any::<u32>()) {
        let n = g.vertex_count() as u32;
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b && !g.has_edge(a, b));
        let mut edges: Vec<_> = g.edges().collect();
        edges.push((a.min(b), a.max(b)));
        let bigger = Graph::from_edges(g.vertex_count(), edges).unwrap();
        prop_assert!(essential_density(&bigger).unwrap().rho >= essential_density(&g).unwrap().rho);
    }

    #[test]
    fn audit_agrees_with_the_threshold(g in graph(1, 10, 0.5), d in 1usize..4) {
        let (e, v) = brute_force_density(&g);
        prop_assert_eq!(density_bound_audit(&g, d), Rational64::new(e as i64, v as i64) < density_threshold(d));
    }
}
