#![allow(dead_code)]

use flaglab::{clique_complex, DimCap, Face, Graph, SimplicialComplex};
use proptest::prelude::*;

/// Random graph on `lo..=hi` vertices, each pair present with probability `density`.
pub fn graph(lo: usize, hi: usize, density: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::bool::weighted(density), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

pub fn flag(g: &Graph) -> SimplicialComplex {
    clique_complex(g, DimCap::Unbounded)
}

pub fn face(v: &[u32]) -> Face {
    Face::new(v.to_vec()).unwrap()
}

pub fn graph_from(n: usize, edges: &[(u32, u32)]) -> Graph {
    Graph::from_edges(n, edges.iter().copied()).unwrap()
}

/// The ◇_d graph with antipodal pairs `{2i, 2i+1}` shifted by `offset`.
pub fn cross_polytope_edges(d: usize, offset: u32) -> Vec<(u32, u32)> {
    Graph::cross_polytope(d).edges().map(|(u, v)| (u + offset, v + offset)).collect()
}

pub fn projective_plane() -> SimplicialComplex {
    flaglab::harness::projective_plane()
}

/// Every edge set on `n` labelled vertices, as graphs.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        Graph::from_edges(n, edges).unwrap()
    })
}

/// Maximum of e(S)/v(S) over nonempty vertex subsets, as a reduced fraction (e, v).
pub fn brute_force_density(g: &Graph) -> (usize, usize) {
    let n = g.vertex_count();
    let mut best = (0usize, 1usize);
    for mask in 1u32..1 << n {
        let verts: Vec<u32> = (0..n as u32).filter(|v| mask >> v & 1 == 1).collect();
        let e = g.edges().filter(|&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
        if e * best.1 > best.0 * verts.len() {
            best = (e, verts.len());
        }
    }
    let gcd = num_integer::gcd(best.0, best.1).max(1);
    (best.0 / gcd, best.1 / gcd)
}
