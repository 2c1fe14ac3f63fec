//! Dual graphs and strongly connected d-dimensional components.

use std::collections::HashMap;

use crate::complex::{Face, SimplicialComplex};
use crate::graph::UnionFind;

/// Graph on the d-faces of a complex; two d-faces are linked when they share a stored (d−1)-face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub d: usize,
    /// The d-faces, in the complex's lexicographic order.
    pub nodes: Vec<Face>,
    /// Index pairs `(i, j)` with `i < j`, sorted.
    pub links: Vec<(usize, usize)>,
}

impl DualGraph {
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for &(i, j) in &self.links {
            uf.union(i, j);
        }
        uf.set_count()
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.len() <= 1 || self.component_count() == 1
    }
}

/// Groups the d-faces of `x` (by index into `x.faces(d)`) around each shared (d−1)-face.
fn ridge_incidence(x: &SimplicialComplex, d: usize) -> HashMap<Face, Vec<usize>> {
    let mut by_ridge: HashMap<Face, Vec<usize>> = HashMap::new();
    for (i, f) in x.faces(d).iter().enumerate() {
        for ridge in f.facets() {
            by_ridge.entry(ridge).or_default().push(i);
        }
    }
    by_ridge
}

pub fn dual_graph(x: &SimplicialComplex, d: usize) -> DualGraph {
    assert!(d >= 1, "dual graphs are defined for d >= 1");
    let mut links = Vec::new();
    for (ridge, cofaces) in ridge_incidence(x, d) {
        // every facet of a stored face is stored, so `ridge` is in x
        debug_assert!(x.contains(&ridge));
        for (a, &i) in cofaces.iter().enumerate() {
            for &j in &cofaces[a + 1..] {
                links.push((i.min(j), i.max(j)));
            }
        }
    }
    links.sort_unstable();
    links.dedup();
    DualGraph {
        d,
        nodes: x.faces(d).to_vec(),
        links,
    }
}

/// Partition of the d-faces into connected components of the dual graph.
///
/// Components are ordered by their smallest face, and each component lists its
/// faces in lexicographic order.
pub fn strongly_connected_components(x: &SimplicialComplex, d: usize) -> Vec<Vec<Face>> {
    component_indices(x, d)
        .into_iter()
        .map(|ids| ids.into_iter().map(|i| x.faces(d)[i].clone()).collect())
        .collect()
}

/// Same as [`strongly_connected_components`], as indices into `x.faces(d)`.
pub fn component_indices(x: &SimplicialComplex, d: usize) -> Vec<Vec<usize>> {
    assert!(d >= 1, "strong connectivity is defined for d >= 1");
    let count = x.face_count(d);
    let mut uf = UnionFind::new(count);
    for cofaces in ridge_incidence(x, d).values() {
        for w in cofaces.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..count {
        let root = uf.find(i);
        let s = *slot.entry(root).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[s].push(i);
    }
    out
}
