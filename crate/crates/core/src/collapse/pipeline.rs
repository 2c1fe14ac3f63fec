//! Almost-d-collapse: collapse each strongly connected d-component on its own
//! and keep whatever cross-polytope boundaries survive.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use super::crosspolytope::{detect_crosspolytopes, CrossPolytopeHit};
use super::greedy::{run_greedy, Order};
use super::work::{Id, WorkComplex};
use super::{to_steps, CollapseOutcome, CollapseStatus, CollapseStep};
use crate::complex::{Face, SimplicialComplex};
use crate::dual::component_indices;
use crate::graph::{Graph, UnionFind, Vertex};

/// Randomized retries per component, with and without protected copies.
const RETRIES: u64 = 8;

struct ComponentResult {
    steps: Vec<CollapseStep>,
    removed: Vec<Face>,
    /// `None` when the component got stuck.
    survivors: Option<Vec<CrossPolytopeHit>>,
}

/// Collapses `x` towards an almost-d-collapsed complex.
///
/// Every face of dimension `≥ d` belongs to exactly one strongly connected
/// d-component, and so does every (d−1)-face that has a d-coface. Freeness of a
/// face only depends on faces of its own component, so the components are
/// collapsed independently (in parallel) and their steps concatenated in
/// component order.
pub fn almost_d_collapse(x: &SimplicialComplex, d: usize, seed: u64) -> CollapseOutcome {
    assert!(d >= 1, "d-collapsibility needs d >= 1");
    let strata = partition_by_component(x, d);
    let results: Vec<ComponentResult> = strata
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| collapse_component(x, d, s, seed, i as u64))
        .collect();

    let mut steps = Vec::new();
    let mut removed: HashSet<Face> = HashSet::new();
    let mut surviving = Vec::new();
    let mut stuck_component = None;
    for (i, r) in results.into_iter().enumerate() {
        steps.extend(r.steps);
        removed.extend(r.removed);
        match r.survivors {
            Some(hits) => surviving.extend(hits),
            None => {
                stuck_component.get_or_insert(i);
            }
        }
    }
    surviving.sort();
    let status = match (stuck_component, surviving.is_empty()) {
        (Some(_), _) => CollapseStatus::Stuck,
        (None, true) => CollapseStatus::CollapsedBelowD,
        (None, false) => CollapseStatus::AlmostCollapsed,
    };
    CollapseOutcome {
        steps,
        residual: x.without_faces(&removed),
        status,
        surviving_crosspolytopes: surviving,
        stuck_component,
    }
}

/// Per component, the faces of dimension `d−1, d, d+1, …` it owns, each list sorted.
fn partition_by_component(x: &SimplicialComplex, d: usize) -> Vec<Vec<Vec<Face>>> {
    let comps = component_indices(x, d);
    let top = x.dim().unwrap_or(0).max(d);
    let mut strata: Vec<Vec<Vec<Face>>> = vec![vec![Vec::new(); top - d + 2]; comps.len()];
    let mut owner = vec![0usize; x.face_count(d)];
    for (c, ids) in comps.iter().enumerate() {
        for &i in ids {
            owner[i] = c;
        }
    }
    let mut ridge_owner: HashMap<Face, usize> = HashMap::new();
    for (i, f) in x.faces(d).iter().enumerate() {
        for ridge in f.facets() {
            ridge_owner.insert(ridge, owner[i]);
        }
    }
    for r in x.faces(d - 1) {
        if let Some(&c) = ridge_owner.get(r) {
            strata[c][0].push(r.clone());
        }
    }
    for (i, f) in x.faces(d).iter().enumerate() {
        strata[owner[i]][1].push(f.clone());
    }
    for k in d + 1..=top {
        for f in x.faces(k) {
            let sub = Face::from_sorted(f.vertices()[..=d].to_vec());
            let c = owner[x.index_of(&sub).expect("downward closed")];
            strata[c][k - d + 1].push(f.clone());
        }
    }
    strata
}

fn collapse_component(x: &SimplicialComplex, d: usize, strata: Vec<Vec<Face>>, seed: u64, index: u64) -> ComponentResult {
    let base = WorkComplex::from_strata(d - 1, strata);
    let attempt = |order: &mut Order, protected: Option<&[bool]>| {
        let mut wc = base.clone();
        let pairs = run_greedy(&mut wc, d, order, protected);
        let census = residual_census(x, &wc, d);
        (wc, pairs, census)
    };
    let stream = |k: u64| index * 2 * (RETRIES + 1) + k;

    let mut best = attempt(&mut Order::Lex, None);
    if best.2.is_none() {
        let protected = protection(x, &base, d);
        let mut runs: Vec<(Order, bool)> = Vec::new();
        if protected.is_some() {
            runs.push((Order::Lex, true));
            runs.extend((0..RETRIES).map(|k| (Order::random(seed, stream(k)), true)));
        }
        runs.extend((0..RETRIES).map(|k| (Order::random(seed, stream(RETRIES + 1 + k)), false)));
        for (mut order, protect) in runs {
            let run = attempt(&mut order, if protect { protected.as_deref() } else { None });
            let done = run.2.is_some();
            if done || run.0.alive_at_least(d) < best.0.alive_at_least(d) {
                best = run;
            }
            if done {
                break;
            }
        }
    }
    let (wc, pairs, survivors) = best;
    ComponentResult {
        steps: to_steps(&wc, &pairs),
        removed: wc.removed().cloned().collect(),
        survivors,
    }
}

/// Induced cross-polytope copies inside the component, chosen greedily so that
/// no two share a (d−1)-face, marked as protected d-faces.
fn protection(x: &SimplicialComplex, base: &WorkComplex, d: usize) -> Option<Vec<bool>> {
    let dfaces: Vec<Id> = (0..base.len() as Id).filter(|&i| base.dim(i) == d).collect();
    let mut vertices: Vec<Vertex> = dfaces.iter().flat_map(|&i| base.face(i).vertices().to_vec()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.len() < 2 * d + 2 {
        return None;
    }
    let local = |v: Vertex| vertices.binary_search(&v).unwrap() as Vertex;
    let mut edges = Vec::new();
    for &i in &dfaces {
        let f = base.face(i).vertices();
        for a in 0..f.len() {
            for b in a + 1..f.len() {
                edges.push((local(f[a]), local(f[b])));
            }
        }
    }
    let h = Graph::from_edges(vertices.len(), edges).expect("labels are local");
    let mut used_ridges: HashSet<Face> = HashSet::new();
    let mut protected = vec![false; base.len()];
    let mut any = false;
    for hit in detect_crosspolytopes(&h, d, false) {
        let pairs: Vec<(Vertex, Vertex)> = hit.pairs.iter().map(|&(a, b)| (vertices[a as usize], vertices[b as usize])).collect();
        if pairs.iter().any(|&(a, b)| x.contains(&Face::from_sorted(vec![a, b]))) {
            continue;
        }
        let copy = CrossPolytopeHit { pairs, induced: true };
        let ids: Option<Vec<Id>> = copy.facets().iter().map(|f| base.id(f)).collect();
        let Some(ids) = ids else { continue };
        let ridges: Vec<Face> = copy.facets().iter().flat_map(|f| f.facets().collect::<Vec<_>>()).collect();
        if ridges.iter().any(|r| used_ridges.contains(r)) {
            continue;
        }
        used_ridges.extend(ridges);
        for id in ids {
            protected[id as usize] = true;
        }
        any = true;
    }
    any.then_some(protected)
}

/// The surviving cross-polytopes if the live part of `wc` has dimension `≤ d`
/// and its d-faces split into cross-polytope boundaries; `None` otherwise.
fn residual_census(x: &SimplicialComplex, wc: &WorkComplex, d: usize) -> Option<Vec<CrossPolytopeHit>> {
    match wc.top_alive_dim() {
        Some(top) if top > d => return None,
        Some(top) if top == d => {}
        _ => return Some(Vec::new()),
    }
    let dfaces: Vec<Id> = wc.alive_of_dim(d).collect();
    let slot: HashMap<Id, usize> = dfaces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut uf = UnionFind::new(dfaces.len());
    for r in wc.alive_of_dim(d - 1) {
        let live: Vec<usize> = wc.cofaces(r).iter().filter(|&&c| wc.is_alive(c)).map(|c| slot[c]).collect();
        for w in live.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut groups: HashMap<usize, Vec<&Face>> = HashMap::new();
    for (i, &f) in dfaces.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(wc.face(f));
    }
    let mut hits = Vec::with_capacity(groups.len());
    for faces in groups.into_values() {
        let pairs = cross_polytope_pairs(&faces, d)?;
        let induced = pairs.iter().all(|&(a, b)| !x.contains(&Face::from_sorted(vec![a, b])));
        hits.push(CrossPolytopeHit { pairs, induced });
    }
    hits.sort();
    Some(hits)
}

/// The antipodal pairs if `faces` are exactly the d-faces of a cross-polytope boundary.
pub(crate) fn cross_polytope_pairs(faces: &[&Face], d: usize) -> Option<Vec<(Vertex, Vertex)>> {
    if faces.len() != 1 << (d + 1) {
        return None;
    }
    let mut vertices: Vec<Vertex> = faces.iter().flat_map(|f| f.vertices().to_vec()).collect();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.len() != 2 * d + 2 {
        return None;
    }
    let mut pairs = Vec::with_capacity(d + 1);
    for &v in &vertices {
        let mut seen: Vec<Vertex> = faces
            .iter()
            .filter(|f| f.contains_vertex(v))
            .flat_map(|f| f.vertices().to_vec())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        let missing: Vec<Vertex> = vertices.iter().copied().filter(|w| seen.binary_search(w).is_err()).collect();
        let [partner] = missing[..] else { return None };
        if v < partner {
            pairs.push((v, partner));
        }
    }
    // each partner relation must be symmetric
    if pairs.len() != d + 1 {
        return None;
    }
    Some(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::replay;
    use crate::complex::{clique_complex, DimCap};
    use crate::homology::{betti, betti_numbers, Coefficients};

    fn flag(n: usize, edges: Vec<(u32, u32)>) -> SimplicialComplex {
        clique_complex(&Graph::from_edges(n, edges).unwrap(), DimCap::Unbounded)
    }

    fn octahedron_edges(offset: u32) -> Vec<(u32, u32)> {
        Graph::cross_polytope(2).edges().map(|(u, v)| (u + offset, v + offset)).collect()
    }

    #[test]
    fn octahedron_next_to_a_simplex() {
        let mut edges = octahedron_edges(0);
        edges.extend(Graph::complete(6).edges().map(|(u, v)| (u + 6, v + 6)));
        let x = flag(12, edges);
        let out = almost_d_collapse(&x, 2, 1);
        assert_eq!(out.status, CollapseStatus::AlmostCollapsed);
        assert_eq!(out.surviving_crosspolytopes.len(), 1);
        assert_eq!(out.surviving_crosspolytopes[0].vertices(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(replay(&x, &out.steps).unwrap(), out.residual);
        assert_eq!(betti(&out.residual, 2, Coefficients::Rational).unwrap(), 1);
    }

    #[test]
    fn forests_have_nothing_to_collapse() {
        let x = flag(6, vec![(0, 1), (1, 2), (1, 3), (4, 5)]);
        let out = almost_d_collapse(&x, 2, 0);
        assert_eq!(out.status, CollapseStatus::CollapsedBelowD);
        assert!(out.steps.is_empty() && out.surviving_crosspolytopes.is_empty());
    }

    #[test]
    fn octahedra_sharing_a_vertex() {
        let mut edges = octahedron_edges(0);
        // second copy on 5..=10, sharing vertex 5
        edges.extend(octahedron_edges(5));
        let x = flag(11, edges);
        let out = almost_d_collapse(&x, 2, 0);
        assert_eq!(out.status, CollapseStatus::AlmostCollapsed);
        assert_eq!(out.surviving_crosspolytopes.len(), 2);
        assert_eq!(betti(&x, 2, Coefficients::Rational).unwrap(), 2);
    }

    #[test]
    fn glued_tetrahedron_needs_protection() {
        // octahedron plus a cone over triangle {0,2,4}: the lex-first pair
        // collapses the octahedron's own triangle
        let mut edges = octahedron_edges(0);
        edges.extend([(0, 6), (2, 6), (4, 6)]);
        let x = flag(7, edges);
        let out = almost_d_collapse(&x, 2, 0);
        assert_eq!(out.status, CollapseStatus::AlmostCollapsed);
        assert_eq!(out.surviving_crosspolytopes[0].pairs, vec![(0, 1), (2, 3), (4, 5)]);
        assert_eq!(replay(&x, &out.steps).unwrap(), out.residual);
        assert_eq!(betti_numbers(&x, Coefficients::GF2).unwrap(), vec![1, 0, 1, 0]);
        assert_eq!(betti_numbers(&out.residual, Coefficients::GF2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn higher_spheres_are_stuck() {
        let x = clique_complex(&Graph::cross_polytope(3), DimCap::Unbounded);
        let out = almost_d_collapse(&x, 2, 0);
        assert_eq!(out.status, CollapseStatus::Stuck);
        assert_eq!(out.stuck_component, Some(0));
        let out = almost_d_collapse(&x, 3, 0);
        assert_eq!(out.status, CollapseStatus::AlmostCollapsed);
    }

    #[test]
    fn pair_recognition() {
        let hit = CrossPolytopeHit { pairs: vec![(0, 3), (1, 4), (2, 5)], induced: true };
        let facets = hit.facets();
        let refs: Vec<&Face> = facets.iter().collect();
        assert_eq!(cross_polytope_pairs(&refs, 2), Some(hit.pairs.clone()));
        assert_eq!(cross_polytope_pairs(&refs[1..], 2), None);
    }
}
