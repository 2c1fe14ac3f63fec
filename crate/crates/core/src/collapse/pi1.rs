//! Testable preconditions for a free fundamental group, and a bounded search
//! for embedded 2-spheres.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Rational64;
use serde::Serialize;

use super::crosspolytope::detect_crosspolytopes;
use super::greedy::{greedy_d_collapse, OrderPolicy};
use super::CollapseStatus;
use crate::complex::{clique_number, Face, SimplicialComplex};
use crate::density::{density_bound_audit, essential_density};
use crate::graph::{Graph, Vertex};

/// Outcome of the bounded density condition `ρ(Z^{(1)}) < 25/12`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityCondition {
    Holds,
    /// A vertex set within the bound whose induced graph has density `≥ 25/12`.
    Violated(Vec<Vertex>),
    /// The search budget ran out.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    /// (1) no face of dimension 5 or more
    pub dim_at_most_4: bool,
    /// (2) every embedded octahedral 2-sphere has only maximal triangles
    pub crosspolytope_triangles_maximal: bool,
    /// (3) no tetrahedron meets a 4-simplex in exactly a triangle
    pub no_tetrahedron_meets_4simplex_in_triangle: bool,
    /// (4) 3-collapsible (greedy with retries)
    pub three_collapsible: bool,
    /// (5) asphericity of bounded subcomplexes; never computed
    pub aspherical: Option<bool>,
    /// (6) density of every subcomplex on at most `vertex_bound` vertices
    pub density: DensityCondition,
    pub vertex_bound: usize,
}

impl PredicateReport {
    /// All evaluated conditions hold.
    pub fn all_evaluated_hold(&self) -> bool {
        self.dim_at_most_4
            && self.crosspolytope_triangles_maximal
            && self.no_tetrahedron_meets_4simplex_in_triangle
            && self.three_collapsible
            && self.density == DensityCondition::Holds
    }
}

/// Default vertex bound for condition (6).
pub const DEFAULT_VERTEX_BOUND: usize = 12;
const DENSITY_SEARCH_BUDGET: u64 = 2_000_000;

pub fn check_pi1_preconditions(x: &SimplicialComplex, vertex_bound: usize) -> PredicateReport {
    let g = x.one_skeleton();
    let dim_at_most_4 = if x.dim_cap().allows(5) {
        x.face_count(5) == 0
    } else {
        // truncated below dimension 5: the 1-skeleton's cliques decide
        x.face_count(4) == 0 || clique_number(&g) <= 5
    };

    let mut non_maximal: HashSet<Face> = HashSet::new();
    let mut apexes: HashMap<Face, Vec<Vertex>> = HashMap::new();
    for tet in x.faces(3) {
        for (i, tri) in tet.facets().enumerate() {
            apexes.entry(tri.clone()).or_default().push(tet.vertices()[i]);
            non_maximal.insert(tri);
        }
    }
    let crosspolytope_triangles_maximal = detect_crosspolytopes(&g, 2, false)
        .into_iter()
        .filter(|hit| hit.facets().iter().all(|t| x.contains(t)))
        .all(|hit| hit.facets().iter().all(|t| !non_maximal.contains(t)));

    let no_tetrahedron_meets_4simplex_in_triangle = x.faces(4).iter().all(|s| {
        let v = s.vertices();
        (0..5).all(|i| {
            (i + 1..5).all(|j| {
                // the triangle of s missing v[i] and v[j]
                let tri = Face::from_sorted(v.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &w)| w).collect());
                apexes.get(&tri).is_none_or(|a| a.iter().all(|w| s.contains_vertex(*w)))
            })
        })
    });

    let three_collapsible =
        greedy_d_collapse(x, 3, OrderPolicy::Random { retries: 8 }, 0).status == CollapseStatus::CollapsedBelowD;

    PredicateReport {
        dim_at_most_4,
        crosspolytope_triangles_maximal,
        no_tetrahedron_meets_4simplex_in_triangle,
        three_collapsible,
        aspherical: None,
        density: bounded_density_condition(&g, vertex_bound),
        vertex_bound,
    }
}

/// Searches for a vertex set of size `≤ bound` with `12·e ≥ 25·v`.
///
/// Dropping a vertex of degree `≤ 2` from such a set keeps the inequality, so a
/// minimal one is connected and lies in the 3-core; connected sets of the 3-core
/// are enumerated once each.
fn bounded_density_condition(g: &Graph, bound: usize) -> DensityCondition {
    if g.vertex_count() == 0 || density_bound_audit(g, 2) {
        return DensityCondition::Holds;
    }
    if let Ok(report) = essential_density(g) {
        if report.witness.len() <= bound && report.rho >= Rational64::new(25, 12) {
            return DensityCondition::Violated(report.witness);
        }
    }
    let core = three_core(g);
    let mut search = DenseSetSearch { g: &core, bound, nodes: 0, found: None };
    for v in 0..core.vertex_count() as Vertex {
        if core.degree(v) == 0 {
            continue;
        }
        let ext: Vec<Vertex> = core.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        if search.extend(&mut vec![v], 0, ext, v).is_err() {
            return DensityCondition::Inconclusive;
        }
        if let Some(w) = search.found.take() {
            return DensityCondition::Violated(w);
        }
    }
    DensityCondition::Holds
}

fn three_core(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n as Vertex).map(|v| g.degree(v)).collect();
    let mut keep = vec![true; n];
    let mut stack: Vec<Vertex> = (0..n as Vertex).filter(|&v| deg[v as usize] < 3).collect();
    while let Some(v) = stack.pop() {
        if !keep[v as usize] {
            continue;
        }
        keep[v as usize] = false;
        for &w in g.neighbors(v) {
            if keep[w as usize] {
                deg[w as usize] -= 1;
                if deg[w as usize] < 3 {
                    stack.push(w);
                }
            }
        }
    }
    g.restrict_to(&keep)
}

struct DenseSetSearch<'a> {
    g: &'a Graph,
    bound: usize,
    nodes: u64,
    found: Option<Vec<Vertex>>,
}

impl DenseSetSearch<'_> {
    /// Connected-set enumeration rooted at `root` (each set visited once).
    fn extend(&mut self, set: &mut Vec<Vertex>, edges: usize, mut ext: Vec<Vertex>, root: Vertex) -> Result<(), ()> {
        self.nodes += 1;
        if self.nodes > DENSITY_SEARCH_BUDGET {
            return Err(());
        }
        if 12 * edges >= 25 * set.len() {
            let mut w = set.clone();
            w.sort_unstable();
            self.found = Some(w);
            return Ok(());
        }
        if set.len() == self.bound {
            return Ok(());
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in self.g.neighbors(w) {
                if u > root
                    && !set.contains(&u)
                    && !next.contains(&u)
                    && !set.iter().any(|&s| self.g.has_edge(s, u))
                {
                    next.push(u);
                }
            }
            let gained = set.iter().filter(|&&s| self.g.has_edge(s, w)).count();
            set.push(w);
            self.extend(set, edges + gained, next, root)?;
            set.pop();
            if self.found.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Result of the bounded 2-sphere search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereCheck {
    pub sphere_free: bool,
    /// The triangles of an embedded 2-sphere that does not bound a stored 3-face.
    pub witness: Option<Vec<Face>>,
}

/// True iff every triangulated 2-sphere in the 2-skeleton of `x` on at most
/// `vmax` vertices is the boundary of a stored 3-face.
pub fn essentially_2sphere_free(x: &SimplicialComplex, vmax: usize) -> SphereCheck {
    let triangles = x.faces(2);
    let mut by_edge: HashMap<(Vertex, Vertex), Vec<usize>> = HashMap::new();
    for (i, t) in triangles.iter().enumerate() {
        let v = t.vertices();
        for (a, b) in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
            by_edge.entry((a, b)).or_default().push(i);
        }
    }
    let mut grower = SphereSearch { x, triangles, by_edge: &by_edge, vmax, chosen: Vec::new(), edge_use: BTreeMap::new(), vertex_use: HashMap::new() };
    for t0 in 0..triangles.len() {
        grower.add(t0);
        let found = grower.grow(t0);
        grower.remove(t0);
        if let Some(sphere) = found {
            return SphereCheck { sphere_free: false, witness: Some(sphere) };
        }
    }
    SphereCheck { sphere_free: true, witness: None }
}

/// Grows closed surfaces from a first triangle, always filling the smallest
/// edge that has one incident triangle, using only triangles after the first.
struct SphereSearch<'a> {
    x: &'a SimplicialComplex,
    triangles: &'a [Face],
    by_edge: &'a HashMap<(Vertex, Vertex), Vec<usize>>,
    vmax: usize,
    chosen: Vec<usize>,
    edge_use: BTreeMap<(Vertex, Vertex), u8>,
    vertex_use: HashMap<Vertex, u32>,
}

fn edges_of(t: &Face) -> [(Vertex, Vertex); 3] {
    let v = t.vertices();
    [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]
}

impl SphereSearch<'_> {
    fn add(&mut self, t: usize) {
        self.chosen.push(t);
        for e in edges_of(&self.triangles[t]) {
            *self.edge_use.entry(e).or_insert(0) += 1;
        }
        for &v in self.triangles[t].vertices() {
            *self.vertex_use.entry(v).or_insert(0) += 1;
        }
    }

    fn remove(&mut self, t: usize) {
        self.chosen.pop();
        for e in edges_of(&self.triangles[t]) {
            let c = self.edge_use.get_mut(&e).unwrap();
            *c -= 1;
            if *c == 0 {
                self.edge_use.remove(&e);
            }
        }
        for &v in self.triangles[t].vertices() {
            let c = self.vertex_use.get_mut(&v).unwrap();
            *c -= 1;
            if *c == 0 {
                self.vertex_use.remove(&v);
            }
        }
    }

    fn grow(&mut self, first: usize) -> Option<Vec<Face>> {
        let open = self.edge_use.iter().find(|&(_, &c)| c == 1).map(|(&e, _)| e);
        let Some(edge) = open else {
            return self.violating_sphere();
        };
        for &t in &self.by_edge[&edge] {
            if t <= first || self.chosen.contains(&t) {
                continue;
            }
            let tri = &self.triangles[t];
            if edges_of(tri).iter().any(|e| self.edge_use.get(e).copied().unwrap_or(0) >= 2) {
                continue;
            }
            let new_vertices = tri.vertices().iter().filter(|v| !self.vertex_use.contains_key(v)).count();
            if self.vertex_use.len() + new_vertices > self.vmax {
                continue;
            }
            self.add(t);
            let found = self.grow(first);
            self.remove(t);
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// The current closed surface, if it is a sphere that bounds no stored 3-face.
    fn violating_sphere(&self) -> Option<Vec<Face>> {
        let (v, e, f) = (self.vertex_use.len(), self.edge_use.len(), self.chosen.len());
        if v + f != e + 2 {
            return None;
        }
        // every vertex link must be a single cycle
        for &w in self.vertex_use.keys() {
            let ring: Vec<(Vertex, Vertex)> = self
                .chosen
                .iter()
                .map(|&t| &self.triangles[t])
                .filter(|t| t.contains_vertex(w))
                .map(|t| {
                    let o: Vec<Vertex> = t.vertices().iter().copied().filter(|&u| u != w).collect();
                    (o[0], o[1])
                })
                .collect();
            if !is_single_cycle(&ring) {
                return None;
            }
        }
        let mut faces: Vec<Face> = self.chosen.iter().map(|&t| self.triangles[t].clone()).collect();
        faces.sort();
        if v == 4 {
            let mut all: Vec<Vertex> = self.vertex_use.keys().copied().collect();
            all.sort_unstable();
            if self.x.contains(&Face::from_sorted(all)) {
                return None;
            }
        }
        Some(faces)
    }
}

fn is_single_cycle(edges: &[(Vertex, Vertex)]) -> bool {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for &(a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if adj.values().any(|n| n.len() != 2) {
        return false;
    }
    let start = edges[0].0;
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in &adj[&u] {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == adj.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{clique_complex, DimCap};

    fn flag(g: &Graph) -> SimplicialComplex {
        clique_complex(g, DimCap::Unbounded)
    }

    fn octahedron_with_apex() -> SimplicialComplex {
        let mut edges: Vec<(u32, u32)> = Graph::cross_polytope(2).edges().collect();
        edges.extend([(0, 6), (2, 6), (4, 6)]);
        flag(&Graph::from_edges(7, edges).unwrap())
    }

    #[test]
    fn predicates() {
        let k6 = flag(&Graph::complete(6));
        let r = check_pi1_preconditions(&k6, DEFAULT_VERTEX_BOUND);
        assert!(!r.dim_at_most_4);
        assert_eq!(r.density, DensityCondition::Violated(vec![0, 1, 2, 3, 4, 5]));
        let truncated = clique_complex(&Graph::complete(6), DimCap::Bounded(4));
        assert!(!check_pi1_preconditions(&truncated, DEFAULT_VERTEX_BOUND).dim_at_most_4);

        let oct = flag(&Graph::cross_polytope(2));
        let r = check_pi1_preconditions(&oct, DEFAULT_VERTEX_BOUND);
        assert!(r.dim_at_most_4 && r.crosspolytope_triangles_maximal);
        assert!(r.no_tetrahedron_meets_4simplex_in_triangle && r.three_collapsible);
        assert_eq!(r.density, DensityCondition::Holds);
        assert_eq!(r.aspherical, None);
        assert!(r.all_evaluated_hold());

        let r = check_pi1_preconditions(&octahedron_with_apex(), DEFAULT_VERTEX_BOUND);
        assert!(!r.crosspolytope_triangles_maximal);
        assert!(r.dim_at_most_4);
    }

    #[test]
    fn tetrahedron_against_a_4_simplex() {
        // 4-simplex on 0..5 and tetrahedron {0,1,2,5}: they meet in triangle {0,1,2}
        let x = SimplicialComplex::from_facets(
            6,
            [Face::new(vec![0, 1, 2, 3, 4]).unwrap(), Face::new(vec![0, 1, 2, 5]).unwrap()],
            DimCap::Unbounded,
        )
        .unwrap();
        assert!(!check_pi1_preconditions(&x, DEFAULT_VERTEX_BOUND).no_tetrahedron_meets_4simplex_in_triangle);
        let solid = flag(&Graph::complete(5));
        assert!(check_pi1_preconditions(&solid, DEFAULT_VERTEX_BOUND).no_tetrahedron_meets_4simplex_in_triangle);
    }

    #[test]
    fn dense_subsets_beyond_the_densest() {
        // a 6-vertex 13-edge block hanging off a much larger dense block would be found
        // by the flow witness; here the only dense part is small and sits in a sparse graph
        let mut edges: Vec<(u32, u32)> = Graph::complete(6).edges().take(13).collect();
        edges.extend((6..20).map(|v| (v - 1, v)));
        let g = Graph::from_edges(20, edges).unwrap();
        assert_eq!(bounded_density_condition(&g, 8), DensityCondition::Violated(vec![0, 1, 2, 3, 4, 5]));
        assert_eq!(bounded_density_condition(&g, 5), DensityCondition::Holds);
    }

    #[test]
    fn spheres() {
        let solid = flag(&Graph::complete(4));
        assert!(essentially_2sphere_free(&solid, 7).sphere_free);

        let hollow = clique_complex(&Graph::complete(4), DimCap::Bounded(2));
        let r = essentially_2sphere_free(&hollow, 7);
        assert!(!r.sphere_free);
        assert_eq!(r.witness.unwrap().len(), 4);

        let oct = flag(&Graph::cross_polytope(2));
        let r = essentially_2sphere_free(&oct, 7);
        assert_eq!(r.witness, Some(oct.faces(2).to_vec()));
        assert!(essentially_2sphere_free(&oct, 5).sphere_free);

        // K5 flag: its 2-skeleton holds bipyramids, which bound no single tetrahedron
        let r = essentially_2sphere_free(&flag(&Graph::complete(5)), 7);
        assert_eq!(r.witness.map(|w| w.len()), Some(6));
        assert!(essentially_2sphere_free(&flag(&Graph::complete(5)), 4).sphere_free);
    }
}
