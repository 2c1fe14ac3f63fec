//! Faces, simplicial complexes and clique (flag) complexes.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{parse_numbers, Graph, Vertex};

/// A simplex, stored as its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct Face(Vec<Vertex>);

impl Face {
    /// Sorts the vertices; fails on repeated vertices or the empty set.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateFace(format!("{vertices:?}")));
        }
        Ok(Face(vertices))
    }

    /// Caller guarantees the vertices are strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Face(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Face(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    /// The codimension-one faces, in the order "drop vertex 0, drop vertex 1, ...".
    pub fn facets(&self) -> impl Iterator<Item = Face> + '_ {
        let len = self.0.len();
        (0..if len > 1 { len } else { 0 }).map(move |i| {
            let mut v = Vec::with_capacity(len - 1);
            v.extend_from_slice(&self.0[..i]);
            v.extend_from_slice(&self.0[i + 1..]);
            Face(v)
        })
    }

    /// `self ∪ {v}`; `v` must not already be a vertex.
    pub fn with_vertex(&self, v: Vertex) -> Face {
        let pos = self.0.partition_point(|&w| w < v);
        debug_assert!(self.0.get(pos) != Some(&v));
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.extend_from_slice(&self.0[..pos]);
        out.push(v);
        out.extend_from_slice(&self.0[pos..]);
        Face(out)
    }

    /// `self ∖ {v}`, or `None` if that would be empty.
    pub fn without_vertex(&self, v: Vertex) -> Option<Face> {
        let rest: Vec<Vertex> = self.0.iter().copied().filter(|&w| w != v).collect();
        (!rest.is_empty()).then_some(Face(rest))
    }

    /// `self ∖ other`, or `None` if empty.
    pub fn minus(&self, other: &Face) -> Option<Face> {
        let rest: Vec<Vertex> = self
            .0
            .iter()
            .copied()
            .filter(|v| !other.contains_vertex(*v))
            .collect();
        (!rest.is_empty()).then_some(Face(rest))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Facet format: vertex labels separated by single spaces.
impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Face::new(parse_numbers(s, 0)?)
    }
}

/// Highest dimension materialized for a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DimCap {
    Bounded(usize),
    Unbounded,
}

impl DimCap {
    pub fn allows(self, k: usize) -> bool {
        match self {
            DimCap::Bounded(cap) => k <= cap,
            DimCap::Unbounded => true,
        }
    }

    pub fn max_dim(self) -> Option<usize> {
        match self {
            DimCap::Bounded(cap) => Some(cap),
            DimCap::Unbounded => None,
        }
    }

    /// Cap for the link of a face of dimension `face_dim`.
    fn lowered_by(self, amount: usize) -> DimCap {
        match self {
            DimCap::Bounded(cap) => DimCap::Bounded(cap.saturating_sub(amount)),
            DimCap::Unbounded => DimCap::Unbounded,
        }
    }
}

impl fmt::Display for DimCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimCap::Bounded(cap) => write!(f, "{cap}"),
            DimCap::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// A finite simplicial complex, stratified by dimension.
///
/// `faces[k]` holds the k-dimensional faces in lexicographic order. Every stored
/// face has all of its facets stored, and no face exceeds `dim_cap`.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: usize,
    faces: Vec<Vec<Face>>,
    dim_cap: DimCap,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("n", &self.n)
            .field("f", &self.f_vector())
            .field("dim_cap", &self.dim_cap)
            .finish()
    }
}

impl SimplicialComplex {
    pub fn empty(n: usize, dim_cap: DimCap) -> Self {
        SimplicialComplex {
            n,
            faces: Vec::new(),
            dim_cap,
        }
    }

    /// Downward closure of `facets`, truncated at `dim_cap`.
    pub fn from_facets<I>(n: usize, facets: I, dim_cap: DimCap) -> Result<Self>
    where
        I: IntoIterator<Item = Face>,
    {
        let mut strata: Vec<BTreeSet<Face>> = Vec::new();
        for facet in facets {
            if let Some(&v) = facet.vertices().iter().find(|&&v| v as usize >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            insert_closure(&mut strata, facet, dim_cap);
        }
        Ok(Self::from_strata(n, strata, dim_cap))
    }

    fn from_strata(n: usize, strata: Vec<BTreeSet<Face>>, dim_cap: DimCap) -> Self {
        let mut faces: Vec<Vec<Face>> = strata.into_iter().map(|s| s.into_iter().collect()).collect();
        while faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        SimplicialComplex { n, faces, dim_cap }
    }

    /// Per-dimension face lists that are already sorted and downward closed.
    pub(crate) fn from_sorted_strata(n: usize, mut faces: Vec<Vec<Face>>, dim_cap: DimCap) -> Self {
        while faces.last().is_some_and(Vec::is_empty) {
            faces.pop();
        }
        debug_assert!(faces.iter().all(|s| s.windows(2).all(|w| w[0] < w[1])));
        SimplicialComplex { n, faces, dim_cap }
    }

    /// Vertex label range `0..n`; not every label needs to be a vertex of the complex.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_cap(&self) -> DimCap {
        self.dim_cap
    }

    /// Dimension of the largest face, `None` for the void complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn faces(&self, k: usize) -> &[Face] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn face_count(&self, k: usize) -> usize {
        self.faces(k).len()
    }

    pub fn total_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// `f_k` for `k = 0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().flatten()
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.faces(face.dim()).binary_search(face).ok()
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index_of(face).is_some()
    }

    /// Euler characteristic of the stored faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    pub fn one_skeleton(&self) -> Graph {
        let mut adj = vec![Vec::new(); self.n];
        for e in self.faces(1) {
            let (u, v) = (e.vertices()[0], e.vertices()[1]);
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph::from_sorted_adjacency(adj)
    }

    /// The subcomplex of faces of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let faces = self.faces.iter().take(k + 1).cloned().collect();
        let cap = match self.dim_cap {
            DimCap::Bounded(c) => DimCap::Bounded(c.min(k)),
            DimCap::Unbounded => DimCap::Bounded(k),
        };
        SimplicialComplex::from_sorted_strata(self.n, faces, cap)
    }

    /// Maximal faces, highest dimension first.
    pub fn facets(&self) -> Vec<Face> {
        let mut out = Vec::new();
        for k in (0..self.faces.len()).rev() {
            let above = self.faces.get(k + 1);
            for f in &self.faces[k] {
                let covered = above.is_some_and(|up| {
                    up.iter().any(|g| f.is_subface_of(g))
                });
                if !covered {
                    out.push(f.clone());
                }
            }
        }
        out
    }

    /// Faces of dimension `k` that contain `face`.
    pub fn cofaces_in_dim<'a>(&'a self, face: &'a Face, k: usize) -> impl Iterator<Item = &'a Face> + 'a {
        self.faces(k).iter().filter(move |g| face.is_subface_of(g))
    }

    /// Removes the given faces; the caller guarantees the result stays downward closed.
    pub(crate) fn without_faces(&self, removed: &std::collections::HashSet<Face>) -> SimplicialComplex {
        let faces = self
            .faces
            .iter()
            .map(|s| s.iter().filter(|f| !removed.contains(*f)).cloned().collect())
            .collect();
        SimplicialComplex::from_sorted_strata(self.n, faces, self.dim_cap)
    }

    /// Disjoint union with `other`, whose labels are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let shift = self.n as Vertex;
        let len = self.faces.len().max(other.faces.len());
        let mut faces = Vec::with_capacity(len);
        for k in 0..len {
            let mut stratum: Vec<Face> = self.faces(k).to_vec();
            stratum.extend(other.faces(k).iter().map(|f| {
                Face::from_sorted(f.vertices().iter().map(|&v| v + shift).collect())
            }));
            faces.push(stratum);
        }
        let cap = match (self.dim_cap, other.dim_cap) {
            (DimCap::Bounded(a), DimCap::Bounded(b)) => DimCap::Bounded(a.min(b)),
            (DimCap::Bounded(a), DimCap::Unbounded) | (DimCap::Unbounded, DimCap::Bounded(a)) => {
                DimCap::Bounded(a)
            }
            (DimCap::Unbounded, DimCap::Unbounded) => DimCap::Unbounded,
        };
        SimplicialComplex::from_sorted_strata(self.n + other.n, faces, cap)
    }

    /// True iff every clique of the 1-skeleton (up to `dim_cap`) is a face.
    pub fn is_flag(&self) -> bool {
        let top = self.dim().unwrap_or(0);
        let cap = match self.dim_cap {
            DimCap::Bounded(c) => DimCap::Bounded(c),
            // without a cap, one dimension above the top suffices: a missing clique
            // there would show up as an unfilled boundary.
            DimCap::Unbounded => DimCap::Bounded(top + 1),
        };
        let closure = clique_complex(&self.one_skeleton(), cap);
        (0..=closure.dim().unwrap_or(0)).all(|k| closure.face_count(k) == self.face_count(k))
    }

    /// Text format: one facet per line, `#` lines are comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in self.facets() {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the facet format. `n` is one more than the largest label seen.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut facets = Vec::new();
        let mut n = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let verts = parse_numbers(line, lineno)?;
            let face = Face::new(verts).map_err(|e| Error::Parse {
                line: lineno + 1,
                message: e.to_string(),
            })?;
            n = n.max(*face.vertices().last().unwrap() as usize + 1);
            facets.push(face);
        }
        SimplicialComplex::from_facets(n, facets, DimCap::Unbounded)
    }
}

fn insert_closure(strata: &mut Vec<BTreeSet<Face>>, face: Face, cap: DimCap) {
    let k = face.dim();
    if !cap.allows(k) {
        // keep only the allowed part of the boundary
        let facets: Vec<Face> = face.facets().collect();
        for f in facets {
            insert_closure(strata, f, cap);
        }
        return;
    }
    if strata.len() <= k {
        strata.resize_with(k + 1, BTreeSet::new);
    }
    if strata[k].contains(&face) {
        return;
    }
    let facets: Vec<Face> = face.facets().collect();
    strata[k].insert(face);
    for f in facets {
        insert_closure(strata, f, cap);
    }
}

/// Flag complex of `g`: the k-faces are the (k+1)-cliques, for every `k` allowed by `dim_cap`.
///
/// Cliques are grown over the forward (higher-label) neighbourhoods, so each
/// dimension comes out in lexicographic order without sorting.
pub fn clique_complex(g: &Graph, dim_cap: DimCap) -> SimplicialComplex {
    let n = g.vertex_count();
    let mut faces: Vec<Vec<Face>> = vec![(0..n as Vertex).map(Face::vertex).collect()];
    if n == 0 {
        return SimplicialComplex::from_sorted_strata(0, Vec::new(), dim_cap);
    }
    let mut prefix = Vec::new();
    for v in 0..n as Vertex {
        let forward: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        prefix.clear();
        prefix.push(v);
        extend_cliques(g, &mut prefix, &forward, dim_cap, &mut faces);
    }
    SimplicialComplex::from_sorted_strata(n, faces, dim_cap)
}

fn extend_cliques(
    g: &Graph,
    prefix: &mut Vec<Vertex>,
    candidates: &[Vertex],
    cap: DimCap,
    faces: &mut Vec<Vec<Face>>,
) {
    let k = prefix.len(); // dimension of the faces created at this level
    if !cap.allows(k) {
        return;
    }
    for (i, &w) in candidates.iter().enumerate() {
        prefix.push(w);
        if faces.len() <= k {
            faces.push(Vec::new());
        }
        faces[k].push(Face::from_sorted(prefix.clone()));
        let rest = &candidates[i + 1..];
        if !rest.is_empty() && cap.allows(k + 1) {
            let next = crate::graph::intersect_sorted(rest, g.neighbors(w));
            if !next.is_empty() {
                extend_cliques(g, prefix, &next, cap, faces);
            }
        }
        prefix.pop();
    }
}

/// Size of the largest clique of `g`.
pub fn clique_number(g: &Graph) -> usize {
    fn grow(g: &Graph, size: usize, candidates: &[Vertex], best: &mut usize) {
        if size > *best {
            *best = size;
        }
        if size + candidates.len() <= *best {
            return;
        }
        for (i, &w) in candidates.iter().enumerate() {
            let next = crate::graph::intersect_sorted(&candidates[i + 1..], g.neighbors(w));
            grow(g, size + 1, &next, best);
        }
    }
    let mut best = 0;
    for v in 0..g.vertex_count() as Vertex {
        let forward: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        grow(g, 1, &forward, &mut best);
    }
    best
}

/// `lk_x(σ) = { τ ∖ σ : σ ⊆ τ ∈ x }`, on the same vertex labels.
pub fn link(x: &SimplicialComplex, sigma: &Face) -> Result<SimplicialComplex> {
    if !x.contains(sigma) {
        return Err(Error::FaceNotFound(sigma.to_string()));
    }
    let k = sigma.dim();
    let mut faces: Vec<Vec<Face>> = Vec::new();
    for j in (k + 1)..=x.dim().unwrap_or(0) {
        let stratum: Vec<Face> = x
            .faces(j)
            .iter()
            .filter(|t| sigma.is_subface_of(t))
            .map(|t| t.minus(sigma).expect("proper superface"))
            .collect();
        if stratum.is_empty() {
            break;
        }
        faces.push(stratum);
    }
    for s in &mut faces {
        s.sort_unstable();
    }
    Ok(SimplicialComplex::from_sorted_strata(
        x.n(),
        faces,
        x.dim_cap().lowered_by(k + 1),
    ))
}

/// Clique complex of the 1-skeleton of `x`, truncated at `dim_cap`.
pub fn flag_closure(x: &SimplicialComplex, dim_cap: DimCap) -> SimplicialComplex {
    clique_complex(&x.one_skeleton(), dim_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    pub(crate) fn octahedron() -> Graph {
        let pairs = [(0, 1), (2, 3), (4, 5)];
        let mut edges = Vec::new();
        for u in 0..6u32 {
            for v in u + 1..6 {
                if !pairs.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        graph(6, &edges)
    }

    fn c4() -> Graph {
        graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])
    }

    fn brute_force_cliques(g: &Graph, size: usize) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == size)
            .filter(|m| {
                let vs: Vec<u32> = (0..n as u32).filter(|v| m >> v & 1 == 1).collect();
                vs.iter()
                    .enumerate()
                    .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
            })
            .count()
    }

    #[test]
    fn clique_complex_of_k4() {
        let x = clique_complex(&Graph::complete(4), DimCap::Bounded(3));
        assert_eq!(x.f_vector(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn clique_complex_of_octahedron() {
        let g = octahedron();
        let x = clique_complex(&g, DimCap::Bounded(3));
        let expected: Vec<usize> = (1..=4).map(|s| brute_force_cliques(&g, s)).collect();
        assert_eq!(expected, vec![6, 12, 8, 0]);
        assert_eq!(x.f_vector(), vec![6, 12, 8]);
        assert_eq!(x.face_count(3), 0);
    }

    #[test]
    fn clique_complex_of_c4() {
        let x = clique_complex(&c4(), DimCap::Bounded(2));
        assert_eq!(x.f_vector(), vec![4, 4]);
        assert_eq!(x.face_count(2), 0);
    }

    #[test]
    fn cliques_are_lexicographic() {
        let x = clique_complex(&Graph::complete(6), DimCap::Unbounded);
        for k in 0..=5 {
            assert!(x.faces(k).windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(x.f_vector(), vec![6, 15, 20, 15, 6, 1]);
    }

    #[test]
    fn links() {
        let tet = clique_complex(&Graph::complete(4), DimCap::Bounded(3));
        let lk = link(&tet, &Face::vertex(0)).unwrap();
        assert_eq!(lk.f_vector(), vec![3, 3, 1]);

        let oct = clique_complex(&octahedron(), DimCap::Bounded(3));
        let lk = link(&oct, &Face::vertex(0)).unwrap();
        assert_eq!(lk.f_vector(), vec![4, 4]);
        let ring = lk.one_skeleton();
        assert!([2, 3, 4, 5].iter().all(|&v| ring.degree(v) == 2));
        assert!(!ring.has_edge(2, 3) && !ring.has_edge(4, 5));

        let top = Face::new(vec![0, 2, 4]).unwrap();
        assert_eq!(link(&oct, &top).unwrap().total_faces(), 0);
        assert!(link(&oct, &Face::new(vec![0, 1]).unwrap()).is_err());
    }

    #[test]
    fn flag_closures() {
        let boundary = SimplicialComplex::from_facets(
            4,
            [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]].map(|f| Face::new(f.to_vec()).unwrap()),
            DimCap::Bounded(3),
        )
        .unwrap();
        assert!(!boundary.is_flag());
        let solid = flag_closure(&boundary, DimCap::Bounded(3));
        assert_eq!(solid.f_vector(), vec![4, 6, 4, 1]);
        assert_eq!(flag_closure(&solid, DimCap::Bounded(3)), solid);

        let cycle = clique_complex(&c4(), DimCap::Bounded(2));
        assert_eq!(flag_closure(&cycle, DimCap::Bounded(2)), cycle);
    }

    #[test]
    fn text_round_trip() {
        let x = clique_complex(&octahedron(), DimCap::Unbounded);
        let text = x.to_text();
        assert_eq!(text.lines().count(), 8);
        let y = SimplicialComplex::from_text(&format!("# octahedron\n{text}")).unwrap();
        assert_eq!(y.f_vector(), x.f_vector());
        assert!(SimplicialComplex::from_text("0 0 1\n").is_err());
    }

    #[test]
    fn facets_and_skeleton() {
        let x = clique_complex(&Graph::complete(4), DimCap::Unbounded);
        assert_eq!(x.facets(), vec![Face::new(vec![0, 1, 2, 3]).unwrap()]);
        assert_eq!(x.skeleton(1).f_vector(), vec![4, 6]);
        assert_eq!(clique_number(&octahedron()), 3);
        assert_eq!(clique_number(&Graph::complete(5)), 5);
    }
}
